#include "pbed/library.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace pbed {

BasisCatalog BasisCatalog::standard() {
    BasisCatalog c;
    // Power and product functions up to total degree 3.
    c.agg = {{0, 0}, {1, 0}, {2, 0}, {3, 0}, {0, 1},
             {0, 2}, {0, 3}, {1, 1}, {2, 1}, {1, 2}};
    // Power and reciprocal-power functions up to order 3.
    for (int e : {0, 1, 2, 3, -1, -2, -3}) {
        c.bkg_birth.push_back({0, e});
        c.bkg_death.push_back({e, 0});
        c.growth.push_back({e, 0});
    }
    return c;
}

Library::Library(Eigen::MatrixXd omega, std::vector<ColumnDescriptor> descriptors,
                 std::string combination, bool curated)
    : omega_(std::move(omega)), desc_(std::move(descriptors)), comb_(std::move(combination)),
      curated_(curated) {
    if (static_cast<std::size_t>(omega_.cols()) != desc_.size())
        throw InvalidArgument("library descriptor count does not match matrix columns");
}

std::vector<CandidateColumn> build_sublibrary(const DensityField& field, Family family,
                                              const BasisCatalog& catalog) {
    std::vector<CandidateColumn> cols;
    switch (family) {
        case Family::Aggregation: {
            if (catalog.agg.empty()) throw InvalidArgument("empty aggregation catalog");
            // Birth columns share the convolution across equal y-exponents.
            std::map<int, Eigen::VectorXd> conv;
            for (const auto& basis : catalog.agg) {
                auto it = conv.find(basis.b);
                if (it == conv.end())
                    it = conv.emplace(basis.b, agg_birth_convolution(field, basis.b)).first;
                Eigen::VectorXd values = it->second;
                const auto j = static_cast<Eigen::Index>(field.rows());
                const auto k = static_cast<Eigen::Index>(field.cols());
                for (Eigen::Index m = 0; m < k; ++m)
                    for (Eigen::Index u = 0; u < j; ++u)
                        values(m * j + u) *=
                            basis.multiplier *
                            (basis.a == 0 ? 1.0 : std::pow(field.xgrid()[static_cast<std::size_t>(u)], basis.a));
                cols.push_back({Process::AggBirth, basis, std::move(values)});
            }
            for (const auto& basis : catalog.agg) cols.push_back(agg_death_column(field, basis));
            break;
        }
        case Family::Breakage: {
            if (catalog.bkg_birth.empty() && catalog.bkg_death.empty())
                throw InvalidArgument("empty breakage catalog");
            for (const auto& basis : catalog.bkg_birth)
                cols.push_back(bkg_birth_column(field, basis));
            for (const auto& basis : catalog.bkg_death)
                cols.push_back(bkg_death_column(field, basis));
            break;
        }
        case Family::Growth: {
            if (catalog.growth.empty()) throw InvalidArgument("empty growth catalog");
            for (const auto& basis : catalog.growth) cols.push_back(growth_column(field, basis));
            break;
        }
    }
    return cols;
}

Library assemble_master(std::vector<std::vector<CandidateColumn>> sublibs,
                        std::string combination) {
    std::size_t q = 0;
    std::size_t p = 0;
    for (const auto& sub : sublibs) {
        for (const auto& col : sub) {
            if (p == 0) p = static_cast<std::size_t>(col.values.size());
            else if (static_cast<std::size_t>(col.values.size()) != p)
                throw InvalidArgument("sub-libraries evaluated on different system lengths");
            ++q;
        }
    }
    if (q == 0) throw InvalidArgument("cannot assemble an empty master library");

    Eigen::MatrixXd omega(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q));
    std::vector<ColumnDescriptor> desc;
    desc.reserve(q);
    Eigen::Index at = 0;
    std::set<std::pair<int, std::string>> seen;
    for (auto& sub : sublibs)
        for (auto& col : sub) {
            if (!seen.emplace(static_cast<int>(col.process), col.basis.name()).second)
                throw InvalidArgument("duplicate (process, basis) pair: " + col.name());
            omega.col(at++) = col.values;
            desc.push_back({col.process, col.basis});
        }
    return Library(std::move(omega), std::move(desc), std::move(combination));
}

namespace {

constexpr double kMembershipTol = 1e-5;    // relative contribution for group membership
constexpr double kWeakFraction = 0.1;      // weak/strong split on the null vector

struct RemovalEdge {
    std::size_t kept;
    double scale;   // col_kept ~= scale * col_removed
    bool has_kept;
};

}  // namespace

CurationResult eliminate_dependent_columns(const Library& lib, double tolerance) {
    if (lib.curated()) throw InvalidArgument("library is already curated");
    if (tolerance <= 0.0) throw InvalidArgument("curation tolerance must be positive");

    const Eigen::MatrixXd& A = lib.matrix();
    const auto q = static_cast<std::size_t>(A.cols());
    const auto p = A.rows();

    std::vector<double> norms(q);
    std::vector<bool> alive(q, true);
    CurationResult result;
    for (std::size_t i = 0; i < q; ++i) {
        norms[i] = A.col(static_cast<Eigen::Index>(i)).norm();
        if (norms[i] == 0.0) {
            alive[i] = false;
            result.degenerate.push_back(i);
        }
    }

    std::map<std::size_t, RemovalEdge> edges;

    while (true) {
        // Greedy left-to-right rank detection on unit-normalized columns with
        // twice-reorthogonalized Gram-Schmidt; R reproduces the basis columns
        // so dependents can be expressed over the original indices.
        std::vector<std::size_t> basis;
        Eigen::MatrixXd Q(p, static_cast<Eigen::Index>(q));
        Eigen::MatrixXd R = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(q),
                                                  static_cast<Eigen::Index>(q));
        struct Dep {
            std::size_t col;
            Eigen::VectorXd proj;  // projection onto the orthonormal basis
        };
        std::vector<Dep> deps;

        for (std::size_t i = 0; i < q; ++i) {
            if (!alive[i]) continue;
            Eigen::VectorXd v = A.col(static_cast<Eigen::Index>(i)) / norms[i];
            const auto nb = static_cast<Eigen::Index>(basis.size());
            Eigen::VectorXd h = Eigen::VectorXd::Zero(nb);
            for (int pass = 0; pass < 2; ++pass)
                for (Eigen::Index n = 0; n < nb; ++n) {
                    const double g = Q.col(n).dot(v);
                    v -= g * Q.col(n);
                    h(n) += g;
                }
            const double res = v.norm();
            if (res > tolerance) {
                Q.col(nb) = v / res;
                R.col(nb).head(nb) = h;
                R(nb, nb) = res;
                basis.push_back(i);
            } else {
                deps.push_back({i, h});
            }
        }
        if (deps.empty()) break;

        std::set<std::size_t> removed_now;
        for (const auto& dep : deps) {
            // Coefficients over the normalized basis columns present when the
            // dependency was detected: solve R c = proj on that leading block.
            const auto nb = dep.proj.size();
            const Eigen::VectorXd c = R.topLeftCorner(nb, nb)
                                          .triangularView<Eigen::Upper>()
                                          .solve(dep.proj);
            const double cmax = std::max(1.0, c.cwiseAbs().maxCoeff());

            DependencyGroup group;
            std::vector<double> raw;  // raw-scale expansion coefficients
            for (Eigen::Index n = 0; n < nb; ++n) {
                if (std::abs(c(n)) <= kMembershipTol * cmax) continue;
                group.members.push_back(basis[static_cast<std::size_t>(n)]);
                raw.push_back(c(n) * norms[dep.col] / norms[basis[static_cast<std::size_t>(n)]]);
            }
            group.members.push_back(dep.col);
            raw.push_back(-1.0);

            bool stale = false;
            for (std::size_t m : group.members)
                if (removed_now.count(m)) stale = true;
            if (stale) continue;  // relation refers to a column removed this round

            group.null_vector =
                Eigen::Map<Eigen::VectorXd>(raw.data(), static_cast<Eigen::Index>(raw.size()));
            group.null_vector /= group.null_vector.cwiseAbs().maxCoeff();
            const double span = group.null_vector.cwiseAbs().maxCoeff();
            for (std::size_t m = 0; m < group.members.size(); ++m) {
                if (std::abs(group.null_vector(static_cast<Eigen::Index>(m))) <
                    kWeakFraction * span)
                    group.weak.push_back(group.members[m]);
                else
                    group.strong.push_back(group.members[m]);
            }

            // Removal rule: drop the lowest-indexed strong member, keep the
            // highest-indexed one as the reference the OR ledger points to.
            std::size_t to_remove;
            RemovalEdge edge{0, 0.0, false};
            if (group.strong.size() >= 2) {
                to_remove = group.strong.front();
                edge.kept = group.strong.back();
                edge.has_kept = true;
            } else {
                // Dominated by the dependent column itself; drop it and point
                // the ledger at the largest remaining contributor, if any.
                to_remove = dep.col;
                double best = 0.0;
                for (std::size_t m = 0; m + 1 < group.members.size(); ++m) {
                    const double mag =
                        std::abs(group.null_vector(static_cast<Eigen::Index>(m)));
                    if (mag > best) {
                        best = mag;
                        edge.kept = group.members[m];
                        edge.has_kept = true;
                    }
                }
            }
            if (edge.has_kept) {
                const auto rm = static_cast<Eigen::Index>(to_remove);
                const auto kp = static_cast<Eigen::Index>(edge.kept);
                edge.scale = A.col(kp).dot(A.col(rm)) / A.col(rm).squaredNorm();
            }
            group.removed = to_remove;
            result.groups.push_back(std::move(group));
            alive[to_remove] = false;
            removed_now.insert(to_remove);
            if (edge.has_kept) edges[to_remove] = edge;
            else result.degenerate.push_back(to_remove);
        }
    }

    // Chain-resolve removal edges onto surviving columns and build outputs.
    std::vector<Eigen::Index> kept_cols;
    for (std::size_t i = 0; i < q; ++i)
        if (alive[i]) kept_cols.push_back(static_cast<Eigen::Index>(i));

    Eigen::MatrixXd curated(p, static_cast<Eigen::Index>(kept_cols.size()));
    std::vector<ColumnDescriptor> desc;
    SymbolicVector symbols;
    std::map<std::size_t, std::size_t> kept_slot;
    for (std::size_t s = 0; s < kept_cols.size(); ++s) {
        const auto i = static_cast<std::size_t>(kept_cols[s]);
        curated.col(static_cast<Eigen::Index>(s)) = A.col(kept_cols[s]);
        desc.push_back(lib.descriptors()[i]);
        symbols.push_back({lib.descriptors()[i], {}});
        kept_slot[i] = s;
    }
    for (const auto& [removed, first_edge] : edges) {
        double scale = first_edge.scale;
        std::size_t target = first_edge.kept;
        while (!alive[target]) {
            const auto it = edges.find(target);
            if (it == edges.end()) { scale = 0.0; break; }  // chain ends degenerate
            scale *= it->second.scale;
            target = it->second.kept;
        }
        if (scale != 0.0)
            symbols[kept_slot.at(target)].equivalences.push_back(
                {lib.descriptors()[removed], scale});
    }

    result.curated =
        Library(std::move(curated), std::move(desc), lib.combination(), true);
    result.symbols = std::move(symbols);
    return result;
}

}  // namespace pbed
