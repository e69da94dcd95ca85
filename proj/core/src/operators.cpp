#include "pbed/operators.hpp"

#include <cmath>

namespace pbed {

double BasisFunction::eval(double x, double y) const {
    double v = multiplier;
    if (a != 0) v *= std::pow(x, a);
    if (b != 0) v *= std::pow(y, b);
    return v;
}

namespace {

std::string monomial_name(int a, int b) {
    auto var_pow = [](const char* var, int e) -> std::string {
        if (e == 1) return var;
        return std::string(var) + "^" + std::to_string(e);
    };
    std::string num, den;
    if (a > 0) num += var_pow("x", a);
    if (b > 0) num += var_pow("y", b);
    if (a < 0) den += var_pow("x", -a);
    if (b < 0) den += var_pow("y", -b);
    if (num.empty()) num = "1";
    return den.empty() ? num : num + "/" + den;
}

std::string trim_number(double v) {
    std::string s = std::to_string(v);
    s.erase(s.find_last_not_of('0') + 1);
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
}

}  // namespace

std::string BasisFunction::name() const {
    const std::string mono = monomial_name(a, b);
    if (multiplier == 1.0) return mono;
    if (multiplier == -1.0) return "-" + mono;
    if (mono == "1") return trim_number(multiplier);
    return trim_number(multiplier) + mono;
}

const char* to_string(Process p) {
    switch (p) {
        case Process::AggBirth: return "agg-birth";
        case Process::AggDeath: return "agg-death";
        case Process::BkgBirth: return "bkg-birth";
        case Process::BkgDeath: return "bkg-death";
        case Process::Growth: return "growth";
    }
    return "unknown";
}

const char* operator_label(Process p) {
    switch (p) {
        case Process::AggBirth: return "B_agg";
        case Process::AggDeath: return "D_agg";
        case Process::BkgBirth: return "B_bkg";
        case Process::BkgDeath: return "D_bkg";
        case Process::Growth: return "G";
    }
    return "?";
}

Family family_of(Process p) {
    switch (p) {
        case Process::AggBirth:
        case Process::AggDeath: return Family::Aggregation;
        case Process::BkgBirth:
        case Process::BkgDeath: return Family::Breakage;
        case Process::Growth: return Family::Growth;
    }
    return Family::Growth;
}

double trapz(std::span<const double> values, double spacing) {
    if (values.size() < 2) return 0.0;
    double acc = 0.5 * (values.front() + values.back());
    for (std::size_t i = 1; i + 1 < values.size(); ++i) acc += values[i];
    return acc * spacing;
}

namespace {

Eigen::Index flat_index(Eigen::Index i, Eigen::Index m, Eigen::Index j) { return m * j + i; }

/// Powers x^e for every grid point, e possibly negative.
Eigen::VectorXd grid_powers(const InternalGrid& g, int e) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(g.size()));
    for (std::size_t i = 0; i < g.size(); ++i)
        v(static_cast<Eigen::Index>(i)) = e == 0 ? 1.0 : std::pow(g[i], e);
    return v;
}

}  // namespace

Eigen::VectorXd agg_birth_convolution(const DensityField& field, int b) {
    const auto j = static_cast<Eigen::Index>(field.rows());
    const auto k = static_cast<Eigen::Index>(field.cols());
    const double dx = field.xgrid().spacing();
    const double x1 = field.xgrid().front();
    // Offset of the grid floor in spacing units. When x1 = c*dx (integer c)
    // every partner value x_i - y lands exactly on a node; otherwise it is
    // snapped to the nearest node, an O(x1) approximation.
    const auto c = static_cast<Eigen::Index>(std::llround(x1 / dx));

    const Eigen::MatrixXd& n = field.values();
    const Eigen::VectorXd yb = grid_powers(field.xgrid(), b);

    Eigen::VectorXd col = Eigen::VectorXd::Zero(j * k);
    for (Eigen::Index m = 0; m < k; ++m) {
        const double* nm = n.col(m).data();
        const double* w = yb.data();
        for (Eigen::Index u = 0; u < j; ++u) {
            const Eigen::Index vmax = u - c;
            if (vmax < 1) continue;  // fewer than 2 samples: degenerate trapezoid
            double acc = 0.0;
            for (Eigen::Index v = 1; v < vmax; ++v) acc += w[v] * nm[v] * nm[vmax - v];
            acc += 0.5 * (w[0] * nm[0] * nm[vmax] + w[vmax] * nm[vmax] * nm[0]);
            col(flat_index(u, m, j)) = 0.5 * acc * dx;
        }
    }
    return col;
}

CandidateColumn agg_birth_column(const DensityField& field, const BasisFunction& basis) {
    const auto j = static_cast<Eigen::Index>(field.rows());
    const auto k = static_cast<Eigen::Index>(field.cols());
    Eigen::VectorXd col = agg_birth_convolution(field, basis.b);
    const Eigen::VectorXd xa = grid_powers(field.xgrid(), basis.a);
    for (Eigen::Index m = 0; m < k; ++m)
        for (Eigen::Index u = 0; u < j; ++u)
            col(flat_index(u, m, j)) *= basis.multiplier * xa(u);
    return {Process::AggBirth, basis, std::move(col)};
}

CandidateColumn agg_death_column(const DensityField& field, const BasisFunction& basis) {
    const auto j = static_cast<Eigen::Index>(field.rows());
    const auto k = static_cast<Eigen::Index>(field.cols());
    const double dx = field.xgrid().spacing();
    const Eigen::MatrixXd& n = field.values();
    const Eigen::VectorXd yb = grid_powers(field.xgrid(), basis.b);
    const Eigen::VectorXd xa = grid_powers(field.xgrid(), basis.a);

    // Trapezoid weights: 1/2 at both ends of the full-grid integral.
    Eigen::VectorXd col(j * k);
    for (Eigen::Index m = 0; m < k; ++m) {
        const auto nm = n.col(m);
        double moment = yb.dot(nm) - 0.5 * (yb(0) * nm(0) + yb(j - 1) * nm(j - 1));
        moment *= dx;
        for (Eigen::Index u = 0; u < j; ++u)
            col(flat_index(u, m, j)) = basis.multiplier * xa(u) * nm(u) * moment;
    }
    return {Process::AggDeath, basis, std::move(col)};
}

CandidateColumn bkg_birth_column(const DensityField& field, const BasisFunction& basis) {
    if (basis.a != 0)
        throw InvalidArgument("breakage birth basis must depend on y only, got " +
                              basis.name());
    const auto j = static_cast<Eigen::Index>(field.rows());
    const auto k = static_cast<Eigen::Index>(field.cols());
    const double dx = field.xgrid().spacing();
    const Eigen::MatrixXd& n = field.values();
    const Eigen::VectorXd yb = grid_powers(field.xgrid(), basis.b);

    Eigen::VectorXd col(j * k);
    for (Eigen::Index m = 0; m < k; ++m) {
        const auto nm = n.col(m);
        // Suffix trapezoid sums: S_i = integral from x_i to the grid cap.
        double suffix = 0.0;
        col(flat_index(j - 1, m, j)) = 0.0;
        for (Eigen::Index u = j - 2; u >= 0; --u) {
            suffix += 0.5 * dx * (yb(u) * nm(u) + yb(u + 1) * nm(u + 1));
            col(flat_index(u, m, j)) = basis.multiplier * suffix;
        }
    }
    return {Process::BkgBirth, basis, std::move(col)};
}

CandidateColumn bkg_death_column(const DensityField& field, const BasisFunction& basis) {
    if (basis.b != 0)
        throw InvalidArgument("breakage death basis must depend on x only, got " +
                              basis.name());
    const auto j = static_cast<Eigen::Index>(field.rows());
    const auto k = static_cast<Eigen::Index>(field.cols());
    const Eigen::MatrixXd& n = field.values();
    const Eigen::VectorXd xa = grid_powers(field.xgrid(), basis.a);

    Eigen::VectorXd col(j * k);
    for (Eigen::Index m = 0; m < k; ++m)
        for (Eigen::Index u = 0; u < j; ++u)
            col(flat_index(u, m, j)) = basis.multiplier * xa(u) * n(u, m);
    return {Process::BkgDeath, basis, std::move(col)};
}

CandidateColumn growth_column(const DensityField& field, const BasisFunction& basis) {
    if (basis.b != 0)
        throw InvalidArgument("growth basis must depend on x only, got " + basis.name());
    const auto j = static_cast<Eigen::Index>(field.rows());
    const auto k = static_cast<Eigen::Index>(field.cols());
    if (j < 3) throw InvalidArgument("growth column needs j >= 3 grid points");
    const double dx = field.xgrid().spacing();
    const Eigen::MatrixXd& n = field.values();
    const Eigen::VectorXd xa = grid_powers(field.xgrid(), basis.a);

    Eigen::VectorXd col(j * k);
    Eigen::VectorXd f(j);
    for (Eigen::Index m = 0; m < k; ++m) {
        f = basis.multiplier * xa.cwiseProduct(n.col(m));
        col(flat_index(0, m, j)) = (-3.0 * f(0) + 4.0 * f(1) - f(2)) / (2.0 * dx);
        for (Eigen::Index u = 1; u + 1 < j; ++u)
            col(flat_index(u, m, j)) = (f(u + 1) - f(u - 1)) / (2.0 * dx);
        col(flat_index(j - 1, m, j)) =
            (3.0 * f(j - 1) - 4.0 * f(j - 2) + f(j - 3)) / (2.0 * dx);
    }
    return {Process::Growth, basis, std::move(col)};
}

CandidateColumn evaluate_column(const DensityField& field, Process process,
                                const BasisFunction& basis) {
    switch (process) {
        case Process::AggBirth: return agg_birth_column(field, basis);
        case Process::AggDeath: return agg_death_column(field, basis);
        case Process::BkgBirth: return bkg_birth_column(field, basis);
        case Process::BkgDeath: return bkg_death_column(field, basis);
        case Process::Growth: return growth_column(field, basis);
    }
    throw InvalidArgument("unknown process tag");
}

}  // namespace pbed
