#include "pbed/selector.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "pbed/errors.hpp"

namespace pbed {

void SelectWeights::validate() const {
    if (residual < 0.0 || term_count < 0.0 || penalty < 0.0 || unit_penalty < 0.0)
        throw InvalidArgument("selection weights must be non-negative");
}

std::vector<double> CombinationPlan::default_lambda_grid() {
    constexpr int kCount = 60;
    constexpr double kLo = 1e-3, kHi = 10.0;
    std::vector<double> grid(kCount);
    for (int i = 0; i < kCount; ++i)
        grid[i] = kLo * std::pow(kHi / kLo, static_cast<double>(i) / (kCount - 1));
    return grid;
}

CombinationPlan CombinationPlan::standard() {
    const auto grid = default_lambda_grid();
    CombinationPlan plan;
    plan.combos = {
        {"G", true, false, false, grid},
        {"bkg", false, true, false, grid},
        {"agg", false, false, true, grid},
        {"G+bkg", true, true, false, grid},
        {"G+agg", true, false, true, grid},
        {"bkg+agg", false, true, true, grid},
        {"G+bkg+agg", true, true, true, grid},
    };
    return plan;
}

const SymbolicVector& SolutionPool::symbols_for(const std::string& combination) const {
    const auto it = symbols.find(combination);
    if (it == symbols.end())
        throw InvalidArgument("no symbolic vector recorded for combination " + combination);
    return it->second;
}

int realizability_penalty(const SparseSolution& solution, const SymbolicVector& symbols) {
    bool agg_birth = false, agg_death = false, bkg_birth = false, bkg_death = false;
    for (std::size_t idx : solution.support) {
        if (idx >= symbols.size())
            throw InvalidArgument("support column " + std::to_string(idx) +
                                  " is not resolvable through the symbolic vector");
        switch (symbols[idx].primary.process) {
            case Process::AggBirth: agg_birth = true; break;
            case Process::AggDeath: agg_death = true; break;
            case Process::BkgBirth: bkg_birth = true; break;
            case Process::BkgDeath: bkg_death = true; break;
            case Process::Growth: break;
        }
    }
    int violations = 0;
    if (agg_birth != agg_death) ++violations;
    if (bkg_birth != bkg_death) ++violations;
    return violations;
}

double residual_score(const SparseSolution& solution, double ndot_norm_sq,
                      std::size_t rows, ResidualConvention convention) {
    switch (convention) {
        case ResidualConvention::RawSumSquares:
            return solution.residual_sq;
        case ResidualConvention::RelativeSumSquares:
            return solution.residual_sq / ndot_norm_sq;
        case ResidualConvention::MeanSquare:
            return solution.residual_sq * static_cast<double>(rows) / ndot_norm_sq;
    }
    return solution.residual_sq;
}

double score(SparseSolution& solution, double ndot_norm_sq, std::size_t rows,
             const SelectWeights& weights) {
    weights.validate();
    if (ndot_norm_sq <= 0.0)
        throw NumericError("degenerate data: the derivative vector is identically zero");
    if (solution.penalty < 0)
        throw InvalidArgument("realizability penalty not computed for this solution");
    solution.cost = weights.residual *
                        residual_score(solution, ndot_norm_sq, rows, weights.convention) +
                    weights.term_count * static_cast<double>(solution.term_count) +
                    weights.penalty * weights.unit_penalty * solution.penalty;
    return solution.cost;
}

namespace {

std::string dedup_key(const SparseSolution& s) {
    if (s.support.empty()) return "empty";  // trivial solutions collapse across combos
    std::string key = s.combination;
    char buf[32];
    for (std::size_t i : s.support) {
        std::snprintf(buf, sizeof buf, "|%zu:%.9e", i,
                      s.coefficients(static_cast<Eigen::Index>(i)));
        key += buf;
    }
    return key;
}

}  // namespace

SolutionPool sweep_solutions(const DensityField& field, const DerivativeVector& ndot,
                             const CombinationPlan& plan, const BasisCatalog& catalog,
                             const RowMask& mask) {
    for (const auto& combo : plan.combos)
        if (combo.lambdas.empty())
            throw InvalidArgument("empty sparsity grid for combination " + combo.name);

    const std::size_t p = field.flat_size();
    if (ndot.entries.size() != static_cast<Eigen::Index>(p))
        throw InvalidArgument("derivative vector length does not match the field");

    // Masked right-hand side, shared across combinations.
    const bool full = mask.full(p);
    Eigen::VectorXd b;
    if (full) {
        b = ndot.entries;
    } else {
        b.resize(static_cast<Eigen::Index>(mask.count()));
        for (std::size_t r = 0; r < mask.count(); ++r)
            b(static_cast<Eigen::Index>(r)) =
                ndot.entries(static_cast<Eigen::Index>(mask.indices[r]));
    }

    SolutionPool pool;
    pool.masked_rows = static_cast<std::size_t>(b.size());
    pool.ndot_norm_sq = b.squaredNorm();

    // Family columns are evaluated once and shared by every combination.
    std::vector<CandidateColumn> agg_cols, bkg_cols, growth_cols;
    const bool need_agg = std::any_of(plan.combos.begin(), plan.combos.end(),
                                      [](const auto& c) { return c.aggregation; });
    const bool need_bkg = std::any_of(plan.combos.begin(), plan.combos.end(),
                                      [](const auto& c) { return c.breakage; });
    const bool need_growth = std::any_of(plan.combos.begin(), plan.combos.end(),
                                         [](const auto& c) { return c.growth; });
    if (need_agg) agg_cols = build_sublibrary(field, Family::Aggregation, catalog);
    if (need_bkg) bkg_cols = build_sublibrary(field, Family::Breakage, catalog);
    if (need_growth) growth_cols = build_sublibrary(field, Family::Growth, catalog);

    std::map<std::string, std::size_t> dedup;  // key -> index into pool.solutions

    for (const auto& combo : plan.combos) {
        std::vector<std::vector<CandidateColumn>> sublibs;
        if (combo.aggregation) sublibs.push_back(agg_cols);
        if (combo.breakage) sublibs.push_back(bkg_cols);
        if (combo.growth) sublibs.push_back(growth_cols);
        if (sublibs.empty())
            throw InvalidArgument("combination " + combo.name + " selects no family");

        Library master = assemble_master(std::move(sublibs), combo.name);
        CurationResult curation = eliminate_dependent_columns(master);
        pool.symbols[combo.name] = curation.symbols;
        pool.groups[combo.name] = curation.groups;

        const Eigen::MatrixXd& omega = curation.curated.matrix();
        std::optional<StlsSolver> solver;
        if (full) {
            solver.emplace(omega, b);
        } else {
            Eigen::MatrixXd masked(b.size(), omega.cols());
            for (std::size_t r = 0; r < mask.count(); ++r)
                masked.row(static_cast<Eigen::Index>(r)) =
                    omega.row(static_cast<Eigen::Index>(mask.indices[r]));
            solver.emplace(masked, b);
        }

        for (double lambda : combo.lambdas) {
            StlsConfig cfg;
            cfg.lambda = lambda;
            SparseSolution sol = solver->solve(cfg);
            sol.combination = combo.name;
            const std::string key = dedup_key(sol);
            const auto it = dedup.find(key);
            if (it == dedup.end()) {
                dedup[key] = pool.solutions.size();
                pool.solutions.push_back(std::move(sol));
            } else if (sol.residual_sq < pool.solutions[it->second].residual_sq) {
                pool.solutions[it->second] = std::move(sol);
            }
        }
    }
    return pool;
}

SparseSolution select_optimal(SolutionPool& pool, const SelectWeights& weights) {
    if (pool.solutions.empty()) throw InvalidArgument("cannot select from an empty pool");

    std::size_t best = pool.solutions.size();
    for (std::size_t i = 0; i < pool.solutions.size(); ++i) {
        SparseSolution& sol = pool.solutions[i];
        if (sol.support.empty())
            sol.penalty = 0;
        else
            sol.penalty = realizability_penalty(sol, pool.symbols_for(sol.combination));
        score(sol, pool.ndot_norm_sq, pool.masked_rows, weights);
        if (best == pool.solutions.size()) {
            best = i;
            continue;
        }
        const SparseSolution& cur = pool.solutions[best];
        const auto key = [](const SparseSolution& s) {
            return std::make_tuple(s.cost, s.penalty, s.term_count, s.residual_sq,
                                   s.combination);
        };
        if (key(sol) < key(cur)) best = i;
    }
    return pool.solutions[best];
}

}  // namespace pbed
