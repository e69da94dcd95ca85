#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pbed/grid.hpp"
#include "pbed/library.hpp"
#include "pbed/stls.hpp"

namespace pbed {

/// How the residual enters the model-selection cost. RawSumSquares is the
/// default: with order-unity weights the squared residual of a structurally
/// correct fit sits far below one term's cost, while wrong structures pay a
/// large penalty. RelativeSumSquares (residual / ||ndot||^2) is bounded by 1,
/// so an empty model (cost lambda_1) would dominate every non-empty one at
/// unit weights; MeanSquare (relative residual times the row count) repairs
/// that but re-weights residual differences so strongly that fitting
/// differentiation error with extra terms becomes profitable. Both remain
/// available for data whose units make the raw convention awkward.
enum class ResidualConvention { RawSumSquares, MeanSquare, RelativeSumSquares };

struct SelectWeights {
    double residual = 1.0;     // lambda_1
    double term_count = 1.0;   // lambda_2
    double penalty = 1.0;      // lambda_3
    double unit_penalty = 1.0; // score added per pairing violation
    ResidualConvention convention = ResidualConvention::RawSumSquares;

    void validate() const;
};

/// The 7 non-empty subsets of {growth, breakage, aggregation}, each with its
/// own sparsity-index sweep grid.
struct CombinationPlan {
    struct Combo {
        std::string name;
        bool growth = false;
        bool breakage = false;
        bool aggregation = false;
        std::vector<double> lambdas;
    };
    std::vector<Combo> combos;

    static std::vector<double> default_lambda_grid();  // 60 log-spaced in [1e-3, 10]
    static CombinationPlan standard();
};

/// Deduplicated sparse solutions from the combination x lambda sweep, plus
/// the per-combination interpretation context needed to formulate them.
struct SolutionPool {
    std::vector<SparseSolution> solutions;
    std::map<std::string, SymbolicVector> symbols;            // per combination
    std::map<std::string, std::vector<DependencyGroup>> groups;
    std::size_t masked_rows = 0;
    double ndot_norm_sq = 0.0;  // over the masked rows

    const SymbolicVector& symbols_for(const std::string& combination) const;
};

/// Count of pairing violations: for breakage and for aggregation separately,
/// a birth term without the matching death term (or vice versa) is one
/// violation. Growth imposes no pairing. Result lies in {0, 1, 2}.
int realizability_penalty(const SparseSolution& solution, const SymbolicVector& symbols);

/// Residual part of the cost under a convention, given the masked system.
double residual_score(const SparseSolution& solution, double ndot_norm_sq,
                      std::size_t rows, ResidualConvention convention);

/// Three-term selection cost; requires solution.penalty to be filled in.
/// Stores the cost on the solution and returns it.
double score(SparseSolution& solution, double ndot_norm_sq, std::size_t rows,
             const SelectWeights& weights);

/// Build, curate and sweep every combination of sub-libraries over the given
/// row mask, collecting the deduplicated solution pool.
SolutionPool sweep_solutions(const DensityField& field, const DerivativeVector& ndot,
                             const CombinationPlan& plan, const BasisCatalog& catalog,
                             const RowMask& mask);

/// Score the pool and return the minimum-cost solution. Ties break on lower
/// penalty, then fewer terms, then lower residual, then combination tag.
SparseSolution select_optimal(SolutionPool& pool, const SelectWeights& weights);

}  // namespace pbed
