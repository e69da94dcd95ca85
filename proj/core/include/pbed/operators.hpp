#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>

#include "pbed/grid.hpp"

namespace pbed {

/// One candidate function x^a * y^b (integer exponents, negatives allowed for
/// reciprocal powers) with a scalar multiplier. x is the parent coordinate of
/// the row being evaluated, y the integration dummy.
struct BasisFunction {
    int a = 0;           // exponent of x
    int b = 0;           // exponent of y
    double multiplier = 1.0;

    double eval(double x, double y) const;
    /// Compact display name, e.g. "1", "x^2y", "1/x".
    std::string name() const;

    bool operator==(const BasisFunction& o) const {
        return a == o.a && b == o.b && multiplier == o.multiplier;
    }
};

enum class Process { AggBirth, AggDeath, BkgBirth, BkgDeath, Growth };

const char* to_string(Process p);
/// Operator label used in rendered models: B_agg, D_agg, B_bkg, D_bkg, G.
const char* operator_label(Process p);
/// The process family (aggregation / breakage / growth) a tag belongs to.
enum class Family { Aggregation, Breakage, Growth };
Family family_of(Process p);

/// One evaluated library column: the candidate term (process, basis) sampled
/// over every (x_i, t_m) of a field, flattened in DerivativeVector order.
struct CandidateColumn {
    Process process;
    BasisFunction basis;
    Eigen::VectorXd values;  // length p = j*k

    std::string name() const {
        return std::string(operator_label(process)) + "(" + basis.name() + ")";
    }
};

/// Composite trapezoid sum over uniformly spaced samples. Fewer than 2
/// samples integrate to 0 (degenerate range).
double trapz(std::span<const double> values, double spacing);

/// Aggregation birth: (1/2) * integral over y in [x1, x_i - x1] of
/// basis(x_i, y) n(x_i - y, t) n(y, t) dy. The convolution partner index is
/// snapped to the grid (exact when x1 is a multiple of dx); rows with no
/// admissible pairs are zero.
CandidateColumn agg_birth_column(const DensityField& field, const BasisFunction& basis);

/// The O(j^2 k) convolution part of agg_birth_column for basis y^b with unit
/// multiplier. Bases sharing a y-exponent differ only by an x^a row scaling,
/// so library assembly reuses this across them.
Eigen::VectorXd agg_birth_convolution(const DensityField& field, int b);

/// Aggregation death: n(x_i, t) * integral over y in [x1, x_j] of
/// basis(x_i, y) n(y, t) dy (infinite upper limit truncated at the grid cap).
CandidateColumn agg_death_column(const DensityField& field, const BasisFunction& basis);

/// Breakage birth: integral over y in [x_i, x_j] of basis(y) n(y, t) dy.
/// The basis must depend on y only.
CandidateColumn bkg_birth_column(const DensityField& field, const BasisFunction& basis);

/// Breakage death: basis(x_i) * n(x_i, t), pointwise. Basis must be x-only.
CandidateColumn bkg_death_column(const DensityField& field, const BasisFunction& basis);

/// Growth: d/dx [basis(x) n(x, t)] by second-order finite differences
/// (one-sided at the boundary rows). Basis must be x-only; needs j >= 3.
CandidateColumn growth_column(const DensityField& field, const BasisFunction& basis);

/// Dispatch to the column evaluator for `process`.
CandidateColumn evaluate_column(const DensityField& field, Process process,
                                const BasisFunction& basis);

}  // namespace pbed
