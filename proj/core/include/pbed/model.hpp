#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pbed/library.hpp"
#include "pbed/stls.hpp"

namespace pbed {

struct Monomial {
    int a = 0;  // exponent of x
    int b = 0;  // exponent of y

    std::string name() const { return BasisFunction{a, b, 1.0}.name(); }
    bool operator==(const Monomial& o) const { return a == o.a && b == o.b; }
    /// Canonical display/sort order: higher x-degree first, then lower
    /// y-degree ("x + y", "xy - y^2").
    bool operator<(const Monomial& o) const {
        if (a != o.a) return a > o.a;
        return b < o.b;
    }
};

/// Linear combination of monomials in (x, y); the building block for every
/// phenomenological function (Q, Gamma, beta, R) and for model kernels.
struct KernelExpression {
    struct Term {
        double coeff;
        Monomial mono;
    };
    std::vector<Term> terms;

    static KernelExpression constant(double c) { return {{{c, {0, 0}}}}; }
    static KernelExpression monomial(double c, int a, int b) { return {{{c, {a, b}}}}; }

    bool zero() const { return terms.empty(); }
    bool is_monomial() const { return terms.size() == 1; }
    KernelExpression scaled(double s) const;
    /// Substitute x -> (x - y) and expand; used to derive the aggregation
    /// birth form Q(x-y, y) from a death-identified Q(x, y).
    KernelExpression substitute_x_minus_y() const;
    /// Merge duplicate monomials, drop negligible ones, sort canonically.
    void normalize(double drop_tol = 0.0);
    double eval(double x, double y) const;
    std::string render(int precision = 6) const;  // "x + y", "xy - y^2", "2/y"
};

/// One formulated PBE term: a process operator applied to a kernel, scaled by
/// the leading coefficient. `columns` traces back to the library columns the
/// term came from, with their OR alternates.
struct ModelTerm {
    struct Column {
        ColumnDescriptor descriptor;
        double coefficient;  // regression coefficient on this column
        std::vector<Equivalence> alternates;
    };
    Process process;
    KernelExpression kernel;  // leading coefficient normalized to 1
    double coefficient;       // signed leading coefficient
    std::vector<Column> columns;

    /// The term's kernel polynomial including the coefficient.
    KernelExpression polynomial() const { return kernel.scaled(coefficient); }
};

/// A formulated population balance model. An empty term list is the null
/// model ("no dynamics identified").
struct PBEModel {
    std::vector<ModelTerm> terms;
    std::string source_case;    // benchmark id, when known
    std::string combination;    // library combination the solution came from
    double lambda = 0.0;        // sparsity index of the winning solution

    bool null_model() const { return terms.empty(); }
    bool realizable() const;
    /// Canonical one-line text form, e.g.
    /// "dn/dt = 2B_bkg(y) - D_bkg(x^2) + B_agg(1) - D_agg(1)".
    std::string render(int precision = 4) const;
};

/// Map a sparse solution onto model terms through the symbolic vector,
/// merging same-process columns into one kernel expression and attaching the
/// recorded OR alternates.
PBEModel formulate_pbe(const SparseSolution& solution, const SymbolicVector& symbols);

/// Rewrite terms that carry OR alternates into their most interpretable form:
/// for aggregation, the birth form whose implied Q(x-y, y) is consistent with
/// the death-derived Q(x, y) is preferred. Pure representation change; the
/// numerical predictions are preserved up to the recorded equivalence scale.
PBEModel resolve_dependent_terms(const PBEModel& model);

/// Breakage kernel factorization: with birth b(y) (coefficient folded in) and
/// death-derived rate Gamma(x), beta = b(y)/Gamma(y) as a formal ratio and
/// the mean daughter count nu = integral of beta over daughter sizes.
struct Stoichiometry {
    bool applicable = false;           // model contains breakage birth + death
    KernelExpression gamma;            // breakage rate Gamma(x)
    std::optional<KernelExpression> beta;  // simplified only for monomial ratios
    std::string beta_text;             // always set when applicable ("2/y", rational form)
    bool daughter_count_constant = false;
    double daughter_count = 0.0;       // nu, when constant
};

Stoichiometry deduce_breakage_stoichiometry(const PBEModel& model);

/// Result of comparing an identified model to a reference: matched means the
/// (process, monomial) term sets agree exactly; the error is the mean
/// relative coefficient error over matched terms, in percent.
struct CoefficientError {
    bool matched = false;
    double avg_error_pct = 0.0;
    std::vector<std::string> missing;  // reference terms absent in the model
    std::vector<std::string> extra;    // model terms absent in the reference
    bool zero_reference_excluded = false;
};

CoefficientError coefficient_error(const PBEModel& model, const PBEModel& reference);

/// Sort terms and kernels into canonical order (growth, breakage birth/death,
/// aggregation birth/death); idempotent.
PBEModel canonicalize(const PBEModel& model);

}  // namespace pbed
