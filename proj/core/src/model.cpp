#include "pbed/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "pbed/errors.hpp"

namespace pbed {

namespace {

std::string format_coeff(double v, int precision) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    return buf;
}

int process_order(Process p) {
    switch (p) {
        case Process::Growth: return 0;
        case Process::BkgBirth: return 1;
        case Process::BkgDeath: return 2;
        case Process::AggBirth: return 3;
        case Process::AggDeath: return 4;
    }
    return 5;
}

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

KernelExpression KernelExpression::scaled(double s) const {
    KernelExpression out = *this;
    for (auto& t : out.terms) t.coeff *= s;
    return out;
}

KernelExpression KernelExpression::substitute_x_minus_y() const {
    KernelExpression out;
    for (const auto& t : terms) {
        if (t.mono.a < 0)
            throw InvalidArgument(
                "cannot expand a reciprocal power of x under the x -> x-y substitution");
        for (int k = 0; k <= t.mono.a; ++k) {
            const double c = t.coeff * binomial(t.mono.a, k) * ((k % 2) ? -1.0 : 1.0);
            out.terms.push_back({c, {t.mono.a - k, t.mono.b + k}});
        }
    }
    out.normalize();
    return out;
}

void KernelExpression::normalize(double drop_tol) {
    std::map<std::pair<int, int>, double> acc;
    double scale = 0.0;
    for (const auto& t : terms) {
        acc[{t.mono.a, t.mono.b}] += t.coeff;
        scale = std::max(scale, std::abs(t.coeff));
    }
    terms.clear();
    for (const auto& [mono, c] : acc) {
        if (std::abs(c) <= drop_tol * scale) continue;
        terms.push_back({c, {mono.first, mono.second}});
    }
    std::sort(terms.begin(), terms.end(),
              [](const Term& l, const Term& r) { return l.mono < r.mono; });
}

double KernelExpression::eval(double x, double y) const {
    double v = 0.0;
    for (const auto& t : terms) v += BasisFunction{t.mono.a, t.mono.b, t.coeff}.eval(x, y);
    return v;
}

std::string KernelExpression::render(int precision) const {
    if (terms.empty()) return "0";
    std::string out;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const auto& t = terms[i];
        const double mag = std::abs(t.coeff);
        const bool neg = t.coeff < 0.0;
        std::string part;
        const std::string mono = t.mono.name();
        if (mono == "1") part = format_coeff(mag, precision);
        else if (mag == 1.0) part = mono;
        else if (t.mono.a >= 0 && t.mono.b >= 0) part = format_coeff(mag, precision) + mono;
        else {
            // reciprocal monomials read better as "2/y" than "21/y"
            auto slash = mono.find('/');
            std::string num = mono.substr(0, slash);
            if (num == "1") num = format_coeff(mag, precision);
            else num = format_coeff(mag, precision) + num;
            part = num + mono.substr(slash);
        }
        if (i == 0) out = neg ? "-" + part : part;
        else out += (neg ? " - " : " + ") + part;
    }
    return out;
}

bool PBEModel::realizable() const {
    bool agg_b = false, agg_d = false, bkg_b = false, bkg_d = false;
    for (const auto& t : terms) {
        switch (t.process) {
            case Process::AggBirth: agg_b = true; break;
            case Process::AggDeath: agg_d = true; break;
            case Process::BkgBirth: bkg_b = true; break;
            case Process::BkgDeath: bkg_d = true; break;
            case Process::Growth: break;
        }
    }
    return agg_b == agg_d && bkg_b == bkg_d;
}

std::string PBEModel::render(int precision) const {
    if (terms.empty()) return "dn/dt = 0";
    std::string out = "dn/dt = ";
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const auto& t = terms[i];
        const double mag = std::abs(t.coefficient);
        const bool neg = t.coefficient < 0.0;
        std::string part;
        if (mag != 1.0) part += format_coeff(mag, precision);
        part += operator_label(t.process);
        part += "(" + t.kernel.render(precision) + ")";
        if (i == 0) out += neg ? "-" + part : part;
        else out += (neg ? " - " : " + ") + part;
    }
    return out;
}

namespace {

ModelTerm make_term(Process process, std::vector<ModelTerm::Column> columns) {
    ModelTerm term;
    term.process = process;
    term.columns = std::move(columns);
    KernelExpression poly;
    for (const auto& col : term.columns)
        poly.terms.push_back({col.coefficient * col.descriptor.basis.multiplier,
                              {col.descriptor.basis.a, col.descriptor.basis.b}});
    poly.normalize();
    if (poly.terms.empty()) {
        term.coefficient = 0.0;
        term.kernel = poly;
        return term;
    }
    const double lead = poly.terms.front().coeff;
    term.coefficient = lead;
    term.kernel = poly.scaled(1.0 / lead);
    return term;
}

}  // namespace

PBEModel formulate_pbe(const SparseSolution& solution, const SymbolicVector& symbols) {
    PBEModel model;
    model.combination = solution.combination;
    model.lambda = solution.lambda;
    if (solution.support.empty()) return model;

    std::map<int, std::vector<ModelTerm::Column>> by_process;
    for (std::size_t idx : solution.support) {
        if (idx >= symbols.size())
            throw InvalidArgument("support column " + std::to_string(idx) +
                                  " is not resolvable through the symbolic vector");
        const auto& entry = symbols[idx];
        by_process[process_order(entry.primary.process)].push_back(
            {entry.primary,
             solution.coefficients(static_cast<Eigen::Index>(idx)),
             entry.equivalences});
    }
    for (auto& [order, columns] : by_process) {
        (void)order;
        const Process process = columns.front().descriptor.process;
        model.terms.push_back(make_term(process, std::move(columns)));
    }
    return canonicalize(model);
}

namespace {

double poly_mismatch(const KernelExpression& cand, const KernelExpression& target) {
    double scale = 0.0;
    for (const auto& t : target.terms) scale = std::max(scale, std::abs(t.coeff));
    if (scale == 0.0) return cand.terms.empty() ? 0.0 : 1e300;
    std::map<std::pair<int, int>, double> diff;
    for (const auto& t : target.terms) diff[{t.mono.a, t.mono.b}] += t.coeff;
    for (const auto& t : cand.terms) diff[{t.mono.a, t.mono.b}] -= t.coeff;
    double worst = 0.0;
    for (const auto& [mono, d] : diff) worst = std::max(worst, std::abs(d));
    return worst / scale;
}

// Structural tolerance for accepting an alternate birth representation.
constexpr double kResolveTol = 0.25;

}  // namespace

PBEModel resolve_dependent_terms(const PBEModel& model) {
    const ModelTerm* death = nullptr;
    for (const auto& t : model.terms)
        if (t.process == Process::AggDeath) death = &t;

    PBEModel out = model;
    if (!death) return out;  // no consistency test applies

    // Death term enters the PBE negatively: Q(x, y) = -(death polynomial).
    const KernelExpression q_death = death->polynomial().scaled(-1.0);
    KernelExpression target;
    try {
        target = q_death.substitute_x_minus_y();
    } catch (const InvalidArgument&) {
        return out;  // reciprocal death kernel: no polynomial test available
    }

    for (auto& term : out.terms) {
        if (term.process != Process::AggBirth) continue;
        double best = poly_mismatch(term.polynomial(), target);
        std::optional<std::pair<std::size_t, std::size_t>> pick;  // (column, alternate)
        for (std::size_t c = 0; c < term.columns.size(); ++c) {
            const auto& col = term.columns[c];
            for (std::size_t a = 0; a < col.alternates.size(); ++a) {
                const auto& alt = col.alternates[a];
                if (alt.alternate.process != Process::AggBirth) continue;
                std::vector<ModelTerm::Column> switched;
                for (std::size_t c2 = 0; c2 < term.columns.size(); ++c2) {
                    if (c2 != c) {
                        switched.push_back(term.columns[c2]);
                        continue;
                    }
                    // retained = scale * alternate, so the alternate carries
                    // coefficient * scale and points back at the retained form.
                    ModelTerm::Column sw;
                    sw.descriptor = alt.alternate;
                    sw.coefficient = col.coefficient * alt.scale;
                    sw.alternates = {{col.descriptor, 1.0 / alt.scale}};
                    switched.push_back(sw);
                }
                const ModelTerm cand = make_term(term.process, switched);
                const double mis = poly_mismatch(cand.polynomial(), target);
                if (mis < best && mis <= kResolveTol) {
                    best = mis;
                    pick = {c, a};
                }
            }
        }
        if (pick) {
            const auto [c, a] = *pick;
            const auto col = term.columns[c];
            const auto alt = col.alternates[a];
            std::vector<ModelTerm::Column> switched;
            for (std::size_t c2 = 0; c2 < term.columns.size(); ++c2) {
                if (c2 != c) {
                    switched.push_back(term.columns[c2]);
                    continue;
                }
                ModelTerm::Column sw;
                sw.descriptor = alt.alternate;
                sw.coefficient = col.coefficient * alt.scale;
                sw.alternates = {{col.descriptor, 1.0 / alt.scale}};
                switched.push_back(sw);
            }
            term = make_term(term.process, std::move(switched));
        }
    }
    return canonicalize(out);
}

Stoichiometry deduce_breakage_stoichiometry(const PBEModel& model) {
    const ModelTerm* birth = nullptr;
    const ModelTerm* death = nullptr;
    for (const auto& t : model.terms) {
        if (t.process == Process::BkgBirth) birth = &t;
        if (t.process == Process::BkgDeath) death = &t;
    }
    Stoichiometry result;
    if (!birth && !death) return result;  // no breakage: no-op
    if (birth && !death)
        throw NumericError(
            "breakage birth identified without a death term: no rate kernel to factor out");
    if (death) {
        result.gamma = death->polynomial().scaled(-1.0);
        result.gamma.normalize();
    }
    if (!birth) return result;

    result.applicable = true;
    const KernelExpression b = birth->polynomial();
    if (result.gamma.zero())
        throw NumericError("breakage rate kernel is zero while a birth term is present");

    if (b.is_monomial() && result.gamma.is_monomial()) {
        const auto& num = b.terms.front();
        const auto& den = result.gamma.terms.front();
        // Gamma is a function of x; the ratio is taken at y.
        KernelExpression beta =
            KernelExpression::monomial(num.coeff / den.coeff, 0, num.mono.b - den.mono.a);
        result.beta = beta;
        result.beta_text = beta.render();
        // nu = integral over daughter sizes x in (0, y) of beta(y) dx = y * beta(y).
        const int residual_power = beta.terms.front().mono.b + 1;
        if (residual_power == 0) {
            result.daughter_count_constant = true;
            result.daughter_count = beta.terms.front().coeff;
        }
    } else {
        // Longer kernels only admit a rational-function ratio; reported, not
        // simplified.
        KernelExpression num = b;
        for (auto& t : num.terms) t.mono = {0, t.mono.b};
        KernelExpression den = result.gamma;
        for (auto& t : den.terms) t.mono = {0, t.mono.a};
        num.normalize();
        den.normalize();
        result.beta_text = "(" + num.render() + ") / (" + den.render() + ")";
    }
    return result;
}

namespace {

std::map<std::pair<int, std::pair<int, int>>, double> term_map(const PBEModel& model) {
    std::map<std::pair<int, std::pair<int, int>>, double> out;
    for (const auto& t : model.terms) {
        const KernelExpression poly = t.polynomial();
        for (const auto& kt : poly.terms)
            out[{process_order(t.process), {kt.mono.a, kt.mono.b}}] += kt.coeff;
    }
    return out;
}

std::string term_name(int order, int a, int b) {
    static const char* kLabels[] = {"G", "B_bkg", "D_bkg", "B_agg", "D_agg"};
    return std::string(kLabels[order]) + "(" + Monomial{a, b}.name() + ")";
}

}  // namespace

CoefficientError coefficient_error(const PBEModel& model, const PBEModel& reference) {
    const auto got = term_map(canonicalize(model));
    const auto want = term_map(canonicalize(reference));

    CoefficientError out;
    double err_sum = 0.0;
    std::size_t err_n = 0;
    for (const auto& [key, c_ref] : want) {
        const auto it = got.find(key);
        if (it == got.end()) {
            out.missing.push_back(term_name(key.first, key.second.first, key.second.second));
            continue;
        }
        if (c_ref == 0.0) {
            out.zero_reference_excluded = true;
            continue;
        }
        err_sum += 100.0 * std::abs(it->second - c_ref) / std::abs(c_ref);
        ++err_n;
    }
    for (const auto& [key, c] : got) {
        (void)c;
        if (!want.count(key))
            out.extra.push_back(term_name(key.first, key.second.first, key.second.second));
    }
    out.matched = out.missing.empty() && out.extra.empty();
    out.avg_error_pct = err_n ? err_sum / static_cast<double>(err_n) : 0.0;
    return out;
}

PBEModel canonicalize(const PBEModel& model) {
    PBEModel out = model;
    for (auto& t : out.terms) {
        t.kernel.normalize();
        std::sort(t.columns.begin(), t.columns.end(),
                  [](const ModelTerm::Column& l, const ModelTerm::Column& r) {
                      const Monomial lm{l.descriptor.basis.a, l.descriptor.basis.b};
                      const Monomial rm{r.descriptor.basis.a, r.descriptor.basis.b};
                      return lm < rm;
                  });
    }
    std::sort(out.terms.begin(), out.terms.end(), [](const ModelTerm& l, const ModelTerm& r) {
        return process_order(l.process) < process_order(r.process);
    });
    return out;
}

}  // namespace pbed
