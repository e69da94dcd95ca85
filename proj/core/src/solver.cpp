#include "pbed/solver.hpp"

#include <algorithm>
#include <cmath>

#include "pbed/errors.hpp"
#include "pbed/operators.hpp"

namespace pbed {

double evaluate_initial_condition(InitialCondition ic, double x) {
    switch (ic) {
        case InitialCondition::ExpDecay: return std::exp(-x);
        case InitialCondition::ExpGrow: return std::exp(x);
    }
    return 0.0;
}

MomentReport compute_moments(const DensityField& field) {
    MomentReport report;
    const double dx = field.xgrid().spacing();
    const auto j = field.rows();
    std::vector<double> f0(j), f1(j);
    for (std::size_t m = 0; m < field.cols(); ++m) {
        for (std::size_t i = 0; i < j; ++i) {
            f0[i] = field(i, m);
            f1[i] = field.xgrid()[i] * field(i, m);
        }
        report.times.push_back(field.tgrid()[m]);
        report.number.push_back(trapz(f0, dx));
        report.mass.push_back(trapz(f1, dx));
    }
    return report;
}

namespace detail {

void integrate_rk45(const std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>& rhs,
                    double t_begin, const std::vector<double>& t_out, Eigen::VectorXd& y,
                    const std::function<void(std::size_t, const Eigen::VectorXd&)>& on_output,
                    double abs_tol, double rel_tol) {
    // Dormand-Prince 5(4) tableau.
    static const double a21 = 1.0 / 5;
    static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
    static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static const double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                        e4 = 125.0 / 192 - 393.0 / 640,
                        e5 = -2187.0 / 6784 + 92097.0 / 339200, e6 = 11.0 / 84 - 187.0 / 2100,
                        e7 = -1.0 / 40;

    const auto n = y.size();
    Eigen::VectorXd k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n), err(n);

    double t = t_begin;
    std::size_t out_idx = 0;
    while (out_idx < t_out.size() && t_out[out_idx] <= t_begin + 1e-14 * std::max(1.0, std::abs(t_begin))) {
        on_output(out_idx, y);
        ++out_idx;
    }
    if (out_idx >= t_out.size()) return;

    const double t_end = t_out.back();
    double h = (t_end - t_begin) / 100.0;
    rhs(y, k1);
    bool k1_fresh = true;

    while (t < t_end) {
        const double t_next = t_out[out_idx];
        h = std::min(h, t_next - t);
        if (h < 1e-14 * std::max(1.0, std::abs(t)))
            throw NumericError("step-size collapse in the adaptive integrator at t=" +
                               std::to_string(t));

        if (!k1_fresh) {
            rhs(y, k1);
            k1_fresh = true;
        }
        ytmp = y + h * a21 * k1;
        rhs(ytmp, k2);
        ytmp = y + h * (a31 * k1 + a32 * k2);
        rhs(ytmp, k3);
        ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
        rhs(ytmp, k4);
        ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
        rhs(ytmp, k5);
        ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        rhs(ytmp, k6);
        ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        rhs(ynew, k7);
        err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        double scaled = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double sc = abs_tol + rel_tol * std::max(std::abs(y(i)), std::abs(ynew(i)));
            const double r = err(i) / sc;
            scaled += r * r;
        }
        scaled = std::sqrt(scaled / static_cast<double>(n));

        if (scaled <= 1.0) {
            t += h;
            y.swap(ynew);
            k1.swap(k7);  // first-same-as-last
            k1_fresh = true;
            if (std::abs(t - t_next) <= 1e-12 * std::max(1.0, std::abs(t_next))) {
                on_output(out_idx, y);
                ++out_idx;
                if (out_idx >= t_out.size()) return;
            }
        } else {
            k1_fresh = true;  // k1 still matches y (step rejected)
        }
        const double factor =
            scaled > 0.0 ? std::clamp(0.9 * std::pow(scaled, -0.2), 0.2, 5.0) : 5.0;
        h *= factor;
    }
}

double interpolate_quintic(const Eigen::VectorXd& values, double x0, double dx, double query) {
    const auto j = values.size();
    if (j < 6) {
        // Low-resolution fallback: linear interpolation.
        const double s = std::clamp((query - x0) / dx, 0.0, static_cast<double>(j - 1));
        const auto lo = static_cast<Eigen::Index>(std::min<double>(std::floor(s), j - 2.0));
        const double w = s - static_cast<double>(lo);
        return (1.0 - w) * values(lo) + w * values(lo + 1);
    }
    const double s = (query - x0) / dx;
    auto base = static_cast<Eigen::Index>(std::floor(s)) - 2;
    base = std::clamp<Eigen::Index>(base, 0, j - 6);
    const double t = s - static_cast<double>(base);
    double result = 0.0;
    for (int m = 0; m < 6; ++m) {
        double w = 1.0;
        for (int l = 0; l < 6; ++l) {
            if (l == m) continue;
            w *= (t - l) / (m - l);
        }
        result += w * values(base + m);
    }
    return result;
}

}  // namespace detail

namespace {

constexpr int kLostStates = 2;  // appended to the pivot populations: lostN, lostM

/// Fixed Pivot right-hand side for breakage and/or aggregation on uniform
/// pivots. Births that fall between pivots are split onto the two adjacent
/// ones, preserving number and mass simultaneously; material leaving the
/// tracked window is accumulated in the two trailing state entries.
class FixedPivotSystem {
public:
    FixedPivotSystem(const InternalGrid& grid, const CaseSpec& spec)
        : x_(grid.points()), dx_(grid.spacing()) {
        const auto j = static_cast<Eigen::Index>(x_.size());

        if (spec.aggregation) {
            has_agg_ = true;
            for (const auto& term : spec.aggregation->terms)
                agg_terms_.push_back({term.coeff, term.mono.a, term.mono.b});
            const double s_off = grid.front() / dx_;
            split_base_ = static_cast<Eigen::Index>(std::floor(s_off + 1e-9));
            split_w_ = s_off - static_cast<double>(split_base_);
            if (split_w_ < 1e-9) split_w_ = 0.0;
            pair_sum_.resize(2 * j - 1);
        }

        if (spec.breakage_rate) {
            if (!spec.stoichiometry)
                throw InvalidArgument("breakage requires a stoichiometric function");
            has_bkg_ = true;
            gamma_.resize(j);
            for (Eigen::Index i = 0; i < j; ++i)
                gamma_(i) = spec.breakage_rate->eval(x_[static_cast<std::size_t>(i)], 0.0);
            if ((gamma_.array() < 0.0).any())
                throw NumericError("breakage rate kernel is negative on the grid");
            build_breakage_tables(*spec.stoichiometry);
        }
    }

    Eigen::Index state_size() const {
        return static_cast<Eigen::Index>(x_.size()) + kLostStates;
    }

    Eigen::VectorXd initial_state(InitialCondition ic) const {
        Eigen::VectorXd y = Eigen::VectorXd::Zero(state_size());
        for (std::size_t i = 0; i < x_.size(); ++i)
            y(static_cast<Eigen::Index>(i)) = evaluate_initial_condition(ic, x_[i]) * dx_;
        return y;
    }

    void rhs(const Eigen::VectorXd& y, Eigen::VectorXd& dy) const {
        const auto j = static_cast<Eigen::Index>(x_.size());
        const auto N = y.head(j);
        dy.setZero();

        if (has_agg_) {
            pair_sum_.setZero();
            const double* n = N.data();
            for (Eigen::Index a = 0; a < j; ++a) {
                const double na = n[a];
                if (na == 0.0) continue;
                const double xa = x_[static_cast<std::size_t>(a)];
                for (Eigen::Index b = a; b < j; ++b) {
                    const double nb = n[b];
                    if (nb == 0.0) continue;
                    double q = 0.0;
                    for (const auto& t : agg_terms_)
                        q += t.coeff * ipow(xa, t.ax) * ipow(x_[static_cast<std::size_t>(b)], t.by);
                    const double rate = (a == b ? 0.5 : 1.0) * q * na * nb;
                    pair_sum_(a + b) += rate;
                }
            }
            // Scatter births onto the two pivots bracketing each pair sum.
            for (Eigen::Index sigma = 0; sigma < pair_sum_.size(); ++sigma) {
                const double c = pair_sum_(sigma);
                if (c == 0.0) continue;
                const Eigen::Index lo = split_base_ + sigma;
                const double v = 2.0 * x_[0] + static_cast<double>(sigma) * dx_;
                if (lo > j - 1 || (lo == j - 1 && split_w_ > 0.0)) {
                    dy(j) += c;          // birth beyond the cap leaves the window
                    dy(j + 1) += c * v;
                } else {
                    dy(lo) += (1.0 - split_w_) * c;
                    if (split_w_ > 0.0) dy(lo + 1) += split_w_ * c;
                }
            }
            // Death: moments of N against each kernel monomial.
            for (const auto& t : agg_terms_) {
                double s = 0.0;
                for (Eigen::Index b = 0; b < j; ++b)
                    s += ipow(x_[static_cast<std::size_t>(b)], t.by) * N(b);
                for (Eigen::Index a = 0; a < j; ++a)
                    dy(a) -= t.coeff * ipow(x_[static_cast<std::size_t>(a)], t.ax) * s * N(a);
            }
        }

        if (has_bkg_) {
            dy.head(j) += bkg_birth_ * N;
            dy.head(j) -= gamma_.cwiseProduct(N);
            dy(j) += lost_number_rate_.dot(N);
            dy(j + 1) += lost_mass_rate_.dot(N);
        }
    }

private:
    static double ipow(double x, int e) {
        if (e == 0) return 1.0;
        double r = 1.0;
        const double b = e > 0 ? x : 1.0 / x;
        for (int i = std::abs(e); i > 0; --i) r *= b;
        return r;
    }

    /// 4-point Gauss-Legendre of f over [lo, hi].
    template <typename F>
    static double gauss4(F&& f, double lo, double hi) {
        static const double xs[2] = {0.3399810435848563, 0.8611363115940526};
        static const double ws[2] = {0.6521451548625461, 0.3478548451374538};
        if (hi <= lo) return 0.0;
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        double acc = 0.0;
        for (int q = 0; q < 2; ++q)
            acc += ws[q] * (f(mid - half * xs[q]) + f(mid + half * xs[q]));
        return acc * half;
    }

    void build_breakage_tables(const KernelExpression& beta) {
        const auto j = static_cast<Eigen::Index>(x_.size());
        bkg_birth_ = Eigen::MatrixXd::Zero(j, j);
        lost_number_rate_ = Eigen::VectorXd::Zero(j);
        lost_mass_rate_ = Eigen::VectorXd::Zero(j);

        for (Eigen::Index k = 0; k < j; ++k) {
            const double y = x_[static_cast<std::size_t>(k)];
            const auto b = [&](double v) { return beta.eval(v, y); };
            for (Eigen::Index i = 0; i < j; ++i) {
                const double xi = x_[static_cast<std::size_t>(i)];
                if (xi - dx_ > y) break;
                double val = 0.0;
                if (i + 1 < j) {
                    const double hi = std::min(xi + dx_, y);
                    val += gauss4([&](double v) { return (xi + dx_ - v) / dx_ * b(v); }, xi, hi);
                } else {
                    // Top pivot: daughters in [x_top, y] have nowhere above to
                    // share with; assign them fully to preserve number.
                    val += gauss4(b, xi, std::max(xi, y));
                }
                if (i > 0) {
                    const double hi = std::min(xi, y);
                    val += gauss4([&](double v) { return (v - (xi - dx_)) / dx_ * b(v); },
                                  xi - dx_, hi);
                }
                bkg_birth_(i, k) = gamma_(k) * val;
            }
            // Daughters below the grid floor leave the tracked window.
            const double floor_hi = std::min(x_[0], y);
            lost_number_rate_(k) = gamma_(k) * gauss4(b, 0.0, floor_hi);
            lost_mass_rate_(k) = gamma_(k) * gauss4([&](double v) { return v * b(v); }, 0.0, floor_hi);
        }
    }

    std::vector<double> x_;
    double dx_ = 0.0;

    bool has_agg_ = false;
    struct AggTerm {
        double coeff;
        int ax, by;
    };
    std::vector<AggTerm> agg_terms_;
    Eigen::Index split_base_ = 0;
    double split_w_ = 0.0;
    mutable Eigen::VectorXd pair_sum_;

    bool has_bkg_ = false;
    Eigen::VectorXd gamma_;
    Eigen::MatrixXd bkg_birth_;
    Eigen::VectorXd lost_number_rate_, lost_mass_rate_;
};

void check_positivity(Eigen::Ref<Eigen::VectorXd> n, const char* what) {
    const double cap = n.cwiseAbs().maxCoeff();
    const double worst = n.minCoeff();
    if (worst < -1e-6 * std::max(cap, 1e-30))
        throw NumericError(std::string(what) + ": density went negative beyond tolerance (" +
                           std::to_string(worst) + ")");
    n = n.cwiseMax(0.0);
}

}  // namespace

DensityField simulate_breakage_aggregation(const CaseSpec& spec, SimulationDiagnostics* diag) {
    if (!spec.has_birth_death())
        throw InvalidArgument("spec has no breakage or aggregation process");
    if (spec.has_growth())
        throw InvalidArgument("spec has growth: use simulate_combined");

    const InternalGrid xg = spec.make_xgrid();
    const TemporalGrid tg = spec.make_tgrid();
    const auto j = static_cast<Eigen::Index>(xg.size());
    const FixedPivotSystem sys(xg, spec);

    Eigen::VectorXd y = sys.initial_state(spec.ic);
    Eigen::MatrixXd out(j, static_cast<Eigen::Index>(tg.size()));
    if (diag) {
        diag->lost_number.assign(tg.size(), 0.0);
        diag->lost_mass.assign(tg.size(), 0.0);
    }

    detail::integrate_rk45(
        [&](const Eigen::VectorXd& s, Eigen::VectorXd& ds) { sys.rhs(s, ds); }, 0.0,
        tg.points(), y,
        [&](std::size_t m, const Eigen::VectorXd& s) {
            Eigen::VectorXd n = s.head(j) / xg.spacing();
            check_positivity(n, "fixed pivot");
            out.col(static_cast<Eigen::Index>(m)) = n;
            if (diag) {
                diag->lost_number[m] = s(j);
                diag->lost_mass[m] = s(j + 1);
            }
        });

    return DensityField(xg, tg, std::move(out), Provenance::Clean, "fixed-pivot " + spec.id);
}

namespace {

enum class GrowthKind { Constant, Linear, Generic };

GrowthKind classify_growth(const KernelExpression& r, double& rate) {
    if (r.is_monomial()) {
        const auto& t = r.terms.front();
        if (t.mono.a == 0 && t.mono.b == 0) {
            rate = t.coeff;
            return GrowthKind::Constant;
        }
        if (t.mono.a == 1 && t.mono.b == 0) {
            rate = t.coeff;
            return GrowthKind::Linear;
        }
    }
    rate = 0.0;
    return GrowthKind::Generic;
}

/// Exact characteristic pullback of the conservative growth equation over a
/// time span tau, resampling with quintic interpolation. Constant rate:
/// translation; linear rate R = g x: dilation with density Jacobian.
void growth_substep(Eigen::Ref<Eigen::VectorXd> n, const InternalGrid& xg, GrowthKind kind,
                    double rate, double tau, bool* floor_inflow) {
    if (tau == 0.0 || rate == 0.0) return;
    const auto j = static_cast<Eigen::Index>(xg.size());
    Eigen::VectorXd src = n;
    const double x0 = xg.front(), dx = xg.spacing();
    if (kind == GrowthKind::Constant) {
        const double shift = rate * tau;
        for (Eigen::Index i = 0; i < j; ++i) {
            const double q = xg[static_cast<std::size_t>(i)] - shift;
            if (q < x0 && floor_inflow) *floor_inflow = true;
            n(i) = detail::interpolate_quintic(src, x0, dx, q);
        }
    } else {
        const double decay = std::exp(-rate * tau);
        for (Eigen::Index i = 0; i < j; ++i) {
            const double q = xg[static_cast<std::size_t>(i)] * decay;
            if (q < x0 && floor_inflow) *floor_inflow = true;
            n(i) = decay * detail::interpolate_quintic(src, x0, dx, q);
        }
    }
    n = n.cwiseMax(0.0);
}

/// One conservative donor-cell upwind sub-step for generic growth rates,
/// internally CFL-limited.
void growth_upwind(Eigen::Ref<Eigen::VectorXd> n, const InternalGrid& xg,
                   const KernelExpression& r, double tau) {
    const auto j = static_cast<Eigen::Index>(xg.size());
    const double dx = xg.spacing();
    Eigen::VectorXd rface(j + 1);
    for (Eigen::Index f = 0; f <= j; ++f)
        rface(f) = r.eval(xg.front() + (static_cast<double>(f) - 0.5) * dx, 0.0);
    const double rmax = rface.cwiseAbs().maxCoeff();
    const int steps = std::max(1, static_cast<int>(std::ceil(rmax * tau / (0.9 * dx))));
    const double h = tau / steps;
    Eigen::VectorXd flux(j + 1);
    for (int s = 0; s < steps; ++s) {
        flux(0) = 0.0;  // nothing enters from below the floor
        for (Eigen::Index f = 1; f < j; ++f)
            flux(f) = rface(f) >= 0.0 ? rface(f) * n(f - 1) : rface(f) * n(f);
        flux(j) = rface(j) >= 0.0 ? rface(j) * n(j - 1) : 0.0;
        for (Eigen::Index i = 0; i < j; ++i) n(i) -= h / dx * (flux(i + 1) - flux(i));
    }
    n = n.cwiseMax(0.0);
}

}  // namespace

DensityField simulate_growth(const CaseSpec& spec, SimulationDiagnostics* diag) {
    if (!spec.has_growth() || spec.has_birth_death())
        throw InvalidArgument("simulate_growth expects a growth-only spec");

    const InternalGrid xg = spec.make_xgrid();
    const TemporalGrid tg = spec.make_tgrid();
    const auto j = static_cast<Eigen::Index>(xg.size());
    Eigen::MatrixXd out(j, static_cast<Eigen::Index>(tg.size()));

    double rate = 0.0;
    const GrowthKind kind = classify_growth(*spec.growth_rate, rate);
    bool inflow = false;

    if (kind == GrowthKind::Constant) {
        for (std::size_t m = 0; m < tg.size(); ++m)
            for (Eigen::Index i = 0; i < j; ++i) {
                const double q = xg[static_cast<std::size_t>(i)] - rate * tg[m];
                if (q < xg.front()) inflow = true;
                out(i, static_cast<Eigen::Index>(m)) = evaluate_initial_condition(spec.ic, q);
            }
    } else if (kind == GrowthKind::Linear) {
        for (std::size_t m = 0; m < tg.size(); ++m) {
            const double decay = std::exp(-rate * tg[m]);
            for (Eigen::Index i = 0; i < j; ++i) {
                const double q = xg[static_cast<std::size_t>(i)] * decay;
                if (q < xg.front()) inflow = true;
                out(i, static_cast<Eigen::Index>(m)) =
                    decay * evaluate_initial_condition(spec.ic, q);
            }
        }
    } else {
        Eigen::VectorXd n(j);
        for (Eigen::Index i = 0; i < j; ++i)
            n(i) = evaluate_initial_condition(spec.ic, xg[static_cast<std::size_t>(i)]);
        double t = 0.0;
        for (std::size_t m = 0; m < tg.size(); ++m) {
            growth_upwind(n, xg, *spec.growth_rate, tg[m] - t);
            t = tg[m];
            out.col(static_cast<Eigen::Index>(m)) = n;
        }
    }
    if (diag) diag->floor_inflow = inflow;
    return DensityField(xg, tg, std::move(out), Provenance::Clean, "growth " + spec.id);
}

namespace {

/// One full pass over the horizon at a fixed splitting refinement.
Eigen::MatrixXd run_strang(const CaseSpec& spec, const InternalGrid& xg,
                           const TemporalGrid& tg, const FixedPivotSystem& sys, int level,
                           SimulationDiagnostics* diag) {
    const auto j = static_cast<Eigen::Index>(xg.size());
    double rate = 0.0;
    const GrowthKind kind = classify_growth(*spec.growth_rate, rate);
    bool inflow = false;

    Eigen::VectorXd y = sys.initial_state(spec.ic);
    Eigen::MatrixXd out(j, static_cast<Eigen::Index>(tg.size()));

    const int substeps = 1 << level;
    double t = 0.0;
    for (std::size_t m = 0; m < tg.size(); ++m) {
        const double span = tg[m] - t;
        if (span > 0.0) {
            const double tau = span / substeps;
            for (int s = 0; s < substeps; ++s) {
                auto n = y.head(j);
                if (kind == GrowthKind::Generic)
                    growth_upwind(n, xg, *spec.growth_rate, 0.5 * tau);
                else
                    growth_substep(n, xg, kind, rate, 0.5 * tau, &inflow);
                detail::integrate_rk45(
                    [&](const Eigen::VectorXd& st, Eigen::VectorXd& ds) { sys.rhs(st, ds); },
                    0.0, {tau}, y, [](std::size_t, const Eigen::VectorXd&) {});
                auto n2 = y.head(j);
                if (kind == GrowthKind::Generic)
                    growth_upwind(n2, xg, *spec.growth_rate, 0.5 * tau);
                else
                    growth_substep(n2, xg, kind, rate, 0.5 * tau, &inflow);
            }
            t = tg[m];
        }
        Eigen::VectorXd n = y.head(j) / xg.spacing();
        check_positivity(n, "strang splitting");
        out.col(static_cast<Eigen::Index>(m)) = n;
        if (diag) {
            diag->lost_number[m] = y(j);
            diag->lost_mass[m] = y(j + 1);
        }
    }
    if (diag) diag->floor_inflow = diag->floor_inflow || inflow;
    return out;
}

}  // namespace

DensityField simulate_combined(const CaseSpec& spec, SimulationDiagnostics* diag) {
    if (!spec.has_growth() || !spec.has_birth_death())
        throw InvalidArgument("simulate_combined expects growth plus breakage/aggregation");

    const InternalGrid xg = spec.make_xgrid();
    const TemporalGrid tg = spec.make_tgrid();
    const FixedPivotSystem sys(xg, spec);

    SimulationDiagnostics local;
    SimulationDiagnostics* d = diag ? diag : &local;
    d->lost_number.assign(tg.size(), 0.0);
    d->lost_mass.assign(tg.size(), 0.0);

    constexpr int kMaxLevel = 8;
    constexpr double kFieldTol = 1e-5;

    Eigen::MatrixXd prev = run_strang(spec, xg, tg, sys, 0, d);
    for (int level = 1; level <= kMaxLevel; ++level) {
        Eigen::MatrixXd next = run_strang(spec, xg, tg, sys, level, d);
        const double scale = next.cwiseAbs().maxCoeff();
        const double delta = (next - prev).cwiseAbs().maxCoeff() / std::max(scale, 1e-300);
        prev = std::move(next);
        d->refinement_level = level;
        d->refinement_delta = delta;
        if (delta < kFieldTol) break;
        if (level == kMaxLevel)
            throw NumericError("splitting refinement did not converge (delta=" +
                               std::to_string(delta) + ")");
    }
    return DensityField(xg, tg, std::move(prev), Provenance::Clean, "strang " + spec.id);
}

DensityField simulate(const CaseSpec& spec, SimulationDiagnostics* diag) {
    if (spec.has_growth() && spec.has_birth_death()) return simulate_combined(spec, diag);
    if (spec.has_growth()) return simulate_growth(spec, diag);
    return simulate_breakage_aggregation(spec, diag);
}

}  // namespace pbed
