#include "pbed/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pbed/random.hpp"

namespace pbed {

namespace {

constexpr double kUniformRelTol = 1e-9;

void check_uniform(const std::vector<double>& pts, double& spacing, const char* what) {
    if (pts.size() < 2)
        throw InvalidArgument(std::string(what) + " grid needs at least 2 points");
    const double dx = pts[1] - pts[0];
    if (dx <= 0.0)
        throw InvalidArgument(std::string(what) + " grid must be strictly increasing");
    const double scale = std::abs(pts.back() - pts.front());
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const double d = pts[i] - pts[i - 1];
        if (d <= 0.0)
            throw InvalidArgument(std::string(what) + " grid must be strictly increasing");
        if (std::abs(d - dx) > kUniformRelTol * std::max(scale, std::abs(dx)))
            throw ParseError(ParseError::Kind::NonUniformGrid,
                             std::string(what) + " grid is not uniform at index " +
                                 std::to_string(i) + " (step " + std::to_string(d) +
                                 " vs " + std::to_string(dx) + ")");
    }
    spacing = dx;
}

std::vector<double> make_points(double x0, double dx, std::size_t count) {
    std::vector<double> pts(count);
    for (std::size_t i = 0; i < count; ++i) pts[i] = x0 + static_cast<double>(i) * dx;
    return pts;
}

}  // namespace

InternalGrid::InternalGrid(std::vector<double> points) : pts_(std::move(points)) {
    validate(true);
}

void InternalGrid::validate(bool require_positive_floor) {
    check_uniform(pts_, dx_, "internal");
    if (require_positive_floor && pts_.front() <= 0.0)
        throw InvalidArgument("internal grid must start above zero, got " +
                              std::to_string(pts_.front()));
}

InternalGrid InternalGrid::uniform(double x0, double dx, std::size_t count) {
    return InternalGrid(make_points(x0, dx, count));
}

InternalGrid InternalGrid::span(double x0, double x1, double dx) {
    if (dx <= 0.0 || x1 <= x0) throw InvalidArgument("invalid internal grid span");
    const auto count = static_cast<std::size_t>(std::llround((x1 - x0) / dx)) + 1;
    return uniform(x0, dx, count);
}

TemporalGrid::TemporalGrid(std::vector<double> points) : pts_(std::move(points)) {
    check_uniform(pts_, dt_, "temporal");
}

TemporalGrid TemporalGrid::uniform(double t0, double dt, std::size_t count) {
    return TemporalGrid(make_points(t0, dt, count));
}

TemporalGrid TemporalGrid::span(double t0, double t1, double dt) {
    if (dt <= 0.0 || t1 <= t0) throw InvalidArgument("invalid temporal grid span");
    const auto count = static_cast<std::size_t>(std::llround((t1 - t0) / dt)) + 1;
    return uniform(t0, dt, count);
}

const char* to_string(Provenance p) {
    switch (p) {
        case Provenance::Clean: return "clean";
        case Provenance::Noisy: return "noisy";
        case Provenance::Smoothed: return "smoothed";
        case Provenance::Subsampled: return "subsampled";
    }
    return "unknown";
}

DensityField::DensityField(InternalGrid xgrid, TemporalGrid tgrid, Eigen::MatrixXd values,
                           Provenance provenance, std::string note)
    : x_(std::move(xgrid)), t_(std::move(tgrid)), v_(std::move(values)),
      prov_(provenance), note_(std::move(note)) {
    if (static_cast<std::size_t>(v_.rows()) != x_.size() ||
        static_cast<std::size_t>(v_.cols()) != t_.size())
        throw ParseError(ParseError::Kind::DimensionMismatch,
                         "density matrix is " + std::to_string(v_.rows()) + "x" +
                             std::to_string(v_.cols()) + " but grids imply " +
                             std::to_string(x_.size()) + "x" + std::to_string(t_.size()));
    if (!v_.allFinite())
        throw NumericError("density field contains non-finite entries");
}

Eigen::VectorXd flatten(const Eigen::MatrixXd& m) {
    // Column-major storage already matches the time-major, x-fastest order.
    return Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
}

Eigen::MatrixXd unflatten(const Eigen::VectorXd& v, std::size_t j, std::size_t k) {
    if (static_cast<std::size_t>(v.size()) != j * k)
        throw InvalidArgument("unflatten: vector length does not equal j*k");
    return Eigen::Map<const Eigen::MatrixXd>(v.data(), static_cast<Eigen::Index>(j),
                                             static_cast<Eigen::Index>(k));
}

DerivativeVector time_derivative(const DensityField& field, DerivativeScheme scheme) {
    (void)scheme;  // Central2 is the only scheme; kept for config symmetry.
    const auto j = static_cast<Eigen::Index>(field.rows());
    const auto k = static_cast<Eigen::Index>(field.cols());
    if (k < 3)
        throw InvalidArgument("central time differencing needs k >= 3 time points");
    const double dt = field.tgrid().spacing();
    const Eigen::MatrixXd& n = field.values();

    Eigen::MatrixXd d(j, k);
    d.col(0) = (-3.0 * n.col(0) + 4.0 * n.col(1) - n.col(2)) / (2.0 * dt);
    for (Eigen::Index m = 1; m + 1 < k; ++m)
        d.col(m) = (n.col(m + 1) - n.col(m - 1)) / (2.0 * dt);
    d.col(k - 1) = (3.0 * n.col(k - 1) - 4.0 * n.col(k - 2) + n.col(k - 3)) / (2.0 * dt);

    return DerivativeVector{flatten(d), field.rows(), field.cols()};
}

DensityField add_white_noise(const DensityField& field, double level, std::uint64_t seed,
                             NoiseMode mode) {
    if (level < 0.0) throw InvalidArgument("noise level must be non-negative");
    if (level == 0.0)
        return DensityField(field.xgrid(), field.tgrid(), field.values(),
                            field.provenance(), field.note());

    const Eigen::MatrixXd& n = field.values();
    GaussianRng rng(seed);
    Eigen::MatrixXd out(n.rows(), n.cols());

    if (mode == NoiseMode::GlobalStd) {
        const double mean = n.mean();
        const double var =
            (n.array() - mean).square().sum() / static_cast<double>(n.size() - 1);
        const double sigma = level * std::sqrt(var);
        for (Eigen::Index c = 0; c < n.cols(); ++c)
            for (Eigen::Index r = 0; r < n.rows(); ++r)
                out(r, c) = n(r, c) + sigma * rng.gaussian();
    } else {
        for (Eigen::Index c = 0; c < n.cols(); ++c)
            for (Eigen::Index r = 0; r < n.rows(); ++r)
                out(r, c) = n(r, c) * (1.0 + level * rng.gaussian());
    }
    return DensityField(field.xgrid(), field.tgrid(), std::move(out), Provenance::Noisy,
                        "level=" + std::to_string(level) + " seed=" + std::to_string(seed));
}

namespace {

// Rows of the least-squares projection matrix for a window of `w` samples:
// row r gives the weights that evaluate the fitted polynomial (deriv_order-th
// derivative) at sample position r. Offsets are in sample units.
Eigen::MatrixXd polyfit_weight_rows(int w, int degree, int deriv_order) {
    Eigen::MatrixXd rows(w, w);
    for (int r = 0; r < w; ++r) {
        Eigen::MatrixXd V(w, degree + 1);
        for (int s = 0; s < w; ++s) {
            double pow = 1.0;
            for (int d = 0; d <= degree; ++d) {
                V(s, d) = pow;
                pow *= static_cast<double>(s - r);
            }
        }
        // weights^T = e_{deriv}^T * (V^T V)^{-1} V^T, scaled by deriv_order!.
        Eigen::MatrixXd gram = V.transpose() * V;
        Eigen::VectorXd e = Eigen::VectorXd::Zero(degree + 1);
        double fact = 1.0;
        for (int q = 2; q <= deriv_order; ++q) fact *= q;
        e(deriv_order) = fact;
        rows.row(r) = (V * gram.ldlt().solve(e)).transpose();
    }
    return rows;
}

}  // namespace

DensityField smooth_savgol(const DensityField& field, int window, int polyorder) {
    if (window % 2 == 0) throw InvalidArgument("Savitzky-Golay window must be odd");
    if (window <= polyorder)
        throw InvalidArgument("Savitzky-Golay window must exceed the polynomial order");
    const auto j = static_cast<int>(field.rows());
    if (window > j) throw InvalidArgument("Savitzky-Golay window exceeds grid size");

    const Eigen::MatrixXd weights = polyfit_weight_rows(window, polyorder, 0);
    const int half = window / 2;
    const Eigen::MatrixXd& n = field.values();
    Eigen::MatrixXd out(n.rows(), n.cols());

    for (int i = 0; i < j; ++i) {
        const int start = std::clamp(i - half, 0, j - window);
        const int r = i - start;
        for (Eigen::Index m = 0; m < n.cols(); ++m) {
            double acc = 0.0;
            for (int s = 0; s < window; ++s) acc += weights(r, s) * n(start + s, m);
            out(i, m) = acc;
        }
    }
    return DensityField(field.xgrid(), field.tgrid(), std::move(out), Provenance::Smoothed,
                        "savgol window=" + std::to_string(window) +
                            " polyorder=" + std::to_string(polyorder));
}

DerivativeVector polyfit_derivative(const DensityField& field, int degree, int halfwidth) {
    const int w = 2 * halfwidth + 1;
    if (w <= degree) throw InvalidArgument("polyfit window must exceed the degree");
    const auto k = static_cast<int>(field.cols());
    if (k < w) throw InvalidArgument("polyfit derivative needs k >= 2*halfwidth+1 time points");

    const double dt = field.tgrid().spacing();
    const Eigen::MatrixXd weights = polyfit_weight_rows(w, degree, 1) / dt;
    const Eigen::MatrixXd& n = field.values();
    const auto j = static_cast<Eigen::Index>(field.rows());

    Eigen::MatrixXd d(j, k);
    for (int m = 0; m < k; ++m) {
        const int start = std::clamp(m - halfwidth, 0, k - w);
        const int r = m - start;
        d.col(m).setZero();
        for (int s = 0; s < w; ++s) d.col(m) += weights(r, s) * n.col(start + s);
    }
    return DerivativeVector{flatten(d), field.rows(), field.cols()};
}

RowMask subsample_rows(std::size_t p, double fraction, std::uint64_t seed) {
    if (fraction <= 0.0 || fraction > 1.0)
        throw InvalidArgument("subsample fraction must lie in (0, 1]");
    const auto n = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(p)));

    RowMask mask;
    mask.seed = seed;
    mask.fraction = fraction;
    if (n >= p) {
        mask.indices.resize(p);
        std::iota(mask.indices.begin(), mask.indices.end(), std::size_t{0});
        return mask;
    }

    // Partial Fisher-Yates over an index array, then sort the selected head.
    std::vector<std::size_t> idx(p);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    GaussianRng rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t jpick = i + static_cast<std::size_t>(rng.below(p - i));
        std::swap(idx[i], idx[jpick]);
    }
    mask.indices.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n));
    std::sort(mask.indices.begin(), mask.indices.end());
    return mask;
}

}  // namespace pbed
