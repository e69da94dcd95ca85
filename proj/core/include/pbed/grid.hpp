#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "pbed/errors.hpp"

namespace pbed {

/// Uniform grid over the internal coordinate (particle size). Strictly
/// increasing, uniform spacing to 1e-9 relative, and the first point must be
/// positive so reciprocal-power candidate functions stay finite.
class InternalGrid {
public:
    InternalGrid() = default;
    explicit InternalGrid(std::vector<double> points);

    /// Grid with `count` points starting at `x0`, spacing `dx`.
    static InternalGrid uniform(double x0, double dx, std::size_t count);
    /// Grid spanning [x0, x1] with spacing dx; the point count is
    /// round((x1-x0)/dx)+1, so an endpoint off the dx-lattice is rounded to it.
    static InternalGrid span(double x0, double x1, double dx);

    const std::vector<double>& points() const { return pts_; }
    double spacing() const { return dx_; }
    std::size_t size() const { return pts_.size(); }
    double operator[](std::size_t i) const { return pts_[i]; }
    double front() const { return pts_.front(); }
    double back() const { return pts_.back(); }

    bool operator==(const InternalGrid& o) const { return pts_ == o.pts_; }

private:
    void validate(bool require_positive_floor);
    friend class TemporalGrid;

    std::vector<double> pts_;
    double dx_ = 0.0;
};

/// Uniform temporal grid. Same uniformity contract as InternalGrid but the
/// origin may be zero.
class TemporalGrid {
public:
    TemporalGrid() = default;
    explicit TemporalGrid(std::vector<double> points);

    static TemporalGrid uniform(double t0, double dt, std::size_t count);
    static TemporalGrid span(double t0, double t1, double dt);

    const std::vector<double>& points() const { return pts_; }
    double spacing() const { return dt_; }
    std::size_t size() const { return pts_.size(); }
    double operator[](std::size_t i) const { return pts_[i]; }

    bool operator==(const TemporalGrid& o) const { return pts_ == o.pts_; }

private:
    std::vector<double> pts_;
    double dt_ = 0.0;
};

enum class Provenance { Clean, Noisy, Smoothed, Subsampled };

const char* to_string(Provenance p);

/// Transient number-density distribution n(x_i, t_m) held as a j x k matrix
/// (rows follow the internal grid, columns the temporal grid). Values are
/// immutable after construction; all preprocessing returns new fields.
class DensityField {
public:
    DensityField() = default;
    DensityField(InternalGrid xgrid, TemporalGrid tgrid, Eigen::MatrixXd values,
                 Provenance provenance = Provenance::Clean, std::string note = {});

    const InternalGrid& xgrid() const { return x_; }
    const TemporalGrid& tgrid() const { return t_; }
    const Eigen::MatrixXd& values() const { return v_; }
    Provenance provenance() const { return prov_; }
    const std::string& note() const { return note_; }

    std::size_t rows() const { return static_cast<std::size_t>(v_.rows()); }   // j
    std::size_t cols() const { return static_cast<std::size_t>(v_.cols()); }   // k
    std::size_t flat_size() const { return rows() * cols(); }                  // p = j*k

    double operator()(std::size_t i, std::size_t m) const {
        return v_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(m));
    }

private:
    InternalGrid x_;
    TemporalGrid t_;
    Eigen::MatrixXd v_;
    Provenance prov_ = Provenance::Clean;
    std::string note_;
};

/// Flattened time-derivative estimates, length p = j*k, ordered time-major
/// with the internal coordinate fastest: entry m*j + i holds dn/dt(x_i, t_m).
struct DerivativeVector {
    Eigen::VectorXd entries;
    std::size_t j = 0;  // internal points per time slice
    std::size_t k = 0;  // time slices

    double at(std::size_t i, std::size_t m) const {
        return entries(static_cast<Eigen::Index>(m * j + i));
    }
};

/// Flatten a j x k matrix in the DerivativeVector ordering (all x for t_1,
/// then all x for t_2, ...).
Eigen::VectorXd flatten(const Eigen::MatrixXd& m);
/// Inverse of flatten().
Eigen::MatrixXd unflatten(const Eigen::VectorXd& v, std::size_t j, std::size_t k);

/// Selected rows of the flattened p-length regression system.
struct RowMask {
    std::vector<std::size_t> indices;  // unique, sorted, in [0, p)
    std::uint64_t seed = 0;
    double fraction = 1.0;

    std::size_t count() const { return indices.size(); }
    bool full(std::size_t p) const { return indices.size() == p; }
};

enum class DerivativeScheme { Central2 };

enum class NoiseMode {
    GlobalStd,       // sigma = level * sample std of all entries of the clean field
    Multiplicative,  // n' = n * (1 + level * eps)
};

/// Second-order finite-difference time derivative; interior points use
/// central stencils, the two boundary slices one-sided stencils of the same
/// order. Requires k >= 3.
DerivativeVector time_derivative(const DensityField& field,
                                 DerivativeScheme scheme = DerivativeScheme::Central2);

/// Additive white Gaussian noise, sigma = level * global sample std of the
/// field (default), deterministic per seed. `level` is a fraction, e.g. 0.01
/// for "1% noise".
DensityField add_white_noise(const DensityField& field, double level, std::uint64_t seed,
                             NoiseMode mode = NoiseMode::GlobalStd);

/// Savitzky-Golay smoothing along the internal coordinate, one time slice at
/// a time. Edge points are fitted on the one-sided window and evaluated in
/// place, so polynomials of degree <= polyorder are reproduced exactly.
DensityField smooth_savgol(const DensityField& field, int window, int polyorder);

/// Time derivative via local polynomial fits: for every (x_i, t_m) a
/// polynomial of degree `degree` is fitted over the 2*halfwidth+1 nearest
/// time samples and differentiated analytically at t_m.
DerivativeVector polyfit_derivative(const DensityField& field, int degree, int halfwidth);

/// Uniform random subset of round(fraction*p) of the p flattened rows,
/// without replacement, deterministic per seed.
RowMask subsample_rows(std::size_t p, double fraction, std::uint64_t seed);

}  // namespace pbed
