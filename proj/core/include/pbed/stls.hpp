#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace pbed {

struct StlsConfig {
    double lambda = 0.0;   // sparsity index: entries with |coef| < lambda are zeroed
    int max_iterations = 20;

    void validate() const;
};

/// A sparse regression result over a library's retained columns. The
/// realizability penalty and total cost are filled in by the selector.
struct SparseSolution {
    Eigen::VectorXd coefficients;        // dense over library columns
    std::vector<std::size_t> support;    // indices of nonzero coefficients
    std::string combination;             // source library combination tag
    double lambda = 0.0;
    double residual_sq = 0.0;            // ||A xi - b||^2
    double residual_rel = 0.0;           // residual_sq / ||b||^2
    std::size_t term_count = 0;          // ||xi||_0
    int penalty = -1;                    // Phi, set by the selector
    double cost = 0.0;                   // set by the selector
    std::vector<std::size_t> support_sizes;  // per-iteration trace

    bool empty() const { return support.empty(); }
};

/// Minimum-norm least-squares solution of A x ~= b (rank-deficient systems
/// resolve to the shortest minimizer). An empty A yields an empty result.
Eigen::VectorXd least_squares(const Eigen::MatrixXd& A, const Eigen::VectorXd& b);

/// Factorized system for repeated subset least squares: one thin QR of A up
/// front, after which every STLS iteration solves a q x |S| triangular-factor
/// system instead of touching the p x q data again.
class StlsSolver {
public:
    StlsSolver(const Eigen::MatrixXd& A, const Eigen::VectorXd& b);

    /// Run sequential thresholded least squares at the given sparsity index.
    SparseSolution solve(const StlsConfig& config) const;

    std::size_t columns() const { return static_cast<std::size_t>(r_.cols()); }
    double b_norm_sq() const { return b_norm_sq_; }

private:
    Eigen::VectorXd subset_least_squares(const std::vector<std::size_t>& cols) const;

    Eigen::MatrixXd r_;        // R factor of A (q x q)
    Eigen::VectorXd qtb_;      // Q^T b
    double b_norm_sq_ = 0.0;
    double tail_sq_ = 0.0;     // ||b||^2 - ||Q^T b||^2, residual floor
};

/// One-shot convenience wrapper around StlsSolver.
SparseSolution stls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                    const StlsConfig& config);

}  // namespace pbed
