#include "pbed/stls.hpp"

#include <algorithm>
#include <cmath>

#include "pbed/errors.hpp"

namespace pbed {

void StlsConfig::validate() const {
    if (lambda < 0.0) throw InvalidArgument("sparsity index must be non-negative");
    if (max_iterations < 1) throw InvalidArgument("max_iterations must be at least 1");
}

Eigen::VectorXd least_squares(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
    if (A.cols() == 0) return Eigen::VectorXd();
    if (A.rows() != b.size())
        throw InvalidArgument("least_squares: row count does not match right-hand side");
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
    return cod.solve(b);
}

StlsSolver::StlsSolver(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
    if (A.rows() != b.size())
        throw InvalidArgument("StlsSolver: row count does not match right-hand side");
    b_norm_sq_ = b.squaredNorm();
    if (A.cols() == 0) {
        r_.resize(0, 0);
        qtb_.resize(0);
        tail_sq_ = b_norm_sq_;
        return;
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
    const Eigen::Index q = A.cols();
    r_ = qr.matrixQR().topRows(q).triangularView<Eigen::Upper>();
    Eigen::VectorXd qtb_full = qr.householderQ().transpose() * b;
    qtb_ = qtb_full.head(q);
    tail_sq_ = std::max(0.0, b_norm_sq_ - qtb_.squaredNorm());
}

Eigen::VectorXd StlsSolver::subset_least_squares(const std::vector<std::size_t>& cols) const {
    Eigen::MatrixXd rs(r_.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t s = 0; s < cols.size(); ++s)
        rs.col(static_cast<Eigen::Index>(s)) = r_.col(static_cast<Eigen::Index>(cols[s]));
    // Minimizing over R's column subset is equivalent to the original data:
    // A_S = Q R_S, and Q has orthonormal columns. COD gives the minimum-norm
    // minimizer on rank-deficient subsets.
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(rs);
    return cod.solve(qtb_);
}

SparseSolution StlsSolver::solve(const StlsConfig& config) const {
    config.validate();
    const auto q = static_cast<std::size_t>(r_.cols());

    SparseSolution out;
    out.lambda = config.lambda;
    out.coefficients = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(q));
    if (q == 0) {
        out.residual_sq = b_norm_sq_;
        out.residual_rel = b_norm_sq_ > 0.0 ? 1.0 : 0.0;
        return out;
    }

    std::vector<std::size_t> support(q);
    for (std::size_t i = 0; i < q; ++i) support[i] = i;

    Eigen::VectorXd coef;
    for (int it = 0; it < config.max_iterations; ++it) {
        coef = subset_least_squares(support);
        // Strictly-smaller-than-lambda entries are zeroed; ties survive.
        std::vector<std::size_t> next;
        next.reserve(support.size());
        for (std::size_t s = 0; s < support.size(); ++s)
            if (std::abs(coef(static_cast<Eigen::Index>(s))) >= config.lambda)
                next.push_back(support[s]);
        out.support_sizes.push_back(support.size());
        if (next.size() == support.size()) break;     // support stable: converged
        support = std::move(next);
        if (support.empty()) break;
    }

    if (!support.empty()) {
        coef = subset_least_squares(support);
        for (std::size_t s = 0; s < support.size(); ++s)
            out.coefficients(static_cast<Eigen::Index>(support[s])) =
                coef(static_cast<Eigen::Index>(s));
        Eigen::MatrixXd rs(r_.rows(), static_cast<Eigen::Index>(support.size()));
        for (std::size_t s = 0; s < support.size(); ++s)
            rs.col(static_cast<Eigen::Index>(s)) = r_.col(static_cast<Eigen::Index>(support[s]));
        out.residual_sq = tail_sq_ + (rs * coef - qtb_).squaredNorm();
    } else {
        out.residual_sq = b_norm_sq_;
    }
    out.support = std::move(support);
    out.term_count = out.support.size();
    out.residual_rel = b_norm_sq_ > 0.0 ? out.residual_sq / b_norm_sq_ : 0.0;
    return out;
}

SparseSolution stls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                    const StlsConfig& config) {
    return StlsSolver(A, b).solve(config);
}

}  // namespace pbed
