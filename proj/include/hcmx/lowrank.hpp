#ifndef HCMX_LOWRANK_HPP
#define HCMX_LOWRANK_HPP
//
// Project     : hcmx
// Module      : lowrank
// Description : lowrank primitives: SVD truncation, rank selection and
//               adaptive cross approximation
//

#include <Eigen/Dense>

#include "hcmx/kernels.hpp"

namespace hcmx::lr {

// M ~= U * V^T with factors stored FP64 column-major
struct LowrankBlock {
    Eigen::MatrixXd U; // rows x k
    Eigen::MatrixXd V; // cols x k

    Eigen::Index rank() const { return U.cols(); }
    Eigen::Index rows() const { return U.rows(); }
    Eigen::Index cols() const { return V.rows(); }
    Eigen::MatrixXd dense() const { return U * V.transpose(); }

    static LowrankBlock zero(Eigen::Index rows, Eigen::Index cols) {
        return {Eigen::MatrixXd(rows, 0), Eigen::MatrixXd(cols, 0)};
    }
};

struct TruncationCriterion {
    double eps = 1e-6;
    Eigen::Index k_max = -1; // negative: no cap
};

// smallest k with sigma_k <= eps * sigma_0 (the first excluded value);
// 0 for an all-zero spectrum
Eigen::Index rank_from_singular_values(const Eigen::VectorXd& sigma, double eps);

// Alg.: qr[U], qr[V], svd[R_U R_V^T], rank from singular values, then
// W = Q_U U_s S_s and X = Q_V V_s. Singular values are absorbed into W.
LowrankBlock svd_truncate(const Eigen::MatrixXd& U, const Eigen::MatrixXd& V,
                          const TruncationCriterion& crit);

// same route, but keeping the factors orthonormal and the singular values
// separate (used by the precision-heterogeneous representations)
struct SvdFactors {
    Eigen::MatrixXd W; // orthonormal columns
    Eigen::VectorXd sigma;
    Eigen::MatrixXd X; // orthonormal columns
};
SvdFactors svd_factors(const Eigen::MatrixXd& U, const Eigen::MatrixXd& V,
                       const TruncationCriterion& crit);

// sub-block of a kernel evaluator in internal index order
struct BlockView {
    const kernel::KernelEvaluator* eval = nullptr;
    std::size_t row_off = 0;
    std::size_t col_off = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;

    double entry(std::size_t i, std::size_t j) const {
        return eval->entry(row_off + i, col_off + j);
    }
};

struct AcaResult {
    LowrankBlock lr;
    bool rank_capped = false;
};

// Adaptive cross approximation with partial pivoting. Stops once the last
// cross satisfies |u||v| <= eps * |M_k|_F (running estimate) or the rank
// cap is hit.
AcaResult aca_approximate(const BlockView& block, double eps, Eigen::Index k_max);

} // namespace hcmx::lr

#endif // HCMX_LOWRANK_HPP
