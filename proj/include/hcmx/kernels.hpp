#ifndef HCMX_KERNELS_HPP
#define HCMX_KERNELS_HPP
//
// Project     : hcmx
// Module      : kernels
// Description : matrix entry evaluation for the Laplace single layer
//               potential and the Matérn covariance model problems
//

#include <memory>

#include "hcmx/geometry.hpp"

namespace hcmx::kernel {

// modified Bessel function of the second kind, x > 0
double bessel_k(double nu, double x);

// Entry evaluation in the internal (cluster-tree) index order. Evaluators
// are immutable after construction; entry() is pure.
class KernelEvaluator {
public:
    virtual ~KernelEvaluator() = default;
    virtual std::size_t rows() const = 0;
    virtual std::size_t cols() const = 0;
    virtual double entry(std::size_t i, std::size_t j) const = 0;
};

// Collocation of 1/|x-y| on triangle centroids with piecewise constant
// ansatz: entry(i,j) = a_i a_j / |c_i - c_j| off the diagonal and the
// regularized value a_i^2 / sqrt(a_i/pi) on it.
class LaplaceSlp final : public KernelEvaluator {
public:
    explicit LaplaceSlp(std::shared_ptr<const geom::PointSet> points);
    std::size_t rows() const override { return points_->size(); }
    std::size_t cols() const override { return points_->size(); }
    double entry(std::size_t i, std::size_t j) const override;

private:
    std::shared_ptr<const geom::PointSet> points_;
};

struct MaternParams {
    double variance = 1.0;   // sigma^2
    double range = 1.0;      // ell
    double smoothness = 1.0 / 3.0; // nu
};

class MaternCovariance final : public KernelEvaluator {
public:
    MaternCovariance(std::shared_ptr<const geom::PointSet> points, MaternParams params);
    std::size_t rows() const override { return points_->size(); }
    std::size_t cols() const override { return points_->size(); }
    double entry(std::size_t i, std::size_t j) const override;

    // covariance value at distance d
    double at_distance(double d) const;

private:
    std::shared_ptr<const geom::PointSet> points_;
    MaternParams params_;
    double prefactor_; // sigma^2 2^(1-nu) / Gamma(nu)
};

// adds jitter * identity to another evaluator (Matérn conditioning aid)
class JitteredKernel final : public KernelEvaluator {
public:
    JitteredKernel(std::shared_ptr<const KernelEvaluator> base, double jitter)
        : base_(std::move(base)), jitter_(jitter) {}
    std::size_t rows() const override { return base_->rows(); }
    std::size_t cols() const override { return base_->cols(); }
    double entry(std::size_t i, std::size_t j) const override {
        return base_->entry(i, j) + (i == j ? jitter_ : 0.0);
    }

private:
    std::shared_ptr<const KernelEvaluator> base_;
    double jitter_;
};

} // namespace hcmx::kernel

#endif // HCMX_KERNELS_HPP
