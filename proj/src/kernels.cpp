//
// Project     : hcmx
// Module      : kernels
// Description : model problem kernels
//

#include "hcmx/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace hcmx::kernel {

double bessel_k(double nu, double x) {
    if (!(x > 0.0))
        throw std::invalid_argument("bessel_k: x must be positive");
    return std::cyl_bessel_k(nu, x);
}

namespace {

double dist3(const geom::Point3& a, const geom::Point3& b) {
    const double dx = a[0] - b[0];
    const double dy = a[1] - b[1];
    const double dz = a[2] - b[2];
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

} // namespace

LaplaceSlp::LaplaceSlp(std::shared_ptr<const geom::PointSet> points)
    : points_(std::move(points)) {
    if (points_->areas.size() != points_->coords.size())
        throw std::invalid_argument("LaplaceSlp: point set carries no triangle areas");
}

double LaplaceSlp::entry(std::size_t i, std::size_t j) const {
    const double ai = points_->area_at_internal(i);
    if (i == j) {
        // effective triangle radius regularizes the singular diagonal
        const double rho = std::sqrt(ai / M_PI);
        return ai * ai / rho;
    }
    const double aj = points_->area_at_internal(j);
    const double d = dist3(points_->point_at_internal(i), points_->point_at_internal(j));
    return ai * aj / d;
}

MaternCovariance::MaternCovariance(std::shared_ptr<const geom::PointSet> points,
                                   MaternParams params)
    : points_(std::move(points)), params_(params) {
    if (!(params_.smoothness > 0.0) || !(params_.range > 0.0) || !(params_.variance > 0.0))
        throw std::invalid_argument("MaternCovariance: parameters must be positive");
    prefactor_ = params_.variance * std::pow(2.0, 1.0 - params_.smoothness) /
                 std::tgamma(params_.smoothness);
}

double MaternCovariance::at_distance(double d) const {
    if (d <= 0.0)
        return params_.variance; // continuous limit at zero lag
    const double nu = params_.smoothness;
    const double arg = std::sqrt(2.0 * nu) * d / params_.range;
    const double v = prefactor_ * std::pow(arg, nu) * bessel_k(nu, arg);
    // x^nu K_nu(x) -> 2^(nu-1) Gamma(nu) as x -> 0; guard underflow of the pow
    return std::isfinite(v) ? v : params_.variance;
}

double MaternCovariance::entry(std::size_t i, std::size_t j) const {
    if (i == j)
        return params_.variance;
    return at_distance(dist3(points_->point_at_internal(i), points_->point_at_internal(j)));
}

} // namespace hcmx::kernel
