#ifndef HCMX_TESTS_ORACLES_HPP
#define HCMX_TESTS_ORACLES_HPP
//
// Independent reference implementations used only by the test suite.
// These deliberately avoid the library's own code paths.
//

#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

// Quantization of one value the way the bit-packed formats do it, but by
// masking the FP64 mantissa directly: scale-shift, add half an ulp of the
// kept precision, drop the low mantissa bits, undo the shift.
inline double mask_mantissa(double x, unsigned mant_bits, double min_mag) {
    if (x == 0.0)
        return x;
    const double vp = std::abs(x) / min_mag + 1.0;
    std::uint64_t u = std::bit_cast<std::uint64_t>(vp);
    if (mant_bits < 52) {
        u += 1ull << (51 - mant_bits);
        u &= ~((1ull << (52 - mant_bits)) - 1);
    }
    const double back = (std::bit_cast<double>(u) - 1.0) * min_mag;
    return std::signbit(x) ? -back : back;
}

// K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt via composite Simpson.
// Slow but accurate to well below 1e-11 relative for x >= 1e-6, nu <= 5.
inline double bessel_k_quadrature(double nu, double x) {
    // integrand decays once x cosh t dominates nu t; find T with
    // x cosh T - nu T > 60 + log-scale margin
    double t_hi = 1.0;
    while (x * std::cosh(t_hi) - nu * t_hi < 700.0 && t_hi < 800.0)
        t_hi *= 1.25;
    const int n = 400000; // even
    const double h = t_hi / n;
    auto f = [&](double t) {
        const double a = -x * std::cosh(t);
        if (a < -745.0)
            return 0.0;
        return std::exp(a) * std::cosh(nu * t);
    };
    double sum = f(0.0) + f(t_hi);
    for (int i = 1; i < n; ++i)
        sum += f(i * h) * (i % 2 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

// deterministic uniform double in [0,1)
struct Rng {
    std::mt19937_64 gen;
    explicit Rng(std::uint64_t seed) : gen(seed) {}
    double uniform() { return (gen() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    // magnitudes log-uniform in [lo, hi], random sign
    double log_uniform_signed(double lo, double hi) {
        const double mag = std::exp(uniform(std::log(lo), std::log(hi)));
        return uniform() < 0.5 ? -mag : mag;
    }
    int integer(int lo, int hi) { // inclusive
        return lo + static_cast<int>(gen() % static_cast<std::uint64_t>(hi - lo + 1));
    }
};

// dense rank-eps truncation of an explicit matrix product, used as the
// reference for svd_truncate
inline Eigen::MatrixXd dense_truncate(const Eigen::MatrixXd& M, double eps, int& rank_out) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    int k = 0;
    while (k < s.size() && s[k] > eps * s[0])
        ++k;
    if (s.size() == 0 || s[0] == 0.0)
        k = 0;
    rank_out = k;
    return svd.matrixU().leftCols(k) * s.head(k).asDiagonal() *
           svd.matrixV().leftCols(k).transpose();
}

inline double spectral_norm(const Eigen::MatrixXd& M) {
    if (M.size() == 0)
        return 0.0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    return svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
}

} // namespace oracle

#endif // HCMX_TESTS_ORACLES_HPP
