#include <doctest.h>

#include <cmath>
#include <memory>

#include <Eigen/Dense>

#include "hcmx/clustering.hpp"
#include "hcmx/kernels.hpp"
#include "hcmx/lowrank.hpp"
#include "oracles.hpp"

using namespace hcmx;

namespace {

Eigen::MatrixXd dense_matrix(const kernel::KernelEvaluator& k) {
    Eigen::MatrixXd M(k.rows(), k.cols());
    for (Eigen::Index i = 0; i < M.rows(); ++i)
        for (Eigen::Index j = 0; j < M.cols(); ++j)
            M(i, j) = k.entry(i, j);
    return M;
}

} // namespace

TEST_CASE("bessel_k half-integer closed form and monotonicity") {
    // K_{1/2}(x) = sqrt(pi/(2x)) exp(-x)
    for (double x : {0.1, 0.5, 1.0, 3.0, 10.0}) {
        const double ref = std::sqrt(M_PI / (2.0 * x)) * std::exp(-x);
        CHECK(kernel::bessel_k(0.5, x) == doctest::Approx(ref).epsilon(1e-13));
    }
    CHECK(kernel::bessel_k(0.5, 1.0) == doctest::Approx(0.461068504447).epsilon(1e-10));

    double prev = kernel::bessel_k(1.0 / 3.0, 1e-3);
    for (double x = 2e-3; x < 40.0; x *= 1.7) {
        const double v = kernel::bessel_k(1.0 / 3.0, x);
        CHECK(v > 0.0);
        CHECK(v < prev);
        prev = v;
    }
    CHECK_THROWS_AS(kernel::bessel_k(0.5, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(kernel::bessel_k(0.5, -1.0), std::invalid_argument);
}

TEST_CASE("bessel_k matches the integral-representation quadrature") {
    for (double nu : {1.0 / 3.0, 0.75, 1.0, 2.5, 5.0}) {
        for (double x : {1e-3, 0.1, 1.0, 7.0, 30.0}) {
            const double ref = oracle::bessel_k_quadrature(nu, x);
            CHECK(std::abs(kernel::bessel_k(nu, x) - ref) <= 1e-10 * std::abs(ref));
        }
    }
    // spot check deep into the small-x regime
    const double ref = oracle::bessel_k_quadrature(1.0 / 3.0, 1e-6);
    CHECK(std::abs(kernel::bessel_k(1.0 / 3.0, 1e-6) - ref) <= 1e-10 * ref);
}

TEST_CASE("matern covariance values") {
    auto pts = std::make_shared<geom::PointSet>(
        geom::generate_points(geom::Problem::matern_random_sphere, 32, 5));
    kernel::MaternCovariance cov(pts, {1.0, 1.0, 0.5});
    CHECK(cov.at_distance(0.0) == 1.0);
    // nu = 1/2 closed form: sigma^2 exp(-d/ell)
    CHECK(cov.at_distance(1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));

    kernel::MaternCovariance cov13(pts, {1.0, 1.0, 1.0 / 3.0});
    // independent evaluation of the closed form at d = 0.5 through the
    // quadrature oracle for K_nu
    const double nu = 1.0 / 3.0;
    const double arg = std::sqrt(2.0 * nu) * 0.5;
    const double ref = std::pow(2.0, 1.0 - nu) / std::tgamma(nu) * std::pow(arg, nu) *
                       oracle::bessel_k_quadrature(nu, arg);
    CHECK(std::abs(cov13.at_distance(0.5) - ref) <= 1e-10 * ref);

    // monotone decreasing in d
    double prev = cov13.at_distance(1e-4);
    for (double d = 0.01; d < 2.0; d += 0.05) {
        const double v = cov13.at_distance(d);
        CHECK(v < prev);
        prev = v;
    }

    // symmetry
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 8; ++j)
            CHECK(cov13.entry(i, j) == cov13.entry(j, i));
}

TEST_CASE("matern matrix is positive definite with jitter") {
    auto pts = std::make_shared<geom::PointSet>(
        geom::generate_points(geom::Problem::matern_random_sphere, 256, 11));
    auto cov = std::make_shared<kernel::MaternCovariance>(
        pts, kernel::MaternParams{1.0, 1.0, 1.0 / 3.0});
    kernel::JitteredKernel jittered(cov, 1e-12);
    Eigen::MatrixXd M = dense_matrix(jittered);
    CHECK(M.isApprox(M.transpose(), 1e-14));
    Eigen::LLT<Eigen::MatrixXd> llt(M);
    CHECK(llt.info() == Eigen::Success);
}

TEST_CASE("laplace slp entries") {
    auto pts = std::make_shared<geom::PointSet>(
        geom::generate_points(geom::Problem::laplace_sphere, 320, 0));
    kernel::LaplaceSlp slp(pts);

    // off-diagonal formula against a by-hand evaluation
    const auto& p0 = pts->point_at_internal(0);
    const auto& p1 = pts->point_at_internal(1);
    const double d = std::sqrt(std::pow(p0[0] - p1[0], 2) + std::pow(p0[1] - p1[1], 2) +
                               std::pow(p0[2] - p1[2], 2));
    CHECK(slp.entry(0, 1) ==
          doctest::Approx(pts->area_at_internal(0) * pts->area_at_internal(1) / d));
    CHECK(slp.entry(0, 1) == slp.entry(1, 0));

    // diagonal regularization a^2 / sqrt(a/pi), finite everywhere
    const double a = pts->area_at_internal(3);
    CHECK(slp.entry(3, 3) == doctest::Approx(a * a / std::sqrt(a / M_PI)));

    // antipodal unit vectors with equal areas give a^2/2
    geom::PointSet two;
    two.coords = {{0, 0, 1}, {0, 0, -1}};
    two.areas = {0.3, 0.3};
    two.i2e = {0, 1};
    two.e2i = {0, 1};
    kernel::LaplaceSlp pair(std::make_shared<geom::PointSet>(two));
    CHECK(pair.entry(0, 1) == doctest::Approx(0.3 * 0.3 / 2.0));
}

TEST_CASE("laplace slp is symmetric positive semidefinite at small n") {
    auto pts = std::make_shared<geom::PointSet>(
        geom::generate_points(geom::Problem::laplace_sphere, 320, 0));
    kernel::LaplaceSlp slp(pts);
    Eigen::MatrixXd M = dense_matrix(slp);
    CHECK(M.isApprox(M.transpose(), 1e-14));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(M);
    CHECK(eig.eigenvalues().minCoeff() >= -1e-10 * eig.eigenvalues().maxCoeff());
}

TEST_CASE("admissible laplace blocks admit low rank") {
    auto pts = std::make_shared<geom::PointSet>(
        geom::generate_points(geom::Problem::laplace_sphere, 1280, 0));
    geom::PointSet& mut = const_cast<geom::PointSet&>(*pts);
    auto tree = geom::build_cluster_tree(mut, 32);
    auto bt = geom::build_block_tree(tree, tree, geom::standard_admissibility(2.0));
    kernel::LaplaceSlp slp(pts);

    std::size_t checked = 0;
    geom::for_each_leaf(*bt.root, [&](const geom::Block& b) {
        if (!b.admissible || checked >= 4 || b.rows() < 64 || b.cols() < 64)
            return;
        ++checked;
        Eigen::MatrixXd M(b.rows(), b.cols());
        for (Eigen::Index i = 0; i < M.rows(); ++i)
            for (Eigen::Index j = 0; j < M.cols(); ++j)
                M(i, j) = slp.entry(b.row->first + i, b.col->first + j);
        int rank = 0;
        oracle::dense_truncate(M, 1e-6, rank);
        CHECK(rank < std::min(M.rows(), M.cols()) / 2);
    });
    CHECK(checked > 0);
}
