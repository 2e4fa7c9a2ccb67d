#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "curvint/smooth_map.hpp"

using namespace curvint;

namespace {

// f(x, y) = (sin(x) y, exp(x y))
SmoothMap sample_map() {
    return SmoothMap::from_program(2, 2, [](const auto& x) {
        using std::sin, std::exp;
        using S = std::decay_t<decltype(x[0])>;
        return std::vector<S>{sin(x[0]) * x[1], exp(x[0] * x[1])};
    });
}

Mat sample_jacobian(const Vec& p) {
    const double x = p(0), y = p(1), e = std::exp(x * y);
    Mat J(2, 2);
    J << std::cos(x) * y, std::sin(x), y * e, x * e;
    return J;
}

}  // namespace

TEST_CASE("dual numbers carry exact first derivatives") {
    const Dual1 x(0.7, 1.0);
    const Dual1 f = sin(x) * exp(x) + sqrt(x) / (1.0 + x);
    const double v = 0.7;
    const double df = std::cos(v) * std::exp(v) + std::sin(v) * std::exp(v) + 0.5 / std::sqrt(v) / (1.0 + v) -
                      std::sqrt(v) / ((1.0 + v) * (1.0 + v));
    CHECK(f.eps == doctest::Approx(df).epsilon(1e-14));
}

TEST_CASE("nested duals give second derivatives") {
    // d^2/dx^2 of x^3 at 2 is 12.
    const Dual2 x(Dual1(2.0, 1.0), Dual1(1.0, 0.0));
    const Dual2 f = x * x * x;
    CHECK(f.eps.eps == doctest::Approx(12.0));
}

TEST_CASE("the three backends agree on the Jacobian") {
    const SmoothMap f = sample_map();
    const Vec p = (Vec(2) << 0.3, -1.1).finished();
    const Mat exact = sample_jacobian(p);
    const Mat ad = f.jacobian(p);
    const Mat fd = f.with_backend(Backend::central_difference).jacobian(p);
    CHECK((ad - exact).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK((fd - exact).cwiseAbs().maxCoeff() <= 1e-9);
    const SmoothMap an = f.with_analytic(sample_jacobian);
    CHECK(an.backend() == Backend::analytic);
    CHECK((an.jacobian(p) - exact).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("second partials from forward AD and differences") {
    const SmoothMap f = sample_map();
    const Vec p = (Vec(2) << 0.3, -1.1).finished();
    const auto ad = f.second_partials(p);
    const auto fd = f.with_backend(Backend::central_difference).second_partials(p);
    REQUIRE(ad.size() == 4);
    // d2/dxdy of sin(x) y is cos(x).
    CHECK(ad[1](0) == doctest::Approx(std::cos(0.3)).epsilon(1e-14));
    CHECK(ad[2](0) == doctest::Approx(std::cos(0.3)).epsilon(1e-14));
    for (std::size_t k = 0; k < 4; ++k) CHECK((ad[k] - fd[k]).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("directional derivative matches J v") {
    const SmoothMap f = sample_map();
    const Vec p = (Vec(2) << -0.4, 0.9).finished();
    const Vec v = (Vec(2) << 2.0, -0.5).finished();
    CHECK((f.directional(p, v) - sample_jacobian(p) * v).norm() <= 1e-14);
}

TEST_CASE("plain functions fall back to central differences") {
    const SmoothMap f = SmoothMap::from_function(1, 1, [](const std::vector<double>& x) {
        return std::vector<double>{x[0] * x[0] * x[0]};
    });
    CHECK(f.backend() == Backend::central_difference);
    CHECK_FALSE(f.supports(Backend::forward_ad));
    CHECK_THROWS_AS((void)f.with_backend(Backend::forward_ad), InvalidArgument);
    CHECK(f.jacobian(Vec::Constant(1, 2.0))(0, 0) == doctest::Approx(12.0).epsilon(1e-9));
}

TEST_CASE("affine precomposition") {
    const SmoothMap f = sample_map();
    Mat A(2, 2);
    A << 2.0, 1.0, 0.0, -1.0;
    const Vec b = (Vec(2) << 0.1, 0.2).finished();
    const SmoothMap g = f.precompose_affine(A, b);
    const Vec s = (Vec(2) << 0.3, 0.4).finished();
    const Vec x = A * s + b;
    CHECK((g.value(s) - f.value(x)).norm() <= 1e-15);
    CHECK((g.jacobian(s) - sample_jacobian(x) * A).cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("difference steps scale with the point") {
    const Vec zero = Vec::Zero(3);
    const Vec big = Vec::Constant(3, 100.0);
    CHECK(first_difference_step(zero) == doctest::Approx(std::cbrt(std::numeric_limits<double>::epsilon())));
    CHECK(first_difference_step(big) > 100.0 * first_difference_step(zero));
    CHECK(second_difference_step(zero) > first_difference_step(zero));
}

TEST_CASE("dimension mismatches are rejected") {
    const SmoothMap f = sample_map();
    CHECK_THROWS_AS((void)f.value(Vec::Zero(3)), InvalidArgument);
}
