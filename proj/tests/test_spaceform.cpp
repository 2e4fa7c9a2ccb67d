#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "curvint/spaceform.hpp"

using namespace curvint;

namespace {

constexpr double kPi = std::numbers::pi;

Vec v(std::initializer_list<double> xs) {
    Vec out(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) out(i++) = x;
    return out;
}

VectorField constant_field(int dim, const Vec& c) {
    return VectorField(SmoothMap::from_program(dim, dim, [c](const auto& x) {
        using S = std::decay_t<decltype(x[0])>;
        std::vector<S> out(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) out[i] = S(c(static_cast<Eigen::Index>(i)));
        return out;
    }));
}

VectorField identity_field(int dim) {
    return VectorField(SmoothMap::from_program(dim, dim, [](const auto& x) { return x; }));
}

// A tangent field built from a linear map and the model projection.
VectorField tangent_field(const AmbientModel& model, const Mat& A, const Vec& b) {
    const ModelKind kind = model.kind();
    const double R0 = model.radius();
    const int N = model.coord_dim();
    return VectorField(SmoothMap::from_program(N, N, [=](const auto& x) {
        using S = std::decay_t<decltype(x[0])>;
        std::vector<S> w(x.size());
        for (int i = 0; i < N; ++i) {
            S acc(b(i));
            for (int j = 0; j < N; ++j) acc += A(i, j) * x[static_cast<std::size_t>(j)];
            w[static_cast<std::size_t>(i)] = acc;
        }
        if (kind == ModelKind::sphere) {
            S d(0.0);
            for (int i = 0; i < N; ++i) d += w[i] * x[i];
            for (int i = 0; i < N; ++i) w[i] = w[i] - d / (R0 * R0) * x[i];
        } else if (kind == ModelKind::hyperboloid) {
            S d = -w[0] * x[0];
            for (int i = 1; i < N; ++i) d += w[i] * x[i];
            for (int i = 0; i < N; ++i) w[i] = w[i] + d / (R0 * R0) * x[i];
        } else if (kind == ModelKind::warped_product) {
            S d(0.0);
            for (int i = 1; i < N; ++i) d += w[i] * x[i];
            for (int i = 1; i < N; ++i) w[i] = w[i] - d * x[i];
        }
        return w;
    }));
}

std::vector<AmbientModel> all_models() {
    return {AmbientModel::euclidean(3), AmbientModel::sphere(3, 1.0), AmbientModel::sphere(3, 2.5),
            AmbientModel::hyperboloid(3, 1.0), AmbientModel::hyperboloid(4, 0.7),
            AmbientModel::warped(3, Warp::polynomial({1.0, 0.0, 1.0})), AmbientModel::warped(3, Warp::space_form(1.0))};
}

}  // namespace

TEST_CASE("inner products") {
    const auto E = AmbientModel::euclidean(3);
    const AmbientPoint o{Vec::Zero(3)};
    CHECK(inner(E, {o, v({1, 0, 0})}, {o, v({1, 0, 0})}) == 1.0);

    const auto H = AmbientModel::hyperboloid(3, 1.0);
    const AmbientPoint h{v({1, 0, 0, 0})};
    CHECK(inner(H, {h, v({0, 1, 0, 0})}, {h, v({0, 1, 0, 0})}) == 1.0);

    const auto W = AmbientModel::warped(3, Warp::polynomial({0.0, 1.0}, 0.0));
    const AmbientPoint p{v({2, 1, 0, 0})};
    CHECK(inner(W, {p, v({0, 0, 1, 0})}, {p, v({0, 0, 1, 0})}) == doctest::Approx(4.0));
}

TEST_CASE("inner products validate their inputs") {
    const auto S = AmbientModel::sphere(2, 1.0);
    const AmbientPoint a{v({0, 0, 1})}, b{v({1, 0, 0})}, bad{v({0, 0, 2})};
    CHECK_THROWS_AS(inner(S, {a, v({1, 0, 0})}, {b, v({0, 1, 0})}), InvalidArgument);
    CHECK_THROWS_AS(inner(S, {bad, v({1, 0, 0})}, {bad, v({1, 0, 0})}), InvalidArgument);
}

TEST_CASE("tangent projection") {
    const auto S = AmbientModel::sphere(2, 1.0);
    const AmbientPoint np{v({0, 0, 1})};
    CHECK(project_tangent(S, np, v({0, 0, 5})).vec.norm() == 0.0);
    CHECK((project_tangent(S, np, v({1, 2, 3})).vec - v({1, 2, 0})).norm() == 0.0);

    const auto H = AmbientModel::hyperboloid(3, 1.0);
    const AmbientPoint h{v({1, 0, 0, 0})};
    CHECK((project_tangent(H, h, v({1, 1, 0, 0})).vec - v({0, 1, 0, 0})).norm() <= 1e-15);

    std::mt19937_64 rng(3);
    for (const auto& m : all_models()) {
        const AmbientPoint p = random_point(m, rng);
        const TangentVector t = random_tangent(m, p, rng);
        CHECK(m.tangency_defect(t) <= 1e-12);
    }
}

TEST_CASE("covariant derivative examples") {
    const auto E = AmbientModel::euclidean(3);
    const AmbientPoint p{v({0.3, -1, 2})};
    const TangentVector Y{p, v({1, 2, -0.5})};
    CHECK((covariant_derivative(E, identity_field(3), p, Y).vec - Y.vec).norm() <= 1e-15);
    CHECK(covariant_derivative(E, constant_field(3, v({0, 0, 1})), p, Y).vec.norm() == 0.0);

    // psi(r) = r: the flat cone over S^2, P = psi d_r, nabla_{d_r} P = d_r.
    const auto W = AmbientModel::warped(3, Warp::polynomial({0.0, 1.0}, 0.0));
    const AmbientPoint q{v({2, 0, 1, 0})};
    const PositionField P = position_field(W, q);
    const TangentVector dr{q, v({1, 0, 0, 0})};
    CHECK((covariant_derivative(W, P.field, q, dr).vec - dr.vec).norm() <= 1e-14);
}

TEST_CASE("geodesic distance examples") {
    const auto E = AmbientModel::euclidean(3);
    CHECK(geodesic_distance(E, {Vec::Zero(3)}, {v({3, 4, 0})}) == 5.0);
    const auto S = AmbientModel::sphere(2, 1.0);
    CHECK(geodesic_distance(S, {v({0, 0, 1})}, {v({1, 0, 0})}) == doctest::Approx(kPi / 2).epsilon(1e-15));
    const auto H = AmbientModel::hyperboloid(3, 1.0);
    CHECK(geodesic_distance(H, {v({1, 0, 0, 0})}, {v({std::cosh(1.0), std::sinh(1.0), 0, 0})}) ==
          doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("geodesic distance is symmetric and vanishes on the diagonal") {
    std::mt19937_64 rng(9);
    for (const auto& m : {AmbientModel::euclidean(3), AmbientModel::sphere(3, 1.3), AmbientModel::hyperboloid(3, 0.8)}) {
        for (int k = 0; k < 20; ++k) {
            const AmbientPoint a = random_point(m, rng), b = random_point(m, rng);
            CHECK(std::abs(geodesic_distance(m, a, b) - geodesic_distance(m, b, a)) <= 1e-12);
            CHECK(geodesic_distance(m, a, a) == 0.0);
        }
    }
    const auto W = AmbientModel::warped(3, Warp::polynomial({1.0, 0.0, 1.0}));
    CHECK(geodesic_distance(W, {v({0.5, 0, 0, 1})}, {v({2, 0, 0, 1})}) == 1.5);
    CHECK_THROWS_AS(geodesic_distance(W, {v({0.5, 0, 0, 1})}, {v({2, 1, 0, 0})}), InvalidArgument);
}

TEST_CASE("warp functions") {
    const auto a = warp_functions(0.0, 7.0);
    CHECK(a.s == 7.0);
    CHECK(a.lambda == 1.0);
    const auto b = warp_functions(1.0, kPi / 2);
    CHECK(b.s == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(b.lambda) <= 1e-15);
    const auto c = warp_functions(-1.0, 0.0);
    CHECK(c.s == 0.0);
    CHECK(c.lambda == 1.0);
    CHECK_THROWS_AS(warp_functions(1.0, kPi), InvalidArgument);
    CHECK_THROWS_AS(warp_functions(0.0, -0.1), InvalidArgument);
}

TEST_CASE("lambda_c is the derivative of s_c") {
    for (double c : {1.0, -1.0, 0.25, 0.0}) {
        const double r = 0.8;
        double err[2];
        const double hs[2] = {1e-3, 1e-4};
        for (int k = 0; k < 2; ++k) {
            const double h = hs[k];
            const double fd = (warp_functions(c, r + h).s - warp_functions(c, r - h).s) / (2 * h);
            err[k] = std::abs(fd - warp_functions(c, r).lambda);
        }
        if (c == 0.0) {
            CHECK(err[0] <= 1e-12);
        } else {
            CHECK(std::log10(err[0] / err[1]) >= 1.9);
        }
    }
}

TEST_CASE("position field examples") {
    const auto E = AmbientModel::euclidean(3);
    const auto PE = position_field(E, {Vec::Zero(3)});
    const AmbientPoint p{v({1, 2, 3})};
    CHECK((PE.field.at(p).vec - v({1, 2, 3})).norm() == 0.0);
    CHECK(PE.lambda(p) == 1.0);

    const auto S = AmbientModel::sphere(2, 1.0);
    const auto PS = position_field(S, {v({0, 0, 1})});
    const AmbientPoint eq{v({1, 0, 0})};
    CHECK(norm(S, PS.field.at(eq)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(PS.lambda(eq)) <= 1e-15);
    // Points away from the base along the geodesic.
    CHECK((PS.field.at(eq).vec - v({0, 0, -1})).norm() <= 1e-14);

    const auto W = AmbientModel::warped(3, Warp::polynomial({1.0, 0.0, 1.0}));
    const auto PW = position_field(W, W.origin());
    const AmbientPoint q{v({1, 0, 0, 1})};
    CHECK((PW.field.at(q).vec - v({2, 0, 0, 0})).norm() <= 1e-15);
    CHECK(PW.lambda(q) == doctest::Approx(2.0));
}

TEST_CASE("position field at the base and the antipode") {
    const auto S = AmbientModel::sphere(2, 1.0);
    const AmbientPoint np{v({0, 0, 1})};
    const auto P = position_field(S, np);
    CHECK(P.field.at(np).vec.norm() == 0.0);
    CHECK(P.lambda(np) == 1.0);
    CHECK_THROWS_AS((void)P.field.at({v({0, 0, -1})}), DegenerateGeometry);
}

TEST_CASE("position-field law nabla_Y P = lambda Y on every model and backend") {
    for (const auto& m : all_models()) {
        std::mt19937_64 rng(42);
        const AmbientPoint base = m.kind() == ModelKind::warped_product ? m.origin() : random_point(m, rng);
        const PositionField P = position_field(m, base);
        for (Backend b : {Backend::forward_ad, Backend::central_difference}) {
            const VectorField field = P.field.with_backend(b);
            double worst = 0.0;
            for (int k = 0; k < 100; ++k) {
                AmbientPoint p = random_point(m, rng);
                if (m.kind() == ModelKind::sphere && geodesic_distance(m, base, p) > 0.95 * kPi * m.radius()) continue;
                const TangentVector Y = random_tangent(m, p, rng);
                const TangentVector D = covariant_derivative(m, field, p, Y);
                worst = std::max(worst, norm(m, {p, D.vec - P.lambda(p) * Y.vec}) / norm(m, Y));
            }
            CHECK(worst <= 1e-6);
        }
    }
}

TEST_CASE("metric compatibility") {
    std::mt19937_64 rng(77);
    std::normal_distribution<double> g;
    for (const auto& m : all_models()) {
        const int N = m.coord_dim();
        Mat A(N, N), B(N, N);
        Vec a(N), b(N);
        for (int i = 0; i < N; ++i) {
            a(i) = g(rng);
            b(i) = g(rng);
            for (int j = 0; j < N; ++j) {
                A(i, j) = g(rng);
                B(i, j) = g(rng);
            }
        }
        const VectorField U = tangent_field(m, A, a), V = tangent_field(m, B, b);
        for (int k = 0; k < 10; ++k) {
            const AmbientPoint p = random_point(m, rng);
            const TangentVector Y = random_tangent(m, p, rng);
            auto f = [&](double t) {
                const Vec x = p.coords + t * Y.vec;
                return m.pairing(x, U.coords().value(x), V.coords().value(x));
            };
            const double h = 1e-5;
            const double dY = (f(h) - f(-h)) / (2 * h);
            const double rhs = inner(m, covariant_derivative(m, U, p, Y), V.at(p)) +
                               inner(m, U.at(p), covariant_derivative(m, V, p, Y));
            CHECK(std::abs(dY - rhs) <= 1e-6 * (1.0 + std::abs(dY)));
        }
    }
}

TEST_CASE("warped product with psi = s_c matches the embedded space form") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    for (double c : {1.0, -1.0}) {
        const auto W = AmbientModel::warped(3, Warp::space_form(c));
        for (int k = 0; k < 20; ++k) {
            const AmbientPoint p = random_point(W, rng);
            const double r = p.coords(0);
            const Vec y = p.coords.tail(3);
            const TangentVector u = random_tangent(W, p, rng), w = random_tangent(W, p, rng);
            // Polar correspondence (r, y) -> (s(r) y, lambda(r)) or (lambda(r), s(r) y) with R0 = 1.
            auto push = [&](const Vec& t) {
                const double s = warp_s(c, r), l = warp_lambda(c, r);
                const double ds = l, dl = -c * s;
                Vec out(4);
                if (c > 0) {
                    out.head(3) = ds * t(0) * y + s * t.tail(3);
                    out(3) = dl * t(0);
                } else {
                    out(0) = dl * t(0);
                    out.tail(3) = ds * t(0) * y + s * t.tail(3);
                }
                return out;
            };
            Vec x(4);
            if (c > 0) {
                x.head(3) = warp_s(c, r) * y;
                x(3) = warp_lambda(c, r);
            } else {
                x(0) = warp_lambda(c, r);
                x.tail(3) = warp_s(c, r) * y;
            }
            const auto E = c > 0 ? AmbientModel::sphere(3, 1.0) : AmbientModel::hyperboloid(3, 1.0);
            const double lhs = inner(W, u, w);
            const double rhs = inner(E, {{x}, push(u.vec)}, {{x}, push(w.vec)});
            CHECK(std::abs(lhs - rhs) <= 1e-10 * (1.0 + std::abs(lhs)));
        }
    }
}

TEST_CASE("Killing field examples") {
    const auto E = AmbientModel::euclidean(3);
    const VectorField X = killing_field(E, {Mat::Zero(3, 3), v({0, 0, 1})});
    CHECK((X.at({v({4, -2, 1})}).vec - v({0, 0, 1})).norm() == 0.0);

    const double R0 = 2.0;
    const auto S = AmbientModel::sphere(3, R0);
    Mat rot = Mat::Zero(4, 4);
    rot(1, 0) = 1.0;
    rot(0, 1) = -1.0;
    const VectorField XS = killing_field(S, {rot, Vec()});
    const TangentVector t = XS.at({v({R0, 0, 0, 0})});
    CHECK((t.vec - v({0, R0, 0, 0})).norm() == 0.0);
    CHECK(S.tangency_defect(t) == 0.0);

    const auto H = AmbientModel::hyperboloid(3, 1.0);
    Mat boost = Mat::Zero(4, 4);
    boost(0, 1) = 1.0;
    boost(1, 0) = 1.0;
    const VectorField XH = killing_field(H, {boost, Vec()});
    CHECK((XH.at({v({1, 0, 0, 0})}).vec - v({0, 1, 0, 0})).norm() == 0.0);

    CHECK_THROWS_AS(killing_field(S, {Mat::Identity(4, 4), Vec()}), DegenerateGeometry);
    CHECK_THROWS_AS(killing_field(H, {rot + boost, Vec()}), DegenerateGeometry);
    CHECK_THROWS_AS(killing_field(S, {rot, v({1, 0, 0, 0})}), InvalidArgument);
}

TEST_CASE("Killing defect") {
    std::mt19937_64 rng(8);
    auto samples = [&](const AmbientModel& m, bool unit) {
        std::vector<KillingSample> s;
        for (int k = 0; k < 30; ++k) {
            const AmbientPoint p = random_point(m, rng);
            TangentVector Y = random_tangent(m, p, rng);
            if (unit) Y.vec /= norm(m, Y);
            s.push_back({p, Y, unit ? Y : random_tangent(m, p, rng)});
        }
        return s;
    };
    const auto E = AmbientModel::euclidean(3);
    Mat rot = Mat::Zero(3, 3);
    rot(0, 1) = -1.0;
    rot(1, 0) = 1.0;
    CHECK(killing_defect(E, killing_field(E, {rot, v({1, 2, 3})}).with_backend(Backend::central_difference),
                         samples(E, false)) <= 1e-9);
    CHECK(killing_defect(E, identity_field(3), samples(E, true)) == doctest::Approx(2.0).epsilon(1e-12));

    const auto S = AmbientModel::sphere(3, 1.0);
    Mat r4 = Mat::Zero(4, 4);
    r4(0, 3) = -1.0;
    r4(3, 0) = 1.0;
    r4(1, 2) = 0.5;
    r4(2, 1) = -0.5;
    CHECK(killing_defect(S, killing_field(S, {r4, Vec()}).with_backend(Backend::central_difference),
                         samples(S, false)) <= 1e-9);
}

TEST_CASE("membership is enforced") {
    const auto S = AmbientModel::sphere(2, 1.0);
    CHECK_THROWS_AS(S.require_member({v({0, 0, 1.001})}), InvalidArgument);
    CHECK_NOTHROW(S.require_member({v({0, 0, 1})}));
    const auto H = AmbientModel::hyperboloid(2, 1.0);
    CHECK_THROWS_AS(H.require_member({v({-1, 0, 0})}), InvalidArgument);
    CHECK(AmbientModel::sphere(3, 2.0).curvature().value() == 0.25);
    CHECK(AmbientModel::hyperboloid(3, 2.0).curvature().value() == -0.25);
    CHECK_FALSE(AmbientModel::warped(3, Warp::polynomial({1.0, 0.0, 1.0})).curvature().has_value());
    CHECK(AmbientModel::warped(3, Warp::space_form(-1.0)).curvature().value() == -1.0);
}
