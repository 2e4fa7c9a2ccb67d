#include "curvint/immersion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

namespace curvint {

namespace {

// Determinant by cofactor expansion along the first row. Elimination with
// pivoting on values would lose the derivative part of singular minors.
template <class S>
S determinant(const std::vector<std::vector<S>>& a) {
    const std::size_t n = a.size();
    if (n == 0) return S(1.0);
    if (n == 1) return a[0][0];
    if (n == 2) return a[0][0] * a[1][1] - a[0][1] * a[1][0];
    S det(0.0);
    std::vector<std::vector<S>> minor(n - 1, std::vector<S>(n - 1));
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t r = 1; r < n; ++r)
            for (std::size_t k = 0, mk = 0; k < n; ++k)
                if (k != c) minor[r - 1][mk++] = a[r][k];
        const S term = a[0][c] * determinant(minor);
        det = c % 2 == 0 ? det + term : det - term;
    }
    return det;
}

std::vector<double> to_std(const Vec& v) { return {v.data(), v.data() + v.size()}; }

Vec to_eigen(const std::vector<double>& v) {
    return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

void require_supported_ambient(const Hypersurface& s) {
    if (s.ambient.kind() == ModelKind::warped_product) {
        throw InvalidArgument("hypersurfaces in warped-product ambients are not supported");
    }
    if (s.chart.map.out_dim() != s.ambient.coord_dim()) {
        throw InvalidArgument("chart codomain does not match the ambient realization");
    }
    const int expected = s.ambient.dim() - 1;
    if (s.dim() != expected || s.chart.map.in_dim() != expected) {
        throw InvalidArgument("chart dimension must be ambient dimension minus one");
    }
}

FirstOrderData first_order(const Hypersurface& surface, const Vec& x, const Mat& J) {
    const AmbientModel& model = surface.ambient;
    const int n = surface.dim();
    const AmbientPoint p{x};
    const double defect = model.membership_defect(x);
    if (!(defect <= 1e-10)) {
        throw InvalidArgument("chart image violates model membership (defect " + std::to_string(defect) + ")");
    }
    FirstOrderData out{p, {}, Mat(n, n), {p, Vec()}, 0.0};
    out.frame.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) out.frame.push_back({p, J.col(j)});
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) out.metric(j, k) = model.pairing(x, J.col(j), J.col(k));

    Eigen::SelfAdjointEigenSolver<Mat> eig(out.metric, Eigen::EigenvaluesOnly);
    const double smallest = eig.eigenvalues()(0);
    if (!(smallest > 1e-10)) throw DegenerateGeometry("frame is rank deficient at parameter point");
    out.density = std::sqrt(out.metric.determinant());

    std::vector<std::vector<double>> frame(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) frame[static_cast<std::size_t>(j)] = to_std(J.col(j));
    Vec nu = to_eigen(default_normal(model.kind(), to_std(x), frame));
    nu *= static_cast<double>(surface.chart.orientation * surface.normal_sign);
    out.normal = {p, nu};
    return out;
}

}  // namespace

template <class S>
std::vector<S> default_normal(ModelKind kind, const std::vector<S>& x, const std::vector<std::vector<S>>& frame) {
    using std::sqrt;
    const std::size_t N = x.size();
    std::vector<std::vector<S>> cols = frame;
    const bool embedded = kind == ModelKind::sphere || kind == ModelKind::hyperboloid;
    if (embedded) cols.push_back(x);
    if (cols.size() + 1 != N) throw InvalidArgument("default_normal: frame size does not match codimension one");

    // c_a = det[T_1..T_n, e_a] (Euclidean) or det[T_1..T_n, e_a, x] (embedded),
    // by cofactor expansion along the e_a column.
    const std::size_t slot = frame.size();
    std::vector<S> c(N);
    for (std::size_t a = 0; a < N; ++a) {
        std::vector<std::vector<S>> minor(N - 1, std::vector<S>(N - 1));
        for (std::size_t r = 0, mr = 0; r < N; ++r) {
            if (r == a) continue;
            for (std::size_t k = 0; k < N - 1; ++k) minor[mr][k] = cols[k][r];
            ++mr;
        }
        // Moving column e_a from the last position to `slot` costs (N-1-slot) swaps.
        const bool odd = ((a + (N - 1)) + (N - 1 - slot)) % 2 == 1;
        const S d = determinant(minor);
        c[a] = odd ? -d : d;
    }
    if (kind == ModelKind::hyperboloid) c[0] = -c[0];
    S nn(0.0);
    for (std::size_t a = 0; a < N; ++a) nn += c[a] * c[a];
    if (kind == ModelKind::hyperboloid) nn = nn - 2.0 * c[0] * c[0];
    if (!(value_of(nn) > 0.0)) throw DegenerateGeometry("default_normal: normal construction failed");
    const S len = sqrt(nn);
    for (auto& ci : c) ci = ci / len;
    return c;
}

template std::vector<double> default_normal(ModelKind, const std::vector<double>&,
                                            const std::vector<std::vector<double>>&);
template std::vector<Dual1> default_normal(ModelKind, const std::vector<Dual1>&,
                                           const std::vector<std::vector<Dual1>>&);

FirstOrderData frame_at(const Hypersurface& surface, const Vec& u) {
    require_supported_ambient(surface);
    if (u.size() != surface.dim()) throw InvalidArgument("frame_at: parameter dimension mismatch");
    return first_order(surface, surface.chart.map.value(u), surface.chart.map.jacobian(u));
}

ShapeData shape_operator_at(const Hypersurface& surface, const Vec& u) {
    require_supported_ambient(surface);
    if (u.size() != surface.dim()) throw InvalidArgument("shape_operator_at: parameter dimension mismatch");
    const SmoothMap& map = surface.chart.map;
    const int n = surface.dim();
    const auto nn = static_cast<std::size_t>(n);
    const Vec x = map.value(u);
    const Mat J = map.jacobian(u);
    const std::vector<Vec> H = map.second_partials(u);

    ShapeData out{first_order(surface, x, J), Mat(n, n), Mat(n, n)};
    const AmbientModel& model = surface.ambient;
    const Vec& nu = out.first.normal.vec;
    const double sign = static_cast<double>(surface.chart.orientation * surface.normal_sign);
    const auto N = static_cast<std::size_t>(x.size());

    // Differentiate the normal construction along u^j by pushing the
    // second-order jet through it as dual numbers.
    for (int j = 0; j < n; ++j) {
        std::vector<Dual1> xd(N);
        for (std::size_t i = 0; i < N; ++i) {
            xd[i] = Dual1(x(static_cast<Eigen::Index>(i)), J(static_cast<Eigen::Index>(i), j));
        }
        std::vector<std::vector<Dual1>> Td(nn, std::vector<Dual1>(N));
        for (std::size_t k = 0; k < nn; ++k) {
            const Vec& hjk = H[static_cast<std::size_t>(j) * nn + k];
            for (std::size_t i = 0; i < N; ++i) {
                Td[k][i] = Dual1(J(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)),
                                 hjk(static_cast<Eigen::Index>(i)));
            }
        }
        const std::vector<Dual1> nud = default_normal(model.kind(), xd, Td);
        Vec dnu(static_cast<Eigen::Index>(N));
        for (std::size_t i = 0; i < N; ++i) dnu(static_cast<Eigen::Index>(i)) = sign * nud[i].eps;
        const Vec cov = connection(model, out.first.point, nu, dnu, J.col(j));
        for (int k = 0; k < n; ++k) out.second_form(j, k) = model.pairing(x, cov, J.col(k));
    }

    const Mat& g = out.first.metric;
    Eigen::SelfAdjointEigenSolver<Mat> eig(g, Eigen::EigenvaluesOnly);
    const double cond = eig.eigenvalues()(n - 1) / eig.eigenvalues()(0);
    if (!(cond <= 1e12)) throw DegenerateGeometry("shape_operator_at: metric is ill-conditioned");
    out.weingarten = g.ldlt().solve(out.second_form.transpose());
    return out;
}

Vec principal_curvatures(const ShapeData& shape) {
    const Mat b = 0.5 * (shape.second_form + shape.second_form.transpose());
    Eigen::GeneralizedSelfAdjointEigenSolver<Mat> eig(b, shape.first.metric, Eigen::EigenvaluesOnly);
    return eig.eigenvalues();
}

Chart reparametrize_affine(const Chart& chart, const Mat& A, const Vec& b, std::vector<Axis> domain) {
    if (static_cast<int>(domain.size()) != A.cols()) throw InvalidArgument("reparametrize_affine: domain size mismatch");
    Chart out{std::move(domain), chart.map.precompose_affine(A, b), chart.orientation};
    if (A.determinant() < 0.0) out.orientation = -out.orientation;
    return out;
}

// ---------------------------------------------------------------------------

namespace {

constexpr double kPi = std::numbers::pi;

// Unit vector on S^n from n-1 polar angles and one azimuth.
template <class S>
std::vector<S> hyperspherical(const std::vector<S>& u) {
    using std::sin, std::cos;
    const std::size_t n = u.size();
    std::vector<S> w(n + 1);
    S prod(1.0);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        w[n - k] = prod * cos(u[k]);
        prod = prod * sin(u[k]);
    }
    w[1] = prod * sin(u[n - 1]);
    w[0] = prod * cos(u[n - 1]);
    return w;
}

std::vector<Axis> hyperspherical_domain(int n) {
    std::vector<Axis> d;
    for (int k = 0; k + 1 < n; ++k) d.push_back({0.0, kPi, false});
    d.push_back({0.0, 2.0 * kPi, true});
    return d;
}

Vec reference_parameter(const std::vector<Axis>& domain) {
    Vec u(static_cast<Eigen::Index>(domain.size()));
    for (std::size_t k = 0; k < domain.size(); ++k) {
        u(static_cast<Eigen::Index>(k)) = domain[k].lo + 0.37 * (domain[k].hi - domain[k].lo);
    }
    return u;
}

// Fix chart.orientation so the default normal agrees with `reference` at a
// generic parameter point.
template <class RefFn>
void orient(Hypersurface& s, RefFn reference) {
    s.chart.orientation = 1;
    const Vec u = reference_parameter(s.chart.domain);
    const FirstOrderData fo = frame_at(s, u);
    const Vec ref = reference(fo.point.coords);
    if (s.ambient.pairing(fo.point.coords, fo.normal.vec, ref) < 0.0) s.chart.orientation = -1;
}

void require_dim(int n) {
    if (n < 1) throw InvalidArgument("surface dimension must be at least 1");
}

}  // namespace

NamedSurface sphere_surface(int n, double radius, const Vec& center) {
    require_dim(n);
    if (!(radius > 0.0)) throw InvalidArgument("sphere_surface: radius must be positive");
    if (center.size() != n + 1) throw InvalidArgument("sphere_surface: center must have n+1 coordinates");
    SmoothMap map = SmoothMap::from_program(n, n + 1, [radius, center](const auto& u) {
        auto w = hyperspherical(u);
        for (std::size_t i = 0; i < w.size(); ++i) w[i] = center(static_cast<Eigen::Index>(i)) + radius * w[i];
        return w;
    });
    if (n == 2) {
        auto jac = [radius](const Vec& u) {
            const double st = std::sin(u(0)), ct = std::cos(u(0)), sp = std::sin(u(1)), cp = std::cos(u(1));
            Mat J(3, 2);
            J.col(0) << radius * ct * cp, radius * ct * sp, -radius * st;
            J.col(1) << -radius * st * sp, radius * st * cp, 0.0;
            return J;
        };
        auto second = [radius](const Vec& u) {
            const double st = std::sin(u(0)), ct = std::cos(u(0)), sp = std::sin(u(1)), cp = std::cos(u(1));
            Vec tt(3), tp(3), pp(3);
            tt << -radius * st * cp, -radius * st * sp, -radius * ct;
            tp << -radius * ct * sp, radius * ct * cp, 0.0;
            pp << -radius * st * cp, -radius * st * sp, 0.0;
            return std::vector<Vec>{tt, tp, tp, pp};
        };
        map = map.with_analytic(jac, second).with_backend(Backend::forward_ad);
    }
    Hypersurface s{AmbientModel::euclidean(n + 1), {hyperspherical_domain(n), map, 1}, 1};
    orient(s, [center](const Vec& x) -> Vec { return x - center; });
    return {"sphere", s, 1.0 / radius};
}

NamedSurface torus_surface(double R, double r) {
    if (!(R > r && r > 0.0)) throw InvalidArgument("torus_surface: need R > r > 0");
    SmoothMap map = SmoothMap::from_program(2, 3, [R, r](const auto& u) {
        using std::sin, std::cos;
        using S = std::decay_t<decltype(u[0])>;
        const S ring = R + r * cos(u[1]);
        return std::vector<S>{ring * cos(u[0]), ring * sin(u[0]), r * sin(u[1])};
    });
    auto jac = [R, r](const Vec& u) {
        const double su = std::sin(u(0)), cu = std::cos(u(0)), sv = std::sin(u(1)), cv = std::cos(u(1));
        const double ring = R + r * cv;
        Mat J(3, 2);
        J.col(0) << -ring * su, ring * cu, 0.0;
        J.col(1) << -r * sv * cu, -r * sv * su, r * cv;
        return J;
    };
    auto second = [R, r](const Vec& u) {
        const double su = std::sin(u(0)), cu = std::cos(u(0)), sv = std::sin(u(1)), cv = std::cos(u(1));
        const double ring = R + r * cv;
        Vec uu(3), uv(3), vv(3);
        uu << -ring * cu, -ring * su, 0.0;
        uv << r * sv * su, -r * sv * cu, 0.0;
        vv << -r * cv * cu, -r * cv * su, -r * sv;
        return std::vector<Vec>{uu, uv, uv, vv};
    };
    map = map.with_analytic(jac, second).with_backend(Backend::forward_ad);
    const std::vector<Axis> domain{{0.0, 2.0 * kPi, true}, {0.0, 2.0 * kPi, true}};
    Hypersurface s{AmbientModel::euclidean(3), {domain, map, 1}, 1};
    orient(s, [R](const Vec& x) -> Vec {
        const double rho = std::hypot(x(0), x(1));
        Vec c(3);
        c << R * x(0) / rho, R * x(1) / rho, 0.0;
        return x - c;
    });
    return {"torus", s, std::nullopt};
}

NamedSurface ellipsoid_surface(const std::vector<double>& semi_axes) {
    const int n = static_cast<int>(semi_axes.size()) - 1;
    require_dim(n);
    for (double a : semi_axes) {
        if (!(a > 0.0)) throw InvalidArgument("ellipsoid_surface: semi-axes must be positive");
    }
    SmoothMap map = SmoothMap::from_program(n, n + 1, [semi_axes](const auto& u) {
        auto w = hyperspherical(u);
        for (std::size_t i = 0; i < w.size(); ++i) w[i] = semi_axes[i] * w[i];
        return w;
    });
    Hypersurface s{AmbientModel::euclidean(n + 1), {hyperspherical_domain(n), map, 1}, 1};
    orient(s, [](const Vec& x) -> Vec { return x; });
    std::optional<double> umbilic;
    if (std::all_of(semi_axes.begin(), semi_axes.end(), [&](double a) { return a == semi_axes.front(); })) {
        umbilic = 1.0 / semi_axes.front();
    }
    return {"ellipsoid", s, umbilic};
}

NamedSurface geodesic_sphere(const AmbientModel& model, double rho) {
    const int n = model.dim() - 1;
    require_dim(n);
    if (!(rho > 0.0)) throw InvalidArgument("geodesic_sphere: radius must be positive");
    const double R0 = model.radius();
    switch (model.kind()) {
        case ModelKind::euclidean: {
            NamedSurface s = sphere_surface(n, rho, Vec::Zero(n + 1));
            s.name = "geodesic-sphere";
            return s;
        }
        case ModelKind::sphere: {
            if (!(rho < kPi * R0)) throw InvalidArgument("geodesic_sphere: radius must be below pi*R0");
            const double a = R0 * std::cos(rho / R0);  // height of the center axis
            const double b = R0 * std::sin(rho / R0);
            SmoothMap map = SmoothMap::from_program(n, n + 2, [a, b](const auto& u) {
                auto w = hyperspherical(u);
                for (auto& wi : w) wi = b * wi;
                w.push_back(typename decltype(w)::value_type(a));
                return w;
            });
            Hypersurface s{model, {hyperspherical_domain(n), map, 1}, 1};
            const Vec center = model.origin().coords;
            orient(s, [center, R0](const Vec& x) -> Vec { return -center + (x.dot(center) / (R0 * R0)) * x; });
            return {"geodesic-sphere", s, 1.0 / (R0 * std::tan(rho / R0))};
        }
        case ModelKind::hyperboloid: {
            const double a = R0 * std::cosh(rho / R0);
            const double b = R0 * std::sinh(rho / R0);
            SmoothMap map = SmoothMap::from_program(n, n + 2, [a, b](const auto& u) {
                auto w = hyperspherical(u);
                for (auto& wi : w) wi = b * wi;
                w.insert(w.begin(), typename decltype(w)::value_type(a));
                return w;
            });
            Hypersurface s{model, {hyperspherical_domain(n), map, 1}, 1};
            const Vec center = model.origin().coords;
            orient(s, [center, R0](const Vec& x) -> Vec {
                const Vec w = -center;
                return w + (lorentz_dot(w, x) / (R0 * R0)) * x;
            });
            return {"geodesic-sphere", s, 1.0 / (R0 * std::tanh(rho / R0))};
        }
        case ModelKind::warped_product: break;
    }
    throw InvalidArgument("geodesic_sphere: unsupported ambient");
}

NamedSurface latitude_sphere(int n, double R0, double t) {
    require_dim(n);
    if (!(R0 > 0.0) || !(std::abs(t) < R0)) throw InvalidArgument("latitude_sphere: need |t| < R0");
    const double Rt = std::sqrt(R0 * R0 - t * t);
    SmoothMap map = SmoothMap::from_program(n, n + 2, [Rt, t](const auto& u) {
        auto w = hyperspherical(u);
        for (auto& wi : w) wi = Rt * wi;
        w.push_back(typename decltype(w)::value_type(t));
        return w;
    });
    Hypersurface s{AmbientModel::sphere(n + 1, R0), {hyperspherical_domain(n), map, 1}, 1};
    orient(s, [t, Rt, n](const Vec& x) -> Vec {
        Vec ref(n + 2);
        ref.head(n + 1) = -t * x.head(n + 1);
        ref(n + 1) = Rt * Rt;
        return ref;
    });
    return {"latitude-sphere", s, -t / (R0 * Rt)};
}

}  // namespace curvint
