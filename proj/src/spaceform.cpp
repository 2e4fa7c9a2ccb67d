#include "curvint/spaceform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace curvint {

namespace {

template <class S>
S flat_dot(const std::vector<S>& x, const Vec& b) {
    S acc(0.0);
    for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * b(static_cast<Eigen::Index>(i));
    return acc;
}

template <class S>
S flat_dot(const std::vector<S>& x, const std::vector<S>& y) {
    S acc(0.0);
    for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
    return acc;
}

// Position field on an embedded model: the tangent projection of -base,
// rescaled to length s_c(r).
template <class S>
std::vector<S> embedded_position(const std::vector<S>& x, const Vec& base, bool lorentz, double R0) {
    using std::atan2, std::asinh, std::sqrt;
    const std::size_t N = x.size();
    S pair = flat_dot(x, base);
    if (lorentz) pair = pair - 2.0 * x[0] * base(0);
    const double R2 = R0 * R0;
    const S k = lorentz ? -pair / R2 : pair / R2;
    std::vector<S> w(N);
    for (std::size_t i = 0; i < N; ++i) w[i] = k * x[i] - base(static_cast<Eigen::Index>(i));
    S ww = flat_dot(w, w);
    if (lorentz) ww = ww - 2.0 * w[0] * w[0];
    const double tiny = 1e-12 * R0;
    if (value_of(ww) <= tiny * tiny) {
        if (value_of(k) > 0.0) return w;  // at the base point P vanishes
        throw DegenerateGeometry("position field: point is antipodal to the base point");
    }
    const S wn = sqrt(ww);
    S s;
    if (lorentz) {
        const S theta = asinh(wn / R0);
        s = R0 * warp_s(-1.0, theta);
    } else {
        const S theta = atan2(wn / R0, k);
        s = R0 * warp_s(1.0, theta);
    }
    const S scale = s / wn;
    for (auto& wi : w) wi = wi * scale;
    return w;
}

double relative_gap(const Vec& a, const Vec& b) { return (a - b).norm() / (1.0 + a.norm()); }

Vec base_sphere_projection(const Vec& y, const Vec& w) { return w - y.dot(w) * y; }

}  // namespace

// ---------------------------------------------------------------------------

Warp Warp::space_form(double c) {
    Warp w;
    w.profile = SmoothMap::from_program(1, 1, [c](const auto& r) {
        using S = std::decay_t<decltype(r[0])>;
        return std::vector<S>{warp_s(c, r[0])};
    });
    w.r_min = 0.0;
    w.r_max = c > 0.0 ? std::numbers::pi / std::sqrt(c) : std::numeric_limits<double>::infinity();
    w.curvature = c;
    return w;
}

Warp Warp::polynomial(std::vector<double> coeffs, double r_min, double r_max) {
    if (coeffs.empty()) throw InvalidArgument("Warp::polynomial: no coefficients");
    Warp w;
    w.profile = SmoothMap::from_program(1, 1, [coeffs](const auto& r) {
        using S = std::decay_t<decltype(r[0])>;
        S acc(0.0);
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * r[0] + *it;
        return std::vector<S>{acc};
    });
    w.r_min = r_min;
    w.r_max = r_max;
    return w;
}

double Warp::psi(double r) const { return profile.value(Vec::Constant(1, r))(0); }

double Warp::dpsi(double r) const { return profile.directional(Vec::Constant(1, r), Vec::Ones(1))(0); }

// ---------------------------------------------------------------------------

AmbientModel AmbientModel::euclidean(int dim) {
    if (dim < 2) throw InvalidArgument("euclidean: dimension must be >= 2");
    return {ModelKind::euclidean, dim, 0.0};
}

AmbientModel AmbientModel::sphere(int dim, double radius) {
    if (dim < 2) throw InvalidArgument("sphere: dimension must be >= 2");
    if (!(radius > 0.0)) throw InvalidArgument("sphere: radius must be positive");
    return {ModelKind::sphere, dim, radius};
}

AmbientModel AmbientModel::hyperboloid(int dim, double radius) {
    if (dim < 2) throw InvalidArgument("hyperboloid: dimension must be >= 2");
    if (!(radius > 0.0)) throw InvalidArgument("hyperboloid: radius must be positive");
    return {ModelKind::hyperboloid, dim, radius};
}

AmbientModel AmbientModel::warped(int dim, Warp warp) {
    if (dim < 2) throw InvalidArgument("warped: dimension must be >= 2");
    if (!(warp.r_min < warp.r_max)) throw InvalidArgument("warped: empty radial interval");
    AmbientModel m{ModelKind::warped_product, dim, 0.0};
    m.warp_ = std::move(warp);
    return m;
}

int AmbientModel::coord_dim() const { return kind_ == ModelKind::euclidean ? dim_ : dim_ + 1; }

std::optional<double> AmbientModel::curvature() const {
    switch (kind_) {
        case ModelKind::euclidean: return 0.0;
        case ModelKind::sphere: return 1.0 / (radius_ * radius_);
        case ModelKind::hyperboloid: return -1.0 / (radius_ * radius_);
        case ModelKind::warped_product: return warp_->curvature;
    }
    return std::nullopt;
}

const Warp& AmbientModel::warp() const {
    if (!warp_) throw InvalidArgument("model has no warp function");
    return *warp_;
}

double AmbientModel::membership_defect(const Vec& x) const {
    if (x.size() != coord_dim()) return std::numeric_limits<double>::infinity();
    if (!x.allFinite()) return std::numeric_limits<double>::infinity();
    const double R2 = radius_ * radius_;
    switch (kind_) {
        case ModelKind::euclidean: return 0.0;
        case ModelKind::sphere: return std::abs(x.squaredNorm() - R2) / R2;
        case ModelKind::hyperboloid: {
            if (!(x(0) > 0.0)) return std::numeric_limits<double>::infinity();
            return std::abs(lorentz_dot(x, x) + R2) / std::max(R2, x.squaredNorm());
        }
        case ModelKind::warped_product: {
            const double r = x(0);
            if (!(r > warp_->r_min && r < warp_->r_max)) return std::numeric_limits<double>::infinity();
            return std::abs(x.tail(dim_).squaredNorm() - 1.0);
        }
    }
    return 0.0;
}

void AmbientModel::require_member(const AmbientPoint& p, double tol) const {
    const double d = membership_defect(p.coords);
    if (!(d <= tol)) {
        throw InvalidArgument("point violates model membership (defect " + std::to_string(d) + ")");
    }
}

double AmbientModel::tangency_defect(const TangentVector& v) const {
    const Vec& x = v.base.coords;
    const double scale = std::max(1.0, v.vec.norm()) * std::max(1.0, x.norm());
    switch (kind_) {
        case ModelKind::euclidean: return 0.0;
        case ModelKind::sphere: return std::abs(x.dot(v.vec)) / scale;
        case ModelKind::hyperboloid: return std::abs(lorentz_dot(x, v.vec)) / scale;
        case ModelKind::warped_product: return std::abs(x.tail(dim_).dot(v.vec.tail(dim_))) / std::max(1.0, v.vec.norm());
    }
    return 0.0;
}

double AmbientModel::pairing(const Vec& base, const Vec& u, const Vec& v) const {
    switch (kind_) {
        case ModelKind::euclidean:
        case ModelKind::sphere: return u.dot(v);
        case ModelKind::hyperboloid: return lorentz_dot(u, v);
        case ModelKind::warped_product: {
            const double psi = warp_->psi(base(0));
            return u(0) * v(0) + psi * psi * u.tail(dim_).dot(v.tail(dim_));
        }
    }
    return 0.0;
}

AmbientPoint AmbientModel::origin() const {
    Vec x = Vec::Zero(coord_dim());
    switch (kind_) {
        case ModelKind::euclidean: break;
        case ModelKind::sphere: x(coord_dim() - 1) = radius_; break;
        case ModelKind::hyperboloid: x(0) = radius_; break;
        case ModelKind::warped_product:
            x(0) = warp_->r_min;
            x(1) = 1.0;
            break;
    }
    return {x};
}

double lorentz_dot(const Vec& u, const Vec& v) { return u.dot(v) - 2.0 * u(0) * v(0); }

// ---------------------------------------------------------------------------

double inner(const AmbientModel& model, const TangentVector& u, const TangentVector& v) {
    if (u.vec.size() != model.coord_dim() || v.vec.size() != model.coord_dim()) {
        throw InvalidArgument("inner: vector dimension does not match the model");
    }
    if (relative_gap(u.base.coords, v.base.coords) > 1e-12) {
        throw InvalidArgument("inner: tangent vectors have different base points");
    }
    model.require_member(u.base);
    return model.pairing(u.base.coords, u.vec, v.vec);
}

double norm(const AmbientModel& model, const TangentVector& v) { return std::sqrt(std::max(0.0, inner(model, v, v))); }

TangentVector project_tangent(const AmbientModel& model, const AmbientPoint& p, const Vec& w) {
    const Vec& x = p.coords;
    if (w.size() != x.size()) throw InvalidArgument("project_tangent: dimension mismatch");
    const double R2 = model.radius() * model.radius();
    switch (model.kind()) {
        case ModelKind::euclidean: return {p, w};
        case ModelKind::sphere: return {p, w - (w.dot(x) / R2) * x};
        case ModelKind::hyperboloid: return {p, w + (lorentz_dot(w, x) / R2) * x};
        case ModelKind::warped_product: {
            Vec out = w;
            out.tail(model.dim()) = base_sphere_projection(x.tail(model.dim()), w.tail(model.dim()));
            return {p, out};
        }
    }
    return {p, w};
}

Vec connection(const AmbientModel& model, const AmbientPoint& p, const Vec& X, const Vec& dX, const Vec& Y) {
    switch (model.kind()) {
        case ModelKind::euclidean: return dX;
        case ModelKind::sphere:
        case ModelKind::hyperboloid: return project_tangent(model, p, dX).vec;
        case ModelKind::warped_product: {
            const int m = model.dim();
            const double r = p.coords(0);
            const Vec y = p.coords.tail(m);
            const double psi = model.warp().psi(r);
            const double f = model.warp().dpsi(r) / psi;
            const Vec Xy = X.tail(m);
            const Vec Yy = Y.tail(m);
            Vec out(1 + m);
            out(0) = dX(0) - f * psi * psi * Xy.dot(Yy);
            out.tail(m) = base_sphere_projection(y, dX.tail(m)) + f * (X(0) * Yy + Y(0) * Xy);
            return out;
        }
    }
    return dX;
}

TangentVector covariant_derivative(const AmbientModel& model, const VectorField& field, const AmbientPoint& p,
                                   const TangentVector& Y) {
    model.require_member(p);
    if (relative_gap(p.coords, Y.base.coords) > 1e-12) {
        throw InvalidArgument("covariant_derivative: direction is based at a different point");
    }
    if (model.kind() == ModelKind::warped_product) {
        const double r = p.coords(0);
        if (!(model.warp().psi(r) > 0.0)) throw DegenerateGeometry("covariant_derivative: warp vanishes at point");
    }
    const Vec X = field.coords().value(p.coords);
    const Vec dX = field.derivative(p, Y.vec);
    if (!dX.allFinite()) throw DegenerateGeometry("covariant_derivative: derivative oracle returned non-finite values");
    return {p, connection(model, p, X, dX, Y.vec)};
}

double geodesic_distance(const AmbientModel& model, const AmbientPoint& base, const AmbientPoint& p) {
    model.require_member(base);
    model.require_member(p);
    const double R0 = model.radius();
    switch (model.kind()) {
        case ModelKind::euclidean: return (p.coords - base.coords).norm();
        case ModelKind::sphere: {
            // Chord form of R0 * acos(<p,b>/R0^2); equals pi*R0 at antipodes.
            const double chord = (p.coords - base.coords).norm();
            return 2.0 * R0 * std::asin(std::min(1.0, chord / (2.0 * R0)));
        }
        case ModelKind::hyperboloid: {
            const Vec d = p.coords - base.coords;
            const double q = std::max(0.0, lorentz_dot(d, d));
            return 2.0 * R0 * std::asinh(std::sqrt(q) / (2.0 * R0));
        }
        case ModelKind::warped_product: {
            const int m = model.dim();
            const bool same_ray = (p.coords.tail(m) - base.coords.tail(m)).norm() <= 1e-12;
            if (!same_ray) {
                throw InvalidArgument("geodesic_distance: warped products support only radial pairs");
            }
            return std::abs(p.coords(0) - base.coords(0));
        }
    }
    return 0.0;
}

WarpValues warp_functions(double c, double r) {
    if (!(r >= 0.0)) throw InvalidArgument("warp_functions: r must be non-negative");
    if (c > 0.0 && !(r < std::numbers::pi / std::sqrt(c))) {
        throw InvalidArgument("warp_functions: r must be below pi/sqrt(c)");
    }
    return {warp_s(c, r), warp_lambda(c, r)};
}

// ---------------------------------------------------------------------------

PositionField position_field(const AmbientModel& model, const AmbientPoint& base) {
    const int N = model.coord_dim();
    switch (model.kind()) {
        case ModelKind::euclidean: {
            if (base.coords.size() != N) throw InvalidArgument("position_field: base dimension mismatch");
            const Vec b = base.coords;
            SmoothMap map = SmoothMap::from_program(N, N, [b](const auto& x) {
                using S = std::decay_t<decltype(x[0])>;
                std::vector<S> out(x.size());
                for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - b(static_cast<Eigen::Index>(i));
                return out;
            });
            return {VectorField(std::move(map)), [](const AmbientPoint&) { return 1.0; }};
        }
        case ModelKind::sphere:
        case ModelKind::hyperboloid: {
            model.require_member(base);
            const Vec b = base.coords;
            const bool lorentz = model.kind() == ModelKind::hyperboloid;
            const double R0 = model.radius();
            SmoothMap map = SmoothMap::from_program(N, N, [b, lorentz, R0](const auto& x) {
                return embedded_position(x, b, lorentz, R0);
            });
            const double c = *model.curvature();
            auto lambda = [model, base, c](const AmbientPoint& p) {
                return warp_lambda(c, geodesic_distance(model, base, p));
            };
            return {VectorField(std::move(map)), lambda};
        }
        case ModelKind::warped_product: {
            const Warp& warp = model.warp();
            SmoothMap map = SmoothMap::from_program(N, N, [profile = warp.profile](const auto& x) {
                using S = std::decay_t<decltype(x[0])>;
                std::vector<S> out(x.size(), S(0.0));
                out[0] = profile.eval(std::vector<S>{x[0]})[0];
                return out;
            });
            auto lambda = [warp](const AmbientPoint& p) { return warp.dpsi(p.coords(0)); };
            return {VectorField(std::move(map)), lambda};
        }
    }
    throw InvalidArgument("position_field: unsupported model");
}

double skew_defect(const AmbientModel& model, const Mat& omega) {
    if (model.kind() == ModelKind::hyperboloid) {
        Mat eta = Mat::Identity(omega.rows(), omega.cols());
        eta(0, 0) = -1.0;
        return (omega.transpose() * eta + eta * omega).cwiseAbs().maxCoeff();
    }
    return (omega + omega.transpose()).cwiseAbs().maxCoeff();
}

VectorField killing_field(const AmbientModel& model, const KillingGenerator& generator) {
    if (model.kind() == ModelKind::warped_product) {
        throw InvalidArgument("killing_field: warped products are not supported");
    }
    const int N = model.coord_dim();
    if (generator.omega.rows() != N || generator.omega.cols() != N) {
        throw InvalidArgument("killing_field: generator must be " + std::to_string(N) + "x" + std::to_string(N));
    }
    Vec t = Vec::Zero(N);
    if (generator.translation.size() != 0) {
        if (model.kind() != ModelKind::euclidean) {
            throw InvalidArgument("killing_field: translations exist only in Euclidean space");
        }
        if (generator.translation.size() != N) throw InvalidArgument("killing_field: translation dimension mismatch");
        t = generator.translation;
    }
    const double defect = skew_defect(model, generator.omega);
    if (defect > 1e-12 * (1.0 + generator.omega.cwiseAbs().maxCoeff())) {
        throw DegenerateGeometry("killing_field: generator is not (Lorentz-)skew, defect " + std::to_string(defect));
    }
    const Mat omega = generator.omega;
    SmoothMap map = SmoothMap::from_program(N, N, [omega, t](const auto& x) {
        using S = std::decay_t<decltype(x[0])>;
        std::vector<S> out(x.size());
        for (Eigen::Index i = 0; i < omega.rows(); ++i) {
            S acc(t(i));
            for (Eigen::Index j = 0; j < omega.cols(); ++j) acc += omega(i, j) * x[static_cast<std::size_t>(j)];
            out[static_cast<std::size_t>(i)] = acc;
        }
        return out;
    });
    return VectorField(map.with_analytic([omega](const Vec&) { return omega; }));
}

double killing_defect(const AmbientModel& model, const VectorField& X, std::span<const KillingSample> samples) {
    double worst = 0.0;
    for (const auto& s : samples) {
        const TangentVector dY = covariant_derivative(model, X, s.p, s.Y);
        const TangentVector dZ = covariant_derivative(model, X, s.p, s.Z);
        const double sym = inner(model, dY, s.Z) + inner(model, dZ, s.Y);
        const double scale = norm(model, s.Y) * norm(model, s.Z);
        if (scale == 0.0) continue;
        worst = std::max(worst, std::abs(sym) / scale);
    }
    return worst;
}

// ---------------------------------------------------------------------------

AmbientPoint random_point(const AmbientModel& model, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    const int N = model.coord_dim();
    Vec x(N);
    for (int i = 0; i < N; ++i) x(i) = gauss(rng);
    const double R0 = model.radius();
    switch (model.kind()) {
        case ModelKind::euclidean: return {1.5 * x};
        case ModelKind::sphere: return {R0 * x / x.norm()};
        case ModelKind::hyperboloid: {
            x.tail(N - 1) *= 0.7 * R0;
            x(0) = std::sqrt(R0 * R0 + x.tail(N - 1).squaredNorm());
            return {x};
        }
        case ModelKind::warped_product: {
            const Warp& w = model.warp();
            const double hi = std::min(w.r_max, w.r_min + 3.0);
            const double margin = 0.05 * (hi - w.r_min);
            std::uniform_real_distribution<double> uni(w.r_min + margin, hi - margin);
            Vec p(N);
            p(0) = uni(rng);
            p.tail(N - 1) = x.tail(N - 1) / x.tail(N - 1).norm();
            return {p};
        }
    }
    return {x};
}

TangentVector random_tangent(const AmbientModel& model, const AmbientPoint& p, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    Vec w(model.coord_dim());
    for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = gauss(rng);
    return project_tangent(model, p, w);
}

}  // namespace curvint
