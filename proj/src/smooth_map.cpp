#include "curvint/smooth_map.hpp"

#include <cmath>
#include <limits>

namespace curvint {

std::string_view to_string(Backend b) {
    switch (b) {
        case Backend::analytic: return "analytic";
        case Backend::forward_ad: return "forward_ad";
        case Backend::central_difference: return "central_difference";
    }
    return "unknown";
}

double first_difference_step(const Vec& x) {
    return std::cbrt(std::numeric_limits<double>::epsilon()) * (1.0 + x.norm());
}

double second_difference_step(const Vec& x) {
    return std::pow(std::numeric_limits<double>::epsilon(), 0.25) * (1.0 + x.norm());
}

namespace {

std::vector<double> to_std(const Vec& x) { return {x.data(), x.data() + x.size()}; }

Vec to_eigen(const std::vector<double>& x) {
    return Eigen::Map<const Vec>(x.data(), static_cast<Eigen::Index>(x.size()));
}

template <class S>
std::vector<S> affine_image(const Mat& A, const Vec& b, const std::vector<S>& s) {
    std::vector<S> u(static_cast<std::size_t>(A.rows()));
    for (Eigen::Index r = 0; r < A.rows(); ++r) {
        S acc(b(r));
        for (Eigen::Index c = 0; c < A.cols(); ++c) acc += A(r, c) * s[static_cast<std::size_t>(c)];
        u[static_cast<std::size_t>(r)] = acc;
    }
    return u;
}

}  // namespace

SmoothMap SmoothMap::from_function(int in_dim, int out_dim, Program<double> f) {
    SmoothMap m(in_dim, out_dim);
    m.f0_ = std::move(f);
    m.backend_ = Backend::central_difference;
    return m;
}

SmoothMap SmoothMap::with_analytic(JacobianFn jacobian, SecondFn second) const {
    SmoothMap m = *this;
    m.jac_ = std::move(jacobian);
    m.second_ = std::move(second);
    m.backend_ = Backend::analytic;
    return m;
}

bool SmoothMap::supports(Backend b) const {
    switch (b) {
        case Backend::analytic: return static_cast<bool>(jac_);
        case Backend::forward_ad: return f1_ && f2_;
        case Backend::central_difference: return static_cast<bool>(f0_);
    }
    return false;
}

SmoothMap SmoothMap::with_backend(Backend b) const {
    if (!supports(b)) {
        throw InvalidArgument("SmoothMap: backend '" + std::string(to_string(b)) + "' not available");
    }
    SmoothMap m = *this;
    m.backend_ = b;
    return m;
}

Vec SmoothMap::value(const Vec& x) const {
    if (x.size() != in_) throw InvalidArgument("SmoothMap: input dimension mismatch");
    return to_eigen(f0_(to_std(x)));
}

Vec SmoothMap::directional(const Vec& x, const Vec& v) const {
    if (x.size() != in_ || v.size() != in_) throw InvalidArgument("SmoothMap: input dimension mismatch");
    switch (backend_) {
        case Backend::analytic:
            return jac_(x) * v;
        case Backend::forward_ad: {
            std::vector<Dual1> xs(static_cast<std::size_t>(in_));
            for (int i = 0; i < in_; ++i) xs[static_cast<std::size_t>(i)] = Dual1(x(i), v(i));
            const std::vector<Dual1> out = f1_(xs);
            Vec d(out_);
            for (int i = 0; i < out_; ++i) d(i) = out[static_cast<std::size_t>(i)].eps;
            return d;
        }
        case Backend::central_difference: {
            const double len = v.norm();
            if (len == 0.0) return Vec::Zero(out_);
            const double h = first_difference_step(x);
            const Vec u = v / len;
            return (value(x + h * u) - value(x - h * u)) * (len / (2.0 * h));
        }
    }
    return {};
}

Mat SmoothMap::jacobian(const Vec& x) const {
    if (backend_ == Backend::analytic) return jac_(x);
    Mat J(out_, in_);
    for (int j = 0; j < in_; ++j) J.col(j) = directional(x, Vec::Unit(in_, j));
    return J;
}

std::vector<Vec> SmoothMap::second_partials(const Vec& x) const {
    if (x.size() != in_) throw InvalidArgument("SmoothMap: input dimension mismatch");
    const auto d = static_cast<std::size_t>(in_);
    std::vector<Vec> h2(d * d);
    switch (backend_) {
        case Backend::analytic: {
            if (second_) return second_(x);
            // Closed-form Jacobian only: difference it once.
            const double h = first_difference_step(x);
            for (int j = 0; j < in_; ++j) {
                const Vec e = Vec::Unit(in_, j) * h;
                const Mat dj = (jac_(x + e) - jac_(x - e)) / (2.0 * h);
                for (int k = 0; k < in_; ++k) h2[static_cast<std::size_t>(j) * d + static_cast<std::size_t>(k)] = dj.col(k);
            }
            return h2;
        }
        case Backend::forward_ad: {
            for (int j = 0; j < in_; ++j) {
                for (int k = j; k < in_; ++k) {
                    std::vector<Dual2> xs(d);
                    for (int i = 0; i < in_; ++i) {
                        xs[static_cast<std::size_t>(i)] =
                            Dual2(Dual1(x(i), i == k ? 1.0 : 0.0), Dual1(i == j ? 1.0 : 0.0, 0.0));
                    }
                    const std::vector<Dual2> out = f2_(xs);
                    Vec v(out_);
                    for (int i = 0; i < out_; ++i) v(i) = out[static_cast<std::size_t>(i)].eps.eps;
                    h2[static_cast<std::size_t>(j) * d + static_cast<std::size_t>(k)] = v;
                    h2[static_cast<std::size_t>(k) * d + static_cast<std::size_t>(j)] = v;
                }
            }
            return h2;
        }
        case Backend::central_difference: {
            const double h = second_difference_step(x);
            const Vec f = value(x);
            for (int j = 0; j < in_; ++j) {
                const Vec ej = Vec::Unit(in_, j) * h;
                for (int k = j; k < in_; ++k) {
                    Vec v;
                    if (j == k) {
                        v = (value(x + ej) - 2.0 * f + value(x - ej)) / (h * h);
                    } else {
                        const Vec ek = Vec::Unit(in_, k) * h;
                        v = (value(x + ej + ek) - value(x + ej - ek) - value(x - ej + ek) + value(x - ej - ek)) /
                            (4.0 * h * h);
                    }
                    h2[static_cast<std::size_t>(j) * d + static_cast<std::size_t>(k)] = v;
                    h2[static_cast<std::size_t>(k) * d + static_cast<std::size_t>(j)] = v;
                }
            }
            return h2;
        }
    }
    return h2;
}

SmoothMap SmoothMap::precompose_affine(const Mat& A, const Vec& b) const {
    if (A.rows() != in_ || b.size() != in_) throw InvalidArgument("precompose_affine: shape mismatch");
    SmoothMap m(static_cast<int>(A.cols()), out_);
    m.backend_ = backend_;
    if (f0_) {
        m.f0_ = [f = f0_, A, b](const std::vector<double>& s) { return f(affine_image(A, b, s)); };
    }
    if (f1_) {
        m.f1_ = [f = f1_, A, b](const std::vector<Dual1>& s) { return f(affine_image(A, b, s)); };
    }
    if (f2_) {
        m.f2_ = [f = f2_, A, b](const std::vector<Dual2>& s) { return f(affine_image(A, b, s)); };
    }
    if (jac_) {
        m.jac_ = [jac = jac_, A, b](const Vec& s) -> Mat { return jac(A * s + b) * A; };
    }
    if (second_) {
        m.second_ = [sec = second_, A, b, in = in_](const Vec& s) {
            const std::vector<Vec> inner = sec(A * s + b);
            const auto d = static_cast<std::size_t>(A.cols());
            const auto di = static_cast<std::size_t>(in);
            std::vector<Vec> out(d * d, Vec::Zero(inner.front().size()));
            for (std::size_t a = 0; a < d; ++a)
                for (std::size_t c = 0; c < d; ++c)
                    for (std::size_t j = 0; j < di; ++j)
                        for (std::size_t k = 0; k < di; ++k)
                            out[a * d + c] += A(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(a)) *
                                              A(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(c)) *
                                              inner[j * di + k];
            return out;
        };
    }
    return m;
}

}  // namespace curvint
