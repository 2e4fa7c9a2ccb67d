#pragma once

// Derivative oracle for maps R^d -> R^k. A SmoothMap carries one of three
// interchangeable backends: an analytic closed form, forward-mode AD of a
// generic program, or central differences of the plain double program.

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <string_view>
#include <vector>

#include "curvint/dual.hpp"
#include "curvint/errors.hpp"

namespace curvint {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

template <class S>
using Program = std::function<std::vector<S>(const std::vector<S>&)>;

enum class Backend { analytic, forward_ad, central_difference };

std::string_view to_string(Backend b);

class SmoothMap {
public:
    // Columns are partial derivatives: J(:, j) = d f / d x_j.
    using JacobianFn = std::function<Mat(const Vec&)>;
    // Returns d*d vectors, entry j*d+k is d^2 f / dx_j dx_k.
    using SecondFn = std::function<std::vector<Vec>(const Vec&)>;

    SmoothMap() = default;

    // `program` must be callable with std::vector<S> for S in
    // {double, Dual1, Dual2}; it is instantiated for each.
    template <class F>
    static SmoothMap from_program(int in_dim, int out_dim, F program) {
        SmoothMap m(in_dim, out_dim);
        m.f0_ = [program](const std::vector<double>& x) { return program(x); };
        m.f1_ = [program](const std::vector<Dual1>& x) { return program(x); };
        m.f2_ = [program](const std::vector<Dual2>& x) { return program(x); };
        m.backend_ = Backend::forward_ad;
        return m;
    }

    // Plain double program; only central differences are available.
    static SmoothMap from_function(int in_dim, int out_dim, Program<double> f);

    // Attach closed-form derivatives and switch to the analytic backend.
    SmoothMap with_analytic(JacobianFn jacobian, SecondFn second = {}) const;

    SmoothMap with_backend(Backend b) const;
    [[nodiscard]] bool supports(Backend b) const;
    [[nodiscard]] Backend backend() const { return backend_; }

    [[nodiscard]] int in_dim() const { return in_; }
    [[nodiscard]] int out_dim() const { return out_; }

    [[nodiscard]] Vec value(const Vec& x) const;
    [[nodiscard]] Vec directional(const Vec& x, const Vec& v) const;
    [[nodiscard]] Mat jacobian(const Vec& x) const;
    [[nodiscard]] std::vector<Vec> second_partials(const Vec& x) const;

    // Raw program evaluation, for composing generic programs.
    template <class S>
    [[nodiscard]] std::vector<S> eval(const std::vector<S>& x) const {
        if constexpr (std::is_same_v<S, double>) {
            return f0_(x);
        } else if constexpr (std::is_same_v<S, Dual1>) {
            if (!f1_) throw InvalidArgument("SmoothMap: no dual program for forward-mode AD");
            return f1_(x);
        } else {
            if (!f2_) throw InvalidArgument("SmoothMap: no second-order dual program");
            return f2_(x);
        }
    }

    // Precompose with the affine map s -> A s + b.
    [[nodiscard]] SmoothMap precompose_affine(const Mat& A, const Vec& b) const;

private:
    SmoothMap(int in_dim, int out_dim) : in_(in_dim), out_(out_dim) {}

    int in_ = 0;
    int out_ = 0;
    Backend backend_ = Backend::central_difference;
    Program<double> f0_;
    Program<Dual1> f1_;
    Program<Dual2> f2_;
    JacobianFn jac_;
    SecondFn second_;
};

// Central-difference step h = cbrt(eps) * (1 + |x|).
double first_difference_step(const Vec& x);
// Step for second differences, eps^(1/4) * (1 + |x|).
double second_difference_step(const Vec& x);

}  // namespace curvint
