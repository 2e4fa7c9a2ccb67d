#pragma once

// Forward-mode dual numbers. Nesting (Dual<Dual<double>>) gives second
// derivatives: seed the outer epsilon along one direction and the inner
// epsilon along another and read x.eps.eps.

#include <cmath>
#include <type_traits>

namespace curvint {

template <class T>
struct Dual {
    T val{};
    T eps{};

    constexpr Dual() = default;
    constexpr Dual(double v) : val(v), eps(0.0) {}  // NOLINT(google-explicit-constructor)
    constexpr Dual(const T& v, const T& e) : val(v), eps(e) {}

    template <class U = T, std::enable_if_t<!std::is_same_v<U, double>, int> = 0>
    constexpr Dual(const T& v) : val(v), eps(0.0) {}  // NOLINT(google-explicit-constructor)

    Dual& operator+=(const Dual& o) { val += o.val; eps += o.eps; return *this; }
    Dual& operator-=(const Dual& o) { val -= o.val; eps -= o.eps; return *this; }
    Dual& operator*=(const Dual& o) { *this = *this * o; return *this; }
    Dual& operator/=(const Dual& o) { *this = *this / o; return *this; }
};

using Dual1 = Dual<double>;
using Dual2 = Dual<Dual<double>>;

template <class T> struct is_dual : std::false_type {};
template <class T> struct is_dual<Dual<T>> : std::true_type {};

inline double value_of(double x) { return x; }
template <class T> double value_of(const Dual<T>& x) { return value_of(x.val); }

template <class T> constexpr Dual<T> operator-(const Dual<T>& a) { return {-a.val, -a.eps}; }
template <class T> constexpr Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) { return {a.val + b.val, a.eps + b.eps}; }
template <class T> constexpr Dual<T> operator-(const Dual<T>& a, const Dual<T>& b) { return {a.val - b.val, a.eps - b.eps}; }
template <class T> constexpr Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) { return {a.val * b.val, a.val * b.eps + a.eps * b.val}; }
template <class T> constexpr Dual<T> operator/(const Dual<T>& a, const Dual<T>& b) {
    T inv = T(1.0) / b.val;
    return {a.val * inv, (a.eps * b.val - a.val * b.eps) * inv * inv};
}

template <class T> constexpr Dual<T> operator+(const Dual<T>& a, double b) { return {a.val + b, a.eps}; }
template <class T> constexpr Dual<T> operator+(double a, const Dual<T>& b) { return {a + b.val, b.eps}; }
template <class T> constexpr Dual<T> operator-(const Dual<T>& a, double b) { return {a.val - b, a.eps}; }
template <class T> constexpr Dual<T> operator-(double a, const Dual<T>& b) { return {a - b.val, -b.eps}; }
template <class T> constexpr Dual<T> operator*(const Dual<T>& a, double b) { return {a.val * b, a.eps * b}; }
template <class T> constexpr Dual<T> operator*(double a, const Dual<T>& b) { return {a * b.val, a * b.eps}; }
template <class T> constexpr Dual<T> operator/(const Dual<T>& a, double b) { return {a.val / b, a.eps / b}; }
template <class T> constexpr Dual<T> operator/(double a, const Dual<T>& b) { return Dual<T>(a) / b; }

template <class T> bool operator<(const Dual<T>& a, const Dual<T>& b) { return value_of(a) < value_of(b); }
template <class T> bool operator>(const Dual<T>& a, const Dual<T>& b) { return value_of(a) > value_of(b); }
template <class T> bool operator<(const Dual<T>& a, double b) { return value_of(a) < b; }
template <class T> bool operator>(const Dual<T>& a, double b) { return value_of(a) > b; }

template <class T> Dual<T> sin(const Dual<T>& x) { using std::sin, std::cos; return {sin(x.val), cos(x.val) * x.eps}; }
template <class T> Dual<T> cos(const Dual<T>& x) { using std::sin, std::cos; return {cos(x.val), -sin(x.val) * x.eps}; }
template <class T> Dual<T> sinh(const Dual<T>& x) { using std::sinh, std::cosh; return {sinh(x.val), cosh(x.val) * x.eps}; }
template <class T> Dual<T> cosh(const Dual<T>& x) { using std::sinh, std::cosh; return {cosh(x.val), sinh(x.val) * x.eps}; }
template <class T> Dual<T> exp(const Dual<T>& x) { using std::exp; T e = exp(x.val); return {e, e * x.eps}; }
template <class T> Dual<T> log(const Dual<T>& x) { using std::log; return {log(x.val), x.eps / x.val}; }

template <class T> Dual<T> sqrt(const Dual<T>& x) {
    using std::sqrt;
    T s = sqrt(x.val);
    return {s, x.eps / (2.0 * s)};
}

// acos'(x) = -1/sqrt(1-x^2); undefined at |x| = 1.
template <class T> Dual<T> acos(const Dual<T>& x) {
    using std::acos, std::sqrt;
    return {acos(x.val), -x.eps / sqrt(1.0 - x.val * x.val)};
}

template <class T> Dual<T> acosh(const Dual<T>& x) {
    using std::acosh, std::sqrt;
    return {acosh(x.val), x.eps / sqrt(x.val * x.val - 1.0)};
}

template <class T> Dual<T> asinh(const Dual<T>& x) {
    using std::asinh, std::sqrt;
    return {asinh(x.val), x.eps / sqrt(1.0 + x.val * x.val)};
}

template <class T> Dual<T> atan2(const Dual<T>& y, const Dual<T>& x) {
    using std::atan2;
    T r2 = x.val * x.val + y.val * y.val;
    return {atan2(y.val, x.val), (x.val * y.eps - y.val * x.eps) / r2};
}

template <class T> Dual<T> abs(const Dual<T>& x) { return value_of(x) < 0.0 ? -x : x; }

}  // namespace curvint
