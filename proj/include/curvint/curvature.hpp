#pragma once

// Elementary symmetric functions of the eigenvalues of a square matrix via
// power sums and Newton's identities, and the higher mean curvatures
// H_i = e_i / binom(n, i). Works for any matrix type with rows() and
// operator()(i, j), including exact rational matrices.

#include <cstdint>
#include <type_traits>
#include <vector>

#include "curvint/errors.hpp"

namespace curvint {

template <class Matrix>
using scalar_of = std::decay_t<decltype(std::declval<const Matrix&>()(0, 0))>;

// Exact binomial coefficient; binom(n, k) = 0 outside 0 <= k <= n.
constexpr std::int64_t binomial(int n, int k) {
    if (k < 0 || n < 0 || k > n) return 0;
    std::int64_t b = 1;
    for (int j = 1; j <= k; ++j) b = b * (n - k + j) / j;
    return b;
}

// p_k = trace(W^k), k = 1..kmax.
template <class Matrix>
std::vector<scalar_of<Matrix>> power_sums(const Matrix& W, int kmax) {
    using T = scalar_of<Matrix>;
    const auto n = static_cast<std::size_t>(W.rows());
    if (kmax < 1 || kmax > static_cast<int>(n)) throw InvalidArgument("power_sums: need 1 <= kmax <= n");
    std::vector<T> w(n * n), pw(n * n), next(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) w[i * n + j] = W(static_cast<int>(i), static_cast<int>(j));
    pw = w;
    std::vector<T> p;
    p.reserve(static_cast<std::size_t>(kmax));
    for (int k = 1; k <= kmax; ++k) {
        T tr(0);
        for (std::size_t i = 0; i < n; ++i) tr += pw[i * n + i];
        p.push_back(tr);
        if (k == kmax) break;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                T acc(0);
                for (std::size_t l = 0; l < n; ++l) acc += pw[i * n + l] * w[l * n + j];
                next[i * n + j] = acc;
            }
        }
        std::swap(pw, next);
    }
    return p;
}

// (e_0, ..., e_n) with k e_k = sum_{j=1}^{k} (-1)^{j-1} e_{k-j} p_j.
template <class Matrix>
std::vector<scalar_of<Matrix>> elementary_symmetric(const Matrix& W) {
    using T = scalar_of<Matrix>;
    if (W.rows() != W.cols()) throw InvalidArgument("elementary_symmetric: matrix must be square");
    const int n = static_cast<int>(W.rows());
    std::vector<T> e{T(1)};
    if (n == 0) return e;
    const std::vector<T> p = power_sums(W, n);
    for (int k = 1; k <= n; ++k) {
        T acc(0);
        for (int j = 1; j <= k; ++j) {
            T term = e[static_cast<std::size_t>(k - j)] * p[static_cast<std::size_t>(j - 1)];
            if (j % 2 == 1) {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc /= T(k);
        e.push_back(acc);
    }
    return e;
}

template <class T>
struct MeanCurvaturesOf {
    int n = 0;
    std::vector<T> H;  // H_0 .. H_n
    std::vector<T> e;  // e_0 .. e_n

    // H_i with H_{-1} = H_{n+1} = 0.
    [[nodiscard]] T at(int i) const { return i < 0 || i > n ? T(0) : H[static_cast<std::size_t>(i)]; }
    // binom(n, i) H_i = e_i, zero outside 0..n.
    [[nodiscard]] T weighted(int i) const { return i < 0 || i > n ? T(0) : e[static_cast<std::size_t>(i)]; }
};

using MeanCurvatures = MeanCurvaturesOf<double>;

template <class Matrix>
MeanCurvaturesOf<scalar_of<Matrix>> mean_curvatures(const Matrix& W) {
    using T = scalar_of<Matrix>;
    MeanCurvaturesOf<T> out;
    out.n = static_cast<int>(W.rows());
    out.e = elementary_symmetric(W);
    out.H.reserve(out.e.size());
    for (int i = 0; i <= out.n; ++i) {
        T h = out.e[static_cast<std::size_t>(i)];
        h /= T(static_cast<long>(binomial(out.n, i)));
        out.H.push_back(h);
    }
    return out;
}

}  // namespace curvint
