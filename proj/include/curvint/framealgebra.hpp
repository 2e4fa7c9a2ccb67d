#pragma once

// Exact exterior algebra on the 2n-dimensional model space with coframe
// e^1..e^n (horizontal) and e^{n+1}..e^{2n} (vertical): the forms alpha_i,
// the mirror map B, the alternating composition and pullback by a Weingarten
// substitution. Coefficients are GMP rationals.

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace curvint {

using Rational = mpq_class;

inline constexpr int kMaxAlgebraN = 6;

class RationalMatrix {
public:
    RationalMatrix() = default;
    RationalMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows * cols)) {}

    static RationalMatrix identity(int n);
    // Entries p/q with |p| <= max_num and 1 <= q <= max_den.
    static RationalMatrix random(int rows, int cols, std::mt19937_64& rng, int max_num = 9, int max_den = 5);

    [[nodiscard]] int rows() const { return rows_; }
    [[nodiscard]] int cols() const { return cols_; }
    Rational& operator()(int i, int j) { return data_[static_cast<std::size_t>(i * cols_ + j)]; }
    const Rational& operator()(int i, int j) const { return data_[static_cast<std::size_t>(i * cols_ + j)]; }

    [[nodiscard]] bool is_zero() const;
    [[nodiscard]] int rank() const;

    friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);
    friend bool operator==(const RationalMatrix& a, const RationalMatrix& b) = default;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<Rational> data_;
};

// A homogeneous form. Monomials e^{i_1} ^ ... ^ e^{i_k} with i_1 < ... < i_k
// are keyed by the bitmask sum 2^(i_l - 1).
class ExteriorForm {
public:
    using Mask = std::uint32_t;

    ExteriorForm(int n, int degree);

    // Basis monomial from 1-based indices in any order; the sign of the
    // sorting permutation is applied and repeated indices give zero.
    static ExteriorForm monomial(int n, const std::vector<int>& indices, const Rational& coefficient = 1);

    [[nodiscard]] int n() const { return n_; }
    [[nodiscard]] int degree() const { return degree_; }
    [[nodiscard]] const std::map<Mask, Rational>& terms() const { return terms_; }
    [[nodiscard]] bool is_zero() const { return terms_.empty(); }
    [[nodiscard]] Rational coefficient(const std::vector<int>& sorted_indices) const;

    void add_term(Mask mask, const Rational& c);
    ExteriorForm& operator+=(const ExteriorForm& other);
    ExteriorForm& operator*=(const Rational& s);

    friend ExteriorForm operator+(ExteriorForm a, const ExteriorForm& b) { return a += b; }
    friend ExteriorForm operator*(const Rational& s, ExteriorForm a) { return a *= s; }
    friend bool operator==(const ExteriorForm& a, const ExteriorForm& b) = default;

    [[nodiscard]] std::string to_string() const;

    static std::vector<int> indices(Mask mask);

private:
    int n_;
    int degree_;
    std::map<Mask, Rational> terms_;
};

ExteriorForm wedge(const ExteriorForm& a, const ExteriorForm& b);

// A 2n x 2n matrix acting on model vectors; covectors compose as phi o A.
struct SlotMap {
    int n = 0;
    RationalMatrix matrix;

    // B e_j = e_{n+j}, B e_{n+j} = 0.
    static SlotMap mirror(int n);
    static SlotMap identity(int n);
    // e^j -> e^j, e^{n+j} -> sum_k W_jk e^k.
    static SlotMap weingarten(const RationalMatrix& W);

    // The 1-form e^index o A (1-based index).
    [[nodiscard]] ExteriorForm covector(int index) const;
};

enum class ComposeConvention {
    alternating,  // sum over all assignments of maps to slots
    unalternated  // identity assignment only; a deliberately wrong convention
};

// For each monomial phi_1 ^ ... ^ phi_k of omega, sum over sigma in S_k of
// (phi_1 o A_sigma(1)) ^ ... ^ (phi_k o A_sigma(k)).
ExteriorForm compose(const ExteriorForm& omega, const std::vector<SlotMap>& maps,
                     ComposeConvention convention = ComposeConvention::alternating);

// Slot list B^{n-i} ^ 1^i.
std::vector<SlotMap> mirror_slots(int n, int i);

// Ordinary pullback: every covector phi is replaced by phi o A.
ExteriorForm pullback(const ExteriorForm& omega, const SlotMap& map);

// n_i sum_sigma sg(sigma) e^{sigma_1} ^ .. ^ e^{sigma_{n-i}} ^ e^{n+sigma_{n-i+1}} ^ .. ^ e^{n+sigma_n},
// n_i = 1/(i!(n-i)!); zero for i = -1 and i = n+1.
ExteriorForm alpha_explicit(int n, int i);

// n_i alpha_n o (B^{n-i} ^ 1^i).
ExteriorForm alpha_composed(int n, int i, ComposeConvention convention = ComposeConvention::alternating);

// alpha_{n-1} o (B^{n-i} ^ 1^i) == i!(n-i+1)! alpha_{i-1}.
bool lemma21_check(int n, int i);

// alpha_j ^ alpha_{n-j} == (-1)^j binom(n,j) alpha_0 ^ alpha_n.
bool wedge_identity_check(int n, int j);

// Coefficient of e^1 ^ ... ^ e^n in the Weingarten pullback of alpha_i.
Rational weingarten_pullback(int n, int i, const RationalMatrix& W);

Rational factorial(int k);

struct AlgebraCheck {
    std::string family;  // dual_definition, lemma21, wedge_identity, mirror
    int n;
    int i;
    bool pass;
};

// Runs the dual-definition calibration, Lemma 2.1, the wedge identity and the
// mirror relations for 2 <= n <= nmax.
std::vector<AlgebraCheck> run_algebra_suite(int nmax, ComposeConvention convention = ComposeConvention::alternating);

}  // namespace curvint
