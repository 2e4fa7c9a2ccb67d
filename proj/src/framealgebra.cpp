#include "curvint/framealgebra.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <sstream>

#include "curvint/curvature.hpp"
#include "curvint/errors.hpp"

namespace curvint {

namespace {

using Mask = ExteriorForm::Mask;

// Sign of moving the monomial b past a, or 0 when they share an index.
int wedge_sign(Mask a, Mask b) {
    if ((a & b) != 0) return 0;
    int swaps = 0;
    // Count pairs (x in a, y in b) with x > y.
    for (Mask rest = b; rest != 0; rest &= rest - 1) {
        const Mask low = rest & (~rest + 1);
        const Mask above = ~((low << 1) - 1);
        swaps += std::popcount(a & above);
    }
    return swaps % 2 == 0 ? 1 : -1;
}

void require_algebra_n(int n, const char* what) {
    if (n < 2 || n > kMaxAlgebraN) {
        throw InvalidArgument(std::string(what) + ": n must lie in 2.." + std::to_string(kMaxAlgebraN));
    }
}

std::vector<int> iota_vector(int k) {
    std::vector<int> v(static_cast<std::size_t>(k));
    std::iota(v.begin(), v.end(), 0);
    return v;
}

int permutation_sign(const std::vector<int>& p) {
    int inversions = 0;
    for (std::size_t a = 0; a < p.size(); ++a)
        for (std::size_t b = a + 1; b < p.size(); ++b)
            if (p[a] > p[b]) ++inversions;
    return inversions % 2 == 0 ? 1 : -1;
}

ExteriorForm wedge_all(int n, const std::vector<ExteriorForm>& factors) {
    ExteriorForm acc = ExteriorForm::monomial(n, {});
    for (const auto& f : factors) {
        acc = wedge(acc, f);
        if (acc.is_zero()) break;
    }
    return acc;
}

}  // namespace

// ---------------------------------------------------------------------------

RationalMatrix RationalMatrix::identity(int n) {
    RationalMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

RationalMatrix RationalMatrix::random(int rows, int cols, std::mt19937_64& rng, int max_num, int max_den) {
    std::uniform_int_distribution<int> num(-max_num, max_num);
    std::uniform_int_distribution<int> den(1, max_den);
    RationalMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            Rational q(num(rng), den(rng));
            q.canonicalize();
            m(i, j) = q;
        }
    }
    return m;
}

bool RationalMatrix::is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const Rational& q) { return q == 0; });
}

int RationalMatrix::rank() const {
    std::vector<Rational> a = data_;
    int r = 0;
    for (int col = 0; col < cols_ && r < rows_; ++col) {
        int piv = -1;
        for (int i = r; i < rows_; ++i) {
            if (a[static_cast<std::size_t>(i * cols_ + col)] != 0) {
                piv = i;
                break;
            }
        }
        if (piv < 0) continue;
        for (int k = 0; k < cols_; ++k) {
            std::swap(a[static_cast<std::size_t>(piv * cols_ + k)], a[static_cast<std::size_t>(r * cols_ + k)]);
        }
        for (int i = r + 1; i < rows_; ++i) {
            const Rational f = a[static_cast<std::size_t>(i * cols_ + col)] / a[static_cast<std::size_t>(r * cols_ + col)];
            if (f == 0) continue;
            for (int k = col; k < cols_; ++k) {
                a[static_cast<std::size_t>(i * cols_ + k)] -= f * a[static_cast<std::size_t>(r * cols_ + k)];
            }
        }
        ++r;
    }
    return r;
}

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
    if (a.cols() != b.rows()) throw InvalidArgument("RationalMatrix: dimension mismatch");
    RationalMatrix c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            if (a(i, k) == 0) continue;
            for (int j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
        }
    return c;
}

// ---------------------------------------------------------------------------

ExteriorForm::ExteriorForm(int n, int degree) : n_(n), degree_(degree) {
    if (n < 1 || 2 * n > 31) throw InvalidArgument("ExteriorForm: unsupported n");
    if (degree < 0 || degree > 2 * n) throw InvalidArgument("ExteriorForm: degree out of range");
}

ExteriorForm ExteriorForm::monomial(int n, const std::vector<int>& indices, const Rational& coefficient) {
    ExteriorForm f(n, static_cast<int>(indices.size()));
    Mask mask = 0;
    for (int idx : indices) {
        if (idx < 1 || idx > 2 * n) throw InvalidArgument("ExteriorForm: index out of range");
        const Mask bit = Mask{1} << (idx - 1);
        if (mask & bit) return f;
        mask |= bit;
    }
    std::vector<int> order(indices);
    f.add_term(mask, permutation_sign(order) * coefficient);
    return f;
}

Rational ExteriorForm::coefficient(const std::vector<int>& sorted_indices) const {
    Mask mask = 0;
    for (int idx : sorted_indices) mask |= Mask{1} << (idx - 1);
    const auto it = terms_.find(mask);
    return it == terms_.end() ? Rational(0) : it->second;
}

void ExteriorForm::add_term(Mask mask, const Rational& c) {
    if (std::popcount(mask) != degree_) throw InvalidArgument("ExteriorForm: inhomogeneous term");
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(mask, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

ExteriorForm& ExteriorForm::operator+=(const ExteriorForm& other) {
    if (other.n_ != n_ || (other.degree_ != degree_ && !other.is_zero())) {
        throw InvalidArgument("ExteriorForm: adding incompatible forms");
    }
    for (const auto& [m, c] : other.terms_) add_term(m, c);
    return *this;
}

ExteriorForm& ExteriorForm::operator*=(const Rational& s) {
    if (s == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
}

std::vector<int> ExteriorForm::indices(Mask mask) {
    std::vector<int> out;
    for (int b = 0; mask != 0; ++b, mask >>= 1)
        if (mask & 1u) out.push_back(b + 1);
    return out;
}

std::string ExteriorForm::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        if (!first) os << (c < 0 ? " - " : " + ");
        else if (c < 0) os << "-";
        first = false;
        const Rational a = abs(c);
        if (a != 1 || m == 0) os << a.get_str() << (m == 0 ? "" : " ");
        bool first_idx = true;
        for (int idx : indices(m)) {
            os << (first_idx ? "e" : "^e") << idx;
            first_idx = false;
        }
    }
    return os.str();
}

ExteriorForm wedge(const ExteriorForm& a, const ExteriorForm& b) {
    if (a.n() != b.n()) throw InvalidArgument("wedge: forms live on different model spaces");
    ExteriorForm out(a.n(), a.degree() + b.degree());
    for (const auto& [ma, ca] : a.terms()) {
        for (const auto& [mb, cb] : b.terms()) {
            const int s = wedge_sign(ma, mb);
            if (s != 0) out.add_term(ma | mb, s * ca * cb);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

SlotMap SlotMap::mirror(int n) {
    SlotMap s{n, RationalMatrix(2 * n, 2 * n)};
    for (int j = 0; j < n; ++j) s.matrix(n + j, j) = 1;
    return s;
}

SlotMap SlotMap::identity(int n) { return {n, RationalMatrix::identity(2 * n)}; }

SlotMap SlotMap::weingarten(const RationalMatrix& W) {
    const int n = W.rows();
    if (W.cols() != n) throw InvalidArgument("SlotMap::weingarten: W must be square");
    SlotMap s{n, RationalMatrix(2 * n, 2 * n)};
    for (int j = 0; j < n; ++j) {
        s.matrix(j, j) = 1;
        for (int k = 0; k < n; ++k) s.matrix(n + j, k) = W(j, k);
    }
    return s;
}

ExteriorForm SlotMap::covector(int index) const {
    ExteriorForm f(n, 1);
    for (int k = 0; k < 2 * n; ++k) f.add_term(Mask{1} << k, matrix(index - 1, k));
    return f;
}

ExteriorForm compose(const ExteriorForm& omega, const std::vector<SlotMap>& maps, ComposeConvention convention) {
    const int k = omega.degree();
    if (static_cast<int>(maps.size()) != k) {
        throw InvalidArgument("compose: expected " + std::to_string(k) + " slot maps, got " +
                              std::to_string(maps.size()));
    }
    for (const auto& m : maps) {
        if (m.n != omega.n()) throw InvalidArgument("compose: slot map on a different model space");
    }
    ExteriorForm out(omega.n(), k);
    for (const auto& [mask, c] : omega.terms()) {
        const std::vector<int> idx = ExteriorForm::indices(mask);
        std::vector<int> sigma = iota_vector(k);
        do {
            std::vector<ExteriorForm> factors;
            factors.reserve(static_cast<std::size_t>(k));
            for (int l = 0; l < k; ++l) {
                factors.push_back(maps[static_cast<std::size_t>(sigma[static_cast<std::size_t>(l)])].covector(
                    idx[static_cast<std::size_t>(l)]));
            }
            out += c * wedge_all(omega.n(), factors);
        } while (convention == ComposeConvention::alternating && std::next_permutation(sigma.begin(), sigma.end()));
    }
    return out;
}

std::vector<SlotMap> mirror_slots(int n, int i) {
    std::vector<SlotMap> slots;
    for (int l = 0; l < n - i; ++l) slots.push_back(SlotMap::mirror(n));
    for (int l = 0; l < i; ++l) slots.push_back(SlotMap::identity(n));
    return slots;
}

ExteriorForm pullback(const ExteriorForm& omega, const SlotMap& map) {
    if (map.n != omega.n()) throw InvalidArgument("pullback: slot map on a different model space");
    ExteriorForm out(omega.n(), omega.degree());
    for (const auto& [mask, c] : omega.terms()) {
        std::vector<ExteriorForm> factors;
        for (int idx : ExteriorForm::indices(mask)) factors.push_back(map.covector(idx));
        out += c * wedge_all(omega.n(), factors);
    }
    return out;
}

Rational factorial(int k) {
    Rational f = 1;
    for (int j = 2; j <= k; ++j) f *= j;
    return f;
}

ExteriorForm alpha_explicit(int n, int i) {
    require_algebra_n(n, "alpha_explicit");
    if (i < -1 || i > n + 1) throw InvalidArgument("alpha_explicit: i must lie in -1..n+1");
    ExteriorForm out(n, n);
    if (i == -1 || i == n + 1) return out;
    std::vector<int> sigma = iota_vector(n);
    do {
        std::vector<int> idx;
        for (int l = 0; l < n; ++l) {
            const int s = sigma[static_cast<std::size_t>(l)] + 1;
            idx.push_back(l < n - i ? s : n + s);
        }
        out += ExteriorForm::monomial(n, idx, permutation_sign(sigma));
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    out *= Rational(1) / (factorial(i) * factorial(n - i));
    return out;
}

ExteriorForm alpha_composed(int n, int i, ComposeConvention convention) {
    require_algebra_n(n, "alpha_composed");
    if (i < 0 || i > n) throw InvalidArgument("alpha_composed: i must lie in 0..n");
    ExteriorForm out = compose(alpha_explicit(n, n), mirror_slots(n, i), convention);
    out *= Rational(1) / (factorial(i) * factorial(n - i));
    return out;
}

bool lemma21_check(int n, int i) {
    require_algebra_n(n, "lemma21_check");
    if (i < 0 || i > n) throw InvalidArgument("lemma21_check: i must lie in 0..n");
    const ExteriorForm lhs = compose(alpha_explicit(n, n - 1), mirror_slots(n, i));
    const ExteriorForm rhs = factorial(i) * factorial(n - i + 1) * alpha_explicit(n, i - 1);
    return lhs == rhs;
}

bool wedge_identity_check(int n, int j) {
    require_algebra_n(n, "wedge_identity_check");
    if (j < 0 || j > n) throw InvalidArgument("wedge_identity_check: j must lie in 0..n");
    const ExteriorForm lhs = wedge(alpha_explicit(n, j), alpha_explicit(n, n - j));
    const Rational factor = (j % 2 == 0 ? 1 : -1) * Rational(static_cast<long>(binomial(n, j)));
    const ExteriorForm rhs = factor * wedge(alpha_explicit(n, 0), alpha_explicit(n, n));
    return lhs == rhs;
}

Rational weingarten_pullback(int n, int i, const RationalMatrix& W) {
    if (W.rows() != n || W.cols() != n) throw InvalidArgument("weingarten_pullback: W must be n x n");
    const ExteriorForm p = pullback(alpha_explicit(n, i), SlotMap::weingarten(W));
    std::vector<int> top(static_cast<std::size_t>(n));
    std::iota(top.begin(), top.end(), 1);
    return p.coefficient(top);
}

std::vector<AlgebraCheck> run_algebra_suite(int nmax, ComposeConvention convention) {
    require_algebra_n(nmax, "run_algebra_suite");
    std::vector<AlgebraCheck> out;
    for (int n = 2; n <= nmax; ++n) {
        const SlotMap B = SlotMap::mirror(n);
        bool mirror_ok = (B.matrix * B.matrix).is_zero() && B.matrix.rank() == n;
        for (int j = 1; j <= n; ++j) mirror_ok = mirror_ok && B.covector(n + j) == ExteriorForm::monomial(n, {j});
        out.push_back({"mirror", n, -1, mirror_ok});
        for (int i = 0; i <= n; ++i) {
            out.push_back({"dual_definition", n, i, alpha_composed(n, i, convention) == alpha_explicit(n, i)});
        }
        for (int i = 0; i <= n; ++i) out.push_back({"lemma21", n, i, lemma21_check(n, i)});
        for (int j = 0; j <= n; ++j) out.push_back({"wedge_identity", n, j, wedge_identity_check(n, j)});
    }
    return out;
}

}  // namespace curvint
