#pragma once

// Ambient spaces: Euclidean space, the round sphere and the hyperboloid
// (both embedded in a flat space of one dimension more), and warped
// products dr^2 + psi(r)^2 g_{S^n} over the unit round sphere.
//
// Coordinate realizations:
//   Euclidean      x in R^m
//   sphere         x in R^{m+1}, <x,x> = R0^2
//   hyperboloid    x in R^{m+1}, <x,x>_L = -R0^2, x^0 > 0, eta = diag(-1,1,...,1)
//   warped         (r, y) in R^{1+m}, |y| = 1

#include <Eigen/Dense>

#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "curvint/smooth_map.hpp"

namespace curvint {

enum class ModelKind { euclidean, sphere, hyperboloid, warped_product };

struct Warp {
    SmoothMap profile;  // psi : R -> R
    double r_min = 0.0;
    double r_max = std::numeric_limits<double>::infinity();
    std::optional<double> curvature;  // set when psi = s_c

    // psi = s_c on (0, pi/sqrt(c)) for c > 0, (0, inf) otherwise.
    static Warp space_form(double c);
    // psi(r) = sum_k coeffs[k] r^k on (r_min, r_max); psi must stay positive there.
    static Warp polynomial(std::vector<double> coeffs, double r_min = 0.0,
                           double r_max = std::numeric_limits<double>::infinity());

    [[nodiscard]] double psi(double r) const;
    [[nodiscard]] double dpsi(double r) const;
};

struct AmbientPoint {
    Vec coords;
};

struct TangentVector {
    AmbientPoint base;
    Vec vec;
};

class AmbientModel {
public:
    static AmbientModel euclidean(int dim);
    static AmbientModel sphere(int dim, double radius);
    static AmbientModel hyperboloid(int dim, double radius);
    static AmbientModel warped(int dim, Warp warp);

    [[nodiscard]] ModelKind kind() const { return kind_; }
    // Manifold dimension m = n + 1.
    [[nodiscard]] int dim() const { return dim_; }
    // Length of the coordinate vectors of points and tangent vectors.
    [[nodiscard]] int coord_dim() const;
    [[nodiscard]] bool is_embedded() const { return kind_ == ModelKind::sphere || kind_ == ModelKind::hyperboloid; }
    // Sectional curvature, when constant.
    [[nodiscard]] std::optional<double> curvature() const;
    [[nodiscard]] double radius() const { return radius_; }
    [[nodiscard]] const Warp& warp() const;

    // Relative violation of the membership constraint (0 for valid points).
    [[nodiscard]] double membership_defect(const Vec& x) const;
    void require_member(const AmbientPoint& p, double tol = 1e-12) const;
    [[nodiscard]] double tangency_defect(const TangentVector& v) const;

    // Bilinear form on coordinate vectors at base: flat dot, Lorentz dot,
    // or the warped metric. No validation.
    [[nodiscard]] double pairing(const Vec& base, const Vec& u, const Vec& v) const;

    // Default base point: origin, or the pole R0*e_last (sphere), R0*e_0
    // (hyperboloid), or r = r_min on the first axis (warped).
    [[nodiscard]] AmbientPoint origin() const;

private:
    AmbientModel(ModelKind kind, int dim, double radius) : kind_(kind), dim_(dim), radius_(radius) {}

    ModelKind kind_;
    int dim_;
    double radius_;
    std::optional<Warp> warp_;
};

// Lorentz product with signature (-,+,...,+).
double lorentz_dot(const Vec& u, const Vec& v);

double inner(const AmbientModel& model, const TangentVector& u, const TangentVector& v);
double norm(const AmbientModel& model, const TangentVector& v);

// Orthogonal projection onto T_p. On Euclidean space this is the identity;
// on warped products the y-part is projected onto T_y S^n.
TangentVector project_tangent(const AmbientModel& model, const AmbientPoint& p, const Vec& w);

// Smooth vector field given by its coordinates as a function of the
// coordinates of the point.
class VectorField {
public:
    VectorField() = default;
    explicit VectorField(SmoothMap coords) : coords_(std::move(coords)) {}

    [[nodiscard]] TangentVector at(const AmbientPoint& p) const { return {p, coords_.value(p.coords)}; }
    // Coordinate directional derivative D_Y X at p.
    [[nodiscard]] Vec derivative(const AmbientPoint& p, const Vec& Y) const { return coords_.directional(p.coords, Y); }
    [[nodiscard]] const SmoothMap& coords() const { return coords_; }
    [[nodiscard]] VectorField with_backend(Backend b) const { return VectorField(coords_.with_backend(b)); }

private:
    SmoothMap coords_;
};

// Levi-Civita connection applied to a field with value `X` and coordinate
// derivative `dX` (= D_Y X) at p.
Vec connection(const AmbientModel& model, const AmbientPoint& p, const Vec& X, const Vec& dX, const Vec& Y);

TangentVector covariant_derivative(const AmbientModel& model, const VectorField& field, const AmbientPoint& p,
                                   const TangentVector& Y);

double geodesic_distance(const AmbientModel& model, const AmbientPoint& base, const AmbientPoint& p);

struct WarpValues {
    double s;
    double lambda;
};

WarpValues warp_functions(double c, double r);

// s_c and lambda_c over any scalar type, for use inside generic programs.
template <class S>
S warp_s(double c, const S& r) {
    using std::sin, std::sinh, std::sqrt;
    if (c > 0.0) return sin(sqrt(c) * r) / sqrt(c);
    if (c < 0.0) return sinh(sqrt(-c) * r) / sqrt(-c);
    return r;
}

template <class S>
S warp_lambda(double c, const S& r) {
    using std::cos, std::cosh, std::sqrt;
    if (c > 0.0) return cos(sqrt(c) * r);
    if (c < 0.0) return cosh(sqrt(-c) * r);
    return S(1.0);
}

struct PositionField {
    VectorField field;
    std::function<double(const AmbientPoint&)> lambda;
};

// P with nabla_Y P = lambda Y. For space forms P = s_c(r) d_r about `base`;
// for warped products P = psi(r) d_r and `base` is ignored.
PositionField position_field(const AmbientModel& model, const AmbientPoint& base);

struct KillingGenerator {
    Mat omega;        // skew (Euclidean, sphere) or Lorentz-skew (hyperboloid)
    Vec translation;  // Euclidean only; may be empty
};

double skew_defect(const AmbientModel& model, const Mat& omega);

VectorField killing_field(const AmbientModel& model, const KillingGenerator& generator);

struct KillingSample {
    AmbientPoint p;
    TangentVector Y;
    TangentVector Z;
};

// max |<nabla_Y X, Z> + <nabla_Z X, Y>| / (|Y| |Z|)
double killing_defect(const AmbientModel& model, const VectorField& X, std::span<const KillingSample> samples);

// Pseudo-random valid points and tangent vectors.
AmbientPoint random_point(const AmbientModel& model, std::mt19937_64& rng);
TangentVector random_tangent(const AmbientModel& model, const AmbientPoint& p, std::mt19937_64& rng);

}  // namespace curvint
