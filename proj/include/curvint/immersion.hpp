#pragma once

// Closed oriented hypersurfaces given by a single parametric chart, and the
// first- and second-order data at a parameter point.

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

#include "curvint/smooth_map.hpp"
#include "curvint/spaceform.hpp"

namespace curvint {

struct Axis {
    double lo;
    double hi;
    bool periodic;  // periodic axes cover [lo, hi); open axes cover (lo, hi)
};

struct Chart {
    std::vector<Axis> domain;
    SmoothMap map;         // parameters -> ambient coordinates
    int orientation = 1;   // +1 keeps the default normal rule, -1 flips it

    [[nodiscard]] int dim() const { return static_cast<int>(domain.size()); }
    [[nodiscard]] Chart with_backend(Backend b) const { return {domain, map.with_backend(b), orientation}; }
};

// Closedness is declared by the chart's domain, not checked.
struct Hypersurface {
    AmbientModel ambient;
    Chart chart;
    int normal_sign = 1;

    [[nodiscard]] int dim() const { return chart.dim(); }
    [[nodiscard]] Hypersurface with_backend(Backend b) const { return {ambient, chart.with_backend(b), normal_sign}; }
    [[nodiscard]] Hypersurface flipped() const { return {ambient, chart, -normal_sign}; }
};

struct FirstOrderData {
    AmbientPoint point;
    std::vector<TangentVector> frame;  // T_j = df/du^j
    Mat metric;                        // g_jk = <T_j, T_k>
    TangentVector normal;              // unit, orthogonal to every T_j
    double density;                    // sqrt(det g)
};

struct ShapeData {
    FirstOrderData first;
    Mat second_form;  // b_jk = <nabla_{T_j} nu, T_k>
    Mat weingarten;   // A T_j = sum_k W_kj T_k, so gW = b^T
};

FirstOrderData frame_at(const Hypersurface& surface, const Vec& u);
ShapeData shape_operator_at(const Hypersurface& surface, const Vec& u);

// Eigenvalues of the shape operator (ascending), from the symmetric pencil (b, g).
Vec principal_curvatures(const ShapeData& shape);

// Default orientation rule applied to a frame: det(T_1..T_n, nu) > 0 in
// Euclidean space, det(T_1..T_n, nu, x) > 0 in the embedded models. The
// result is unit length for the model's pairing.
template <class S>
std::vector<S> default_normal(ModelKind kind, const std::vector<S>& x, const std::vector<std::vector<S>>& frame);

// Precomposes the chart with s -> A s + b. The caller supplies the domain of s.
Chart reparametrize_affine(const Chart& chart, const Mat& A, const Vec& b, std::vector<Axis> domain);

// ---------------------------------------------------------------------------
// Built-in surfaces

struct NamedSurface {
    std::string name;
    Hypersurface surface;
    // Principal curvature of umbilic surfaces under the built-in orientation.
    std::optional<double> umbilic_curvature;
};

// Round n-sphere in R^{n+1} in hyperspherical coordinates: n-1 polar angles
// on (0, pi) and an azimuth on [0, 2pi). Outward normal.
NamedSurface sphere_surface(int n, double radius, const Vec& center);
// Torus of revolution about the z-axis, parameters (u, v). Outward normal.
NamedSurface torus_surface(double major_radius, double minor_radius);
// Ellipsoid sum (x_k / a_k)^2 = 1. Outward normal.
NamedSurface ellipsoid_surface(const std::vector<double>& semi_axes);
// Geodesic sphere of radius rho about model.origin(). Normal points away from the center.
NamedSurface geodesic_sphere(const AmbientModel& model, double rho);
// N_t = { (x, t) : |x|^2 = R0^2 - t^2 } in S^{n+1}(R0), with the normal
// (-t x, R_t^2) / (R0 R_t), i.e. pointing toward the pole (0, R0).
NamedSurface latitude_sphere(int n, double R0, double t);

}  // namespace curvint
