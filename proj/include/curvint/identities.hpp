#pragma once

// Integral identities as signed residuals. Each report carries the residual,
// a normalizer (the integral of the absolute values of the integrand's
// parts) and enough context to be printed on its own.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "curvint/immersion.hpp"
#include "curvint/quadrature.hpp"
#include "curvint/spaceform.hpp"

namespace curvint {

struct IdentityReport {
    std::string identity;
    int i = 0;
    std::optional<int> j;
    double residual = 0.0;
    double normalizer = 0.0;
    std::vector<int> resolution;
    double elapsed = 0.0;  // seconds
    std::optional<double> lhs;
    std::optional<double> rhs;
    std::string flag;  // non-empty for diagnostic-only evaluations

    [[nodiscard]] double relative() const;
    [[nodiscard]] bool passes(double tolerance) const { return std::abs(residual) <= tolerance * normalizer; }
};

// int (H_i - <P, nu> H_{i+1}) with P = x - base. Euclidean ambient only.
IdentityReport minkowski_residual(const Hypersurface& surface, const GridRule& grid, const AmbientPoint& base, int i,
                                  const EvalOptions& options = {});

// int (lambda_c(r) H_i - <P, nu> H_{i+1}) with P the position field about base.
IdentityReport spaceform_residual(const Hypersurface& surface, const GridRule& grid, const AmbientPoint& base, int i,
                                  const EvalOptions& options = {});

// int <v0, nu> H_j. Euclidean ambient; j = 0 runs but is flagged.
IdentityReport flux_residual(const Hypersurface& surface, const GridRule& grid, const Vec& v0, int j,
                             const EvalOptions& options = {});

// int <X, nu> ((i+1) e_{i+1} - c (n-i+1) e_{i-1}), with e_k = binom(n,k) H_k
// and e_{-1} = e_{n+1} = 0. X must pass the Killing certificate.
IdentityReport katsurada_residual(const Hypersurface& surface, const GridRule& grid, const VectorField& X, int i,
                                  const EvalOptions& options = {});

// lhs = int <X, nu> H_{i+1}, rhs = (i c / (n-i)) int <X, nu> H_{i-1}; n even.
// residual = lhs - rhs; normalizer = |lhs| + |rhs| + int of the absolute parts.
IdentityReport katsurada_ratio(const Hypersurface& surface, const GridRule& grid, const VectorField& X, int i,
                               const EvalOptions& options = {});

// max over nodes of |H_i - kappa^i| for an umbilic surface with principal
// curvature kappa; normalizer max(1, |kappa^i|). lhs is the computed H_i at
// the worst node, rhs = kappa^i.
IdentityReport closed_form_mean_curvature(const Hypersurface& surface, const GridRule& grid, double kappa, int i,
                                          const EvalOptions& options = {});

// Umbilicity: the larger of max over nodes of |W - (tr W / n) I|_max and the
// spread of tr W / n across nodes; when kappa is given, also the largest
// deviation of a principal curvature from kappa. Normalizer 1.
IdentityReport umbilic_residual(const Hypersurface& surface, const GridRule& grid, std::optional<double> kappa,
                                const EvalOptions& options = {});

// max over random (p, Y) of |nabla_Y P - lambda Y| / |Y|; normalizer 1.
IdentityReport position_law(const AmbientModel& model, const AmbientPoint& base, int samples, std::uint64_t seed);

// Killing defect of X at random ambient samples; normalizer 1.
IdentityReport killing_check(const AmbientModel& model, const VectorField& X, int samples, std::uint64_t seed);

inline constexpr double kKillingThreshold = 1e-6;

// Samples (p, Y, Z) at a spread of grid nodes with Y, Z drawn from the unit
// frame directions and the normal.
std::vector<KillingSample> surface_killing_samples(const Hypersurface& surface, const GridRule& grid,
                                                   std::size_t max_nodes = 8);

}  // namespace curvint
