#include "curvint/identities.hpp"

#include <chrono>
#include <algorithm>
#include <cmath>
#include <span>

#include "curvint/curvature.hpp"

namespace curvint {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void require_index(int i, int lo, int hi, const char* what) {
    if (i < lo || i > hi) {
        throw InvalidArgument(std::string(what) + ": index " + std::to_string(i) + " outside " + std::to_string(lo) +
                              ".." + std::to_string(hi));
    }
}

double pair_with_normal(const Hypersurface& s, const NodeSample& node, const Vec& v) {
    const FirstOrderData& f = node.shape.first;
    return s.ambient.pairing(f.point.coords, v, f.normal.vec);
}

double constant_curvature(const AmbientModel& model, const char* what) {
    const auto c = model.curvature();
    if (!c || model.kind() == ModelKind::warped_product) {
        throw InvalidArgument(std::string(what) + ": ambient must be a space form");
    }
    return *c;
}

// Integrates (a, b) per node and returns residual int(a - b) and normalizer int(|a| + |b|).
struct TwoPart {
    double residual;
    double normalizer;
};

template <class F>
TwoPart integrate_difference(const Hypersurface& s, const GridRule& grid, const EvalOptions& options, F parts) {
    const auto r = integrate_many(s, grid, 2, [&](const NodeSample& node, std::span<double> out) {
        const auto [a, b] = parts(node);
        out[0] = a - b;
        out[1] = std::abs(a) + std::abs(b);
    }, options);
    return {r[0], r[1]};
}

IdentityReport make_report(std::string name, int i, const GridRule& grid) {
    IdentityReport rep;
    rep.identity = std::move(name);
    rep.i = i;
    rep.resolution = grid.resolution();
    return rep;
}

void certify_killing(const Hypersurface& s, const GridRule& grid, const VectorField& X, const char* what) {
    const auto samples = surface_killing_samples(s, grid);
    const double defect = killing_defect(s.ambient, X, samples);
    if (!(defect <= kKillingThreshold)) {
        throw DegenerateGeometry(std::string(what) + ": field is not Killing (defect " + std::to_string(defect) +
                                 " > " + std::to_string(kKillingThreshold) + ")");
    }
}

}  // namespace

double IdentityReport::relative() const {
    if (normalizer > 0.0) return std::abs(residual) / normalizer;
    return residual == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

IdentityReport minkowski_residual(const Hypersurface& surface, const GridRule& grid, const AmbientPoint& base, int i,
                                  const EvalOptions& options) {
    const auto t0 = Clock::now();
    if (surface.ambient.kind() != ModelKind::euclidean) {
        throw InvalidArgument("minkowski_residual: ambient must be Euclidean");
    }
    const int n = surface.dim();
    require_index(i, 0, n - 1, "minkowski_residual");
    if (base.coords.size() != surface.ambient.coord_dim()) {
        throw InvalidArgument("minkowski_residual: base dimension mismatch");
    }
    const Vec b = base.coords;
    const TwoPart r = integrate_difference(surface, grid, options, [&](const NodeSample& node) {
        const Vec P = node.shape.first.point.coords - b;
        return std::pair{node.curvatures.at(i), pair_with_normal(surface, node, P) * node.curvatures.at(i + 1)};
    });
    IdentityReport rep = make_report("minkowski", i, grid);
    rep.residual = r.residual;
    rep.normalizer = r.normalizer;
    rep.elapsed = seconds_since(t0);
    return rep;
}

IdentityReport spaceform_residual(const Hypersurface& surface, const GridRule& grid, const AmbientPoint& base, int i,
                                  const EvalOptions& options) {
    const auto t0 = Clock::now();
    constant_curvature(surface.ambient, "spaceform_residual");
    const int n = surface.dim();
    require_index(i, 0, n - 1, "spaceform_residual");
    const PositionField pf = position_field(surface.ambient, base);
    const TwoPart r = integrate_difference(surface, grid, options, [&](const NodeSample& node) {
        const AmbientPoint& p = node.shape.first.point;
        const Vec P = pf.field.at(p).vec;
        return std::pair{pf.lambda(p) * node.curvatures.at(i),
                         pair_with_normal(surface, node, P) * node.curvatures.at(i + 1)};
    });
    IdentityReport rep = make_report("spaceform", i, grid);
    rep.residual = r.residual;
    rep.normalizer = r.normalizer;
    rep.elapsed = seconds_since(t0);
    return rep;
}

IdentityReport flux_residual(const Hypersurface& surface, const GridRule& grid, const Vec& v0, int j,
                             const EvalOptions& options) {
    const auto t0 = Clock::now();
    if (surface.ambient.kind() != ModelKind::euclidean) throw InvalidArgument("flux_residual: ambient must be Euclidean");
    const int n = surface.dim();
    require_index(j, 0, n, "flux_residual");
    if (v0.size() != surface.ambient.coord_dim()) throw InvalidArgument("flux_residual: v0 dimension mismatch");
    const auto r = integrate_many(surface, grid, 2, [&](const NodeSample& node, std::span<double> out) {
        const double v = pair_with_normal(surface, node, v0) * node.curvatures.at(j);
        out[0] = v;
        out[1] = std::abs(v);
    }, options);
    IdentityReport rep = make_report("flux", j, grid);
    rep.j = j;
    rep.residual = r[0];
    rep.normalizer = r[1];
    if (j == 0) rep.flag = "j=0 is the divergence-theorem case";
    rep.elapsed = seconds_since(t0);
    return rep;
}

IdentityReport katsurada_residual(const Hypersurface& surface, const GridRule& grid, const VectorField& X, int i,
                                  const EvalOptions& options) {
    const auto t0 = Clock::now();
    const double c = constant_curvature(surface.ambient, "katsurada_residual");
    const int n = surface.dim();
    require_index(i, 0, n, "katsurada_residual");
    certify_killing(surface, grid, X, "katsurada_residual");
    const TwoPart r = integrate_difference(surface, grid, options, [&](const NodeSample& node) {
        const double xn = pair_with_normal(surface, node, X.at(node.shape.first.point).vec);
        const double up = (i + 1) * node.curvatures.weighted(i + 1);
        const double down = c * (n - i + 1) * node.curvatures.weighted(i - 1);
        return std::pair{xn * up, xn * down};
    });
    IdentityReport rep = make_report("katsurada", i, grid);
    rep.residual = r.residual;
    rep.normalizer = r.normalizer;
    rep.elapsed = seconds_since(t0);
    return rep;
}

IdentityReport katsurada_ratio(const Hypersurface& surface, const GridRule& grid, const VectorField& X, int i,
                               const EvalOptions& options) {
    const auto t0 = Clock::now();
    const double c = constant_curvature(surface.ambient, "katsurada_ratio");
    const int n = surface.dim();
    if (n % 2 != 0) throw InvalidArgument("katsurada_ratio: hypersurface dimension must be even");
    require_index(i, 1, n - 1, "katsurada_ratio");
    certify_killing(surface, grid, X, "katsurada_ratio");
    const double factor = i * c / (n - i);
    const auto r = integrate_many(surface, grid, 3, [&](const NodeSample& node, std::span<double> out) {
        const double xn = pair_with_normal(surface, node, X.at(node.shape.first.point).vec);
        const double a = xn * node.curvatures.at(i + 1);
        const double b = xn * node.curvatures.at(i - 1);
        out[0] = a;
        out[1] = b;
        out[2] = std::abs(a) + std::abs(factor * b);
    }, options);
    IdentityReport rep = make_report("katsurada_ratio", i, grid);
    rep.lhs = r[0];
    rep.rhs = factor * r[1];
    rep.residual = *rep.lhs - *rep.rhs;
    rep.normalizer = std::abs(*rep.lhs) + std::abs(*rep.rhs) + r[2];
    rep.elapsed = seconds_since(t0);
    return rep;
}

IdentityReport closed_form_mean_curvature(const Hypersurface& surface, const GridRule& grid, double kappa, int i,
                                          const EvalOptions& options) {
    const auto t0 = Clock::now();
    require_index(i, 0, surface.dim(), "closed_form_mean_curvature");
    const double expected = std::pow(kappa, i);
    const std::size_t count = grid.size();
    std::vector<double> value(count);
    parallel_for(count, options.threads, [&](std::size_t a) {
        value[a] = sample_node(surface, grid.node(a)).curvatures.at(i);
    });
    IdentityReport rep = make_report("closed_form_h", i, grid);
    rep.lhs = value.front();
    for (double h : value) {
        if (std::abs(h - expected) > rep.residual) {
            rep.residual = std::abs(h - expected);
            rep.lhs = h;
        }
    }
    rep.normalizer = std::max(1.0, std::abs(expected));
    rep.rhs = expected;
    rep.elapsed = seconds_since(t0);
    return rep;
}

IdentityReport umbilic_residual(const Hypersurface& surface, const GridRule& grid, std::optional<double> kappa,
                                const EvalOptions& options) {
    const auto t0 = Clock::now();
    const int n = surface.dim();
    const std::size_t count = grid.size();
    std::vector<double> mean(count), dev(count);
    parallel_for(count, options.threads, [&](std::size_t a) {
        const ShapeData shape = shape_operator_at(surface, grid.node(a));
        const Mat& W = shape.weingarten;
        const double lam = W.trace() / n;
        double d = (W - lam * Mat::Identity(n, n)).cwiseAbs().maxCoeff();
        if (kappa) d = std::max(d, (principal_curvatures(shape).array() - *kappa).abs().maxCoeff());
        mean[a] = lam;
        dev[a] = d;
    });
    IdentityReport rep = make_report("umbilic", 0, grid);
    const auto [lo, hi] = std::minmax_element(mean.begin(), mean.end());
    rep.residual = *hi - *lo;
    for (double d : dev) rep.residual = std::max(rep.residual, d);
    rep.normalizer = 1.0;
    rep.lhs = mean.front();
    rep.rhs = kappa;
    rep.elapsed = seconds_since(t0);
    return rep;
}

IdentityReport position_law(const AmbientModel& model, const AmbientPoint& base, int samples, std::uint64_t seed) {
    const auto t0 = Clock::now();
    if (samples < 1) throw InvalidArgument("position_law: need at least one sample");
    const PositionField pf = position_field(model, base);
    std::mt19937_64 rng(seed);
    IdentityReport rep;
    rep.identity = "position_law";
    for (int k = 0; k < samples; ++k) {
        const AmbientPoint p = random_point(model, rng);
        const TangentVector Y = random_tangent(model, p, rng);
        const TangentVector D = covariant_derivative(model, pf.field, p, Y);
        const TangentVector gap{p, D.vec - pf.lambda(p) * Y.vec};
        rep.residual = std::max(rep.residual, norm(model, gap) / norm(model, Y));
    }
    rep.normalizer = 1.0;
    rep.resolution = {samples};
    rep.elapsed = seconds_since(t0);
    return rep;
}

IdentityReport killing_check(const AmbientModel& model, const VectorField& X, int samples, std::uint64_t seed) {
    const auto t0 = Clock::now();
    if (samples < 1) throw InvalidArgument("killing_check: need at least one sample");
    std::mt19937_64 rng(seed);
    std::vector<KillingSample> s;
    for (int k = 0; k < samples; ++k) {
        const AmbientPoint p = random_point(model, rng);
        TangentVector Y = random_tangent(model, p, rng);
        TangentVector Z = random_tangent(model, p, rng);
        s.push_back({p, Y, Z});
    }
    IdentityReport rep;
    rep.identity = "killing";
    rep.residual = killing_defect(model, X, s);
    rep.normalizer = 1.0;
    rep.resolution = {samples};
    rep.elapsed = seconds_since(t0);
    return rep;
}

std::vector<KillingSample> surface_killing_samples(const Hypersurface& surface, const GridRule& grid,
                                                   std::size_t max_nodes) {
    const std::size_t count = grid.size();
    const std::size_t step = std::max<std::size_t>(1, count / std::max<std::size_t>(1, max_nodes));
    std::vector<KillingSample> out;
    for (std::size_t a = step / 2; a < count && out.size() < 4 * max_nodes; a += step) {
        const FirstOrderData f = frame_at(surface, grid.node(a));
        std::vector<TangentVector> dirs;
        for (const auto& t : f.frame) dirs.push_back({f.point, t.vec / norm(surface.ambient, t)});
        dirs.push_back(f.normal);
        for (std::size_t y = 0; y < dirs.size(); ++y)
            for (std::size_t z = y; z < dirs.size(); ++z) out.push_back({f.point, dirs[y], dirs[z]});
    }
    return out;
}

}  // namespace curvint
