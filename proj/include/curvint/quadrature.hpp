#pragma once

// Tensor-product quadrature over chart domains: the periodic trapezoid rule
// on periodic axes, Gauss-Legendre on open axes. Node values may be computed
// on several threads; the reduction always runs in node-index order with
// compensated summation, so results do not depend on the thread count.

#include <functional>
#include <span>
#include <vector>

#include "curvint/curvature.hpp"
#include "curvint/immersion.hpp"

namespace curvint {

enum class AxisRule { periodic_trapezoid, gauss_legendre };

struct AxisGrid {
    AxisRule rule;
    std::vector<double> nodes;
    std::vector<double> weights;
};

struct GridRule {
    std::vector<AxisGrid> axes;

    [[nodiscard]] std::size_t size() const;
    [[nodiscard]] std::vector<int> resolution() const;
    // Parameter point and product weight of flat node `index` (last axis fastest).
    [[nodiscard]] Vec node(std::size_t index) const;
    [[nodiscard]] double weight(std::size_t index) const;
};

inline constexpr int kMinResolution = 4;

// Nodes and weights of the n-point Gauss-Legendre rule on (-1, 1).
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

GridRule build_grid(std::span<const Axis> domain, std::span<const int> resolution);

// Neumaier's variant of Kahan summation.
class CompensatedSum {
public:
    void add(double x);
    [[nodiscard]] double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

struct EvalOptions {
    unsigned threads = 1;
};

// Everything an integrand may want at a node.
struct NodeSample {
    Vec u;
    ShapeData shape;
    MeanCurvatures curvatures;
};

NodeSample sample_node(const Hypersurface& surface, const Vec& u);

// Integrand writing `out.size()` values per node.
using MultiIntegrand = std::function<void(const NodeSample&, std::span<double> out)>;

// sum_a w_a f(u_a) density(u_a), for k integrands at once.
std::vector<double> integrate_many(const Hypersurface& surface, const GridRule& grid, std::size_t k,
                                   const MultiIntegrand& f, const EvalOptions& options = {});

double integrate(const Hypersurface& surface, const GridRule& grid, const std::function<double(const Vec&)>& f,
                 const EvalOptions& options = {});

// Evaluates body(i) for i in [0, count) across `threads` workers. Exceptions
// are rethrown for the smallest failing index.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace curvint
