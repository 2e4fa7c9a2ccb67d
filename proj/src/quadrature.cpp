#include "curvint/quadrature.hpp"

#include <cmath>
#include <exception>
#include <numbers>
#include <thread>

namespace curvint {

std::size_t GridRule::size() const {
    std::size_t total = 1;
    for (const auto& a : axes) total *= a.nodes.size();
    return total;
}

std::vector<int> GridRule::resolution() const {
    std::vector<int> r;
    for (const auto& a : axes) r.push_back(static_cast<int>(a.nodes.size()));
    return r;
}

Vec GridRule::node(std::size_t index) const {
    Vec u(static_cast<Eigen::Index>(axes.size()));
    for (std::size_t k = axes.size(); k-- > 0;) {
        const std::size_t m = axes[k].nodes.size();
        u(static_cast<Eigen::Index>(k)) = axes[k].nodes[index % m];
        index /= m;
    }
    return u;
}

double GridRule::weight(std::size_t index) const {
    double w = 1.0;
    for (std::size_t k = axes.size(); k-- > 0;) {
        const std::size_t m = axes[k].nodes.size();
        w *= axes[k].weights[index % m];
        index /= m;
    }
    return w;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(static_cast<std::size_t>(n), 0.0);
    weights.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            if (n == 1) p0 = 1.0;
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // One more derivative evaluation at the converged root.
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = pk;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[static_cast<std::size_t>(i)] = -x;
        nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        weights[static_cast<std::size_t>(i)] = w;
        weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    if (n % 2 == 1) nodes[static_cast<std::size_t>(n / 2)] = 0.0;
}

GridRule build_grid(std::span<const Axis> domain, std::span<const int> resolution) {
    if (domain.size() != resolution.size()) throw InvalidArgument("build_grid: one resolution per axis required");
    GridRule grid;
    for (std::size_t k = 0; k < domain.size(); ++k) {
        const int m = resolution[k];
        if (m < kMinResolution) {
            throw InvalidArgument("build_grid: resolution " + std::to_string(m) + " below minimum " +
                                  std::to_string(kMinResolution));
        }
        const Axis& ax = domain[k];
        if (!(ax.hi > ax.lo)) throw InvalidArgument("build_grid: empty axis");
        AxisGrid g;
        const double len = ax.hi - ax.lo;
        if (ax.periodic) {
            g.rule = AxisRule::periodic_trapezoid;
            for (int i = 0; i < m; ++i) {
                g.nodes.push_back(ax.lo + len * i / m);
                g.weights.push_back(len / m);
            }
        } else {
            g.rule = AxisRule::gauss_legendre;
            std::vector<double> x, w;
            gauss_legendre(m, x, w);
            for (int i = 0; i < m; ++i) {
                g.nodes.push_back(ax.lo + 0.5 * len * (x[static_cast<std::size_t>(i)] + 1.0));
                g.weights.push_back(0.5 * len * w[static_cast<std::size_t>(i)]);
            }
        }
        grid.axes.push_back(std::move(g));
    }
    return grid;
}

void CompensatedSum::add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
        comp_ += (sum_ - t) + x;
    } else {
        comp_ += (x - t) + sum_;
    }
    sum_ = t;
}

NodeSample sample_node(const Hypersurface& surface, const Vec& u) {
    ShapeData shape = shape_operator_at(surface, u);
    MeanCurvatures h = mean_curvatures(shape.weingarten);
    return {u, std::move(shape), std::move(h)};
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
    if (threads <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    const std::size_t workers = std::min<std::size_t>(threads, count);
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::size_t> failed_at(workers, count);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            const std::size_t begin = count * w / workers;
            const std::size_t end = count * (w + 1) / workers;
            for (std::size_t i = begin; i < end; ++i) {
                try {
                    body(i);
                } catch (...) {
                    errors[w] = std::current_exception();
                    failed_at[w] = i;
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    // Blocks are contiguous and ordered, so the first failing block holds the smallest index.
    for (std::size_t w = 0; w < workers; ++w) {
        if (errors[w]) std::rethrow_exception(errors[w]);
    }
}

namespace {

void require_matching_grid(const Hypersurface& surface, const GridRule& grid) {
    if (grid.axes.size() != static_cast<std::size_t>(surface.dim())) {
        throw InvalidArgument("integrate: grid does not match the chart domain");
    }
    for (std::size_t a = 0; a < grid.axes.size(); ++a) {
        const bool periodic = grid.axes[a].rule == AxisRule::periodic_trapezoid;
        if (periodic != surface.chart.domain[a].periodic) {
            throw InvalidArgument("integrate: grid axis kind does not match the chart domain");
        }
    }
}

}  // namespace

std::vector<double> integrate_many(const Hypersurface& surface, const GridRule& grid, std::size_t k,
                                   const MultiIntegrand& f, const EvalOptions& options) {
    require_matching_grid(surface, grid);
    const std::size_t count = grid.size();
    std::vector<double> values(count * k, 0.0);
    parallel_for(count, options.threads, [&](std::size_t i) {
        const NodeSample s = sample_node(surface, grid.node(i));
        const std::span<double> out(values.data() + i * k, k);
        f(s, out);
        const double w = grid.weight(i) * s.shape.first.density;
        for (double& v : out) v *= w;
    });
    std::vector<CompensatedSum> sums(k);
    for (std::size_t i = 0; i < count; ++i)
        for (std::size_t j = 0; j < k; ++j) sums[j].add(values[i * k + j]);
    std::vector<double> result;
    result.reserve(k);
    for (const auto& s : sums) result.push_back(s.value());
    return result;
}

double integrate(const Hypersurface& surface, const GridRule& grid, const std::function<double(const Vec&)>& f,
                 const EvalOptions& options) {
    require_matching_grid(surface, grid);
    const std::size_t count = grid.size();
    std::vector<double> values(count, 0.0);
    parallel_for(count, options.threads, [&](std::size_t i) {
        const Vec u = grid.node(i);
        values[i] = grid.weight(i) * f(u) * frame_at(surface, u).density;
    });
    CompensatedSum sum;
    for (double v : values) sum.add(v);
    return sum.value();
}

}  // namespace curvint
