#pragma once

// Command implementations behind the `curvint` executable. Exit codes:
// 0 pass, 1 input error, 2 identity failure.

#include <iosfwd>
#include <optional>
#include <string>

#include "curvint/scenario.hpp"

namespace curvint::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitFailure = 2;

struct Context {
    std::ostream& out;
    std::ostream& err;
    unsigned threads = 1;
};

// Reads CURVINT_THREADS; unset means all hardware threads.
unsigned threads_from_env();

struct OutputPaths {
    std::optional<std::string> csv;
    std::optional<std::string> plot;
};

int run(const std::string& scenario_path, const OutputPaths& paths, const Context& ctx);
int convergence(const std::string& scenario_path, int levels, const OutputPaths& paths, const Context& ctx);
int algebra(int nmax, bool perturb_convention, const Context& ctx);

// Estimated algebraic decay order from the last two levels above the floor
// 1e-12 * normalizer; empty when fewer than two levels are above it.
std::optional<double> decay_order(const std::vector<Report>& levels, std::size_t row);

}  // namespace curvint::cli
