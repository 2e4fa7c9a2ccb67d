#include "curvint/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <ostream>
#include <thread>

#include "curvint/framealgebra.hpp"

namespace curvint::cli {

namespace {

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string resolution_text(const std::vector<int>& r) {
    std::string s;
    for (std::size_t k = 0; k < r.size(); ++k) s += (k ? "x" : "") + std::to_string(r[k]);
    return s;
}

void print_row(std::ostream& os, const ReportRow& row) {
    const IdentityReport& r = row.report;
    os << (row.pass ? "PASS " : "FAIL ") << r.identity << " i=" << r.i << "  residual=" << fmt("%.3e", r.residual)
       << "  relative=" << fmt("%.3e", r.relative()) << "  tol=" << fmt("%.1e", row.tolerance) << "  ["
       << resolution_text(r.resolution) << "]";
    if (r.lhs && r.rhs) os << "  lhs=" << fmt("%.6e", *r.lhs) << " rhs=" << fmt("%.6e", *r.rhs);
    if (!r.flag.empty()) os << "  (" << r.flag << ")";
    os << "\n";
}

template <class F>
int guarded(const Context& ctx, F body) {
    try {
        return body();
    } catch (const Error& e) {
        ctx.err << "error: " << e.what() << "\n";
    } catch (const std::exception& e) {
        ctx.err << "error: " << e.what() << "\n";
    }
    return kExitInput;
}

// Command-line paths win; paths named in the scenario are relative to its file.
OutputPaths resolve(const Scenario& sc, const OutputPaths& paths) {
    const auto from_scenario = [&](const std::optional<std::string>& p) -> std::optional<std::string> {
        if (!p) return std::nullopt;
        const std::filesystem::path path(*p);
        if (path.is_absolute()) return *p;
        return (std::filesystem::path(sc.source).parent_path() / path).string();
    };
    return {paths.csv ? paths.csv : from_scenario(sc.csv), paths.plot ? paths.plot : from_scenario(sc.plot)};
}

}  // namespace

unsigned threads_from_env() {
    const char* v = std::getenv("CURVINT_THREADS");
    if (v == nullptr || *v == '\0') return std::max(1u, std::thread::hardware_concurrency());
    char* end = nullptr;
    const long t = std::strtol(v, &end, 10);
    if (*end != '\0' || t < 1 || t > 1024) {
        throw InvalidArgument(std::string("CURVINT_THREADS must be an integer in 1..1024, got '") + v + "'");
    }
    return static_cast<unsigned>(t);
}

int run(const std::string& scenario_path, const OutputPaths& paths, const Context& ctx) {
    return guarded(ctx, [&] {
        const Scenario sc = parse_scenario_file(scenario_path);
        const Report report = run_scenario(sc, {ctx.threads, 1});
        const OutputPaths out = resolve(sc, paths);
        if (out.csv) write_file_atomic(*out.csv, format_csv(report));
        if (out.plot) write_file_atomic(*out.plot, format_plot({report}));
        ctx.out << "scenario " << sc.name << "\n";
        for (const auto& row : report.rows) print_row(ctx.out, row);
        ctx.out << (report.pass ? "verdict: pass" : "verdict: fail") << "  (" << fmt("%.2f", report.wall) << " s)\n";
        return report.pass ? kExitPass : kExitFailure;
    });
}

std::optional<double> decay_order(const std::vector<Report>& levels, std::size_t row) {
    std::vector<double> above;
    for (const Report& level : levels) {
        const IdentityReport& r = level.rows.at(row).report;
        if (std::abs(r.residual) > 1e-12 * r.normalizer) above.push_back(std::abs(r.residual));
        else break;
    }
    if (above.size() < 2) return std::nullopt;
    return std::log2(above[above.size() - 2] / above.back());
}

int convergence(const std::string& scenario_path, int levels, const OutputPaths& paths, const Context& ctx) {
    return guarded(ctx, [&] {
        if (levels < 2) throw InvalidArgument("convergence needs at least 2 levels");
        const Scenario sc = parse_scenario_file(scenario_path);
        std::vector<Report> reports;
        for (int k = 0; k < levels; ++k) reports.push_back(run_scenario(sc, {ctx.threads, 1 << k}));

        ctx.out << "scenario " << sc.name << " convergence over " << levels << " levels\n";
        for (std::size_t row = 0; row < reports.front().rows.size(); ++row) {
            const IdentityReport& head = reports.front().rows[row].report;
            ctx.out << head.identity << " i=" << head.i << ":";
            for (const Report& r : reports) {
                ctx.out << "  " << resolution_text(r.rows[row].report.resolution) << " "
                        << fmt("%.3e", std::abs(r.rows[row].report.residual));
            }
            const auto order = decay_order(reports, row);
            ctx.out << "  order=" << (order ? fmt("%.2f", *order) : std::string("floor")) << "\n";
        }
        const OutputPaths out = resolve(sc, paths);
        if (out.csv) {
            std::string csv;
            for (std::size_t k = 0; k < reports.size(); ++k) {
                const std::string part = format_csv(reports[k]);
                csv += k == 0 ? part : part.substr(part.find('\n') + 1);
            }
            write_file_atomic(*out.csv, csv);
        }
        if (out.plot) write_file_atomic(*out.plot, format_plot(reports));
        const bool pass = reports.back().pass;
        ctx.out << (pass ? "verdict: pass" : "verdict: fail") << " at the finest level\n";
        return pass ? kExitPass : kExitFailure;
    });
}

int algebra(int nmax, bool perturb_convention, const Context& ctx) {
    return guarded(ctx, [&] {
        const auto t0 = std::chrono::steady_clock::now();
        const auto convention = perturb_convention ? ComposeConvention::unalternated : ComposeConvention::alternating;
        const auto checks = run_algebra_suite(nmax, convention);
        bool pass = true;
        for (const auto& c : checks) {
            if (!c.pass) {
                pass = false;
                ctx.out << "FAIL " << c.family << " n=" << c.n;
                if (c.i >= 0) ctx.out << " i=" << c.i;
                if (c.family == "dual_definition") ctx.out << "  (the two definitions of alpha_i disagree)";
                ctx.out << "\n";
            }
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        ctx.out << checks.size() << " exact checks for n <= " << nmax << ": " << (pass ? "pass" : "fail") << "  ("
                << fmt("%.2f", secs) << " s)\n";
        return pass ? kExitPass : kExitFailure;
    });
}

}  // namespace curvint::cli
