#include <CLI11.hpp>

#include <iostream>

#include "curvint/cli.hpp"
#include "curvint/framealgebra.hpp"

int main(int argc, char** argv) {
    using namespace curvint;
    CLI::App app{"curvint: verification of Hsiung-Minkowski and Katsurada integral identities"};
    app.require_subcommand(1);

    std::string scenario;
    cli::OutputPaths paths;
    int levels = 3;
    int nmax = 4;
    bool perturb = false;

    auto* run = app.add_subcommand("run", "run every check of a scenario");
    run->add_option("scenario", scenario, "scenario file")->required();
    run->add_option("--csv", paths.csv, "CSV report path");
    run->add_option("--plot", paths.plot, "plot data path");

    auto* conv = app.add_subcommand("convergence", "re-run a scenario at doubled resolutions");
    conv->add_option("scenario", scenario, "scenario file")->required();
    conv->add_option("--levels", levels, "number of resolution levels")->check(CLI::Range(2, 8));
    conv->add_option("--csv", paths.csv, "CSV report path");
    conv->add_option("--plot", paths.plot, "plot data path");

    auto* alg = app.add_subcommand("algebra", "exact exterior-algebra suite");
    alg->add_option("--nmax", nmax, "largest n")->check(CLI::Range(2, kMaxAlgebraN));
    alg->add_flag("--perturb-convention", perturb, "use an unalternated composition (negative control)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cli::kExitInput;
    }

    unsigned threads = 1;
    try {
        threads = cli::threads_from_env();
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return cli::kExitInput;
    }
    const cli::Context ctx{std::cout, std::cerr, threads};
    if (*run) return cli::run(scenario, paths, ctx);
    if (*conv) return cli::convergence(scenario, levels, paths, ctx);
    return cli::algebra(nmax, perturb, ctx);
}
