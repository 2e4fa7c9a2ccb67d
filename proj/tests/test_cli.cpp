#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "curvint/cli.hpp"
#include "curvint/scenario.hpp"

using namespace curvint;
namespace fs = std::filesystem;

namespace {

const fs::path kScenarios = CURVINT_SCENARIO_DIR;

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("curvint_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

Scenario parse(const std::string& text) {
    std::istringstream in(text);
    return parse_scenario(in, "inline");
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

int error_line(const std::string& text) {
    try {
        (void)parse(text);
    } catch (const ScenarioError& e) {
        return e.line();
    }
    return -1;
}

}  // namespace

TEST_CASE("parser reads every section") {
    const Scenario s = parse(R"(# comment
[ambient]
kind = euclidean
dimension = 4

[surface]
type = ellipsoid
axes = 1, 6/5 0.8, 1.1   # mixed separators
normal_sign = -1

[field]
base = 1/10 -1/5 0 1/4
v0 = 1 2 -1 1/2; 0 0 1 0

[checks]
minkowski = 0..2 @ 1e-6
flux = 1..3 @ 1e-8
umbilic = @ 1e-3

[quadrature]
resolution = 20 20 20

[output]
csv = out.csv
)");
    CHECK(s.ambient.dimension == 4);
    CHECK(s.surface.type == "ellipsoid");
    CHECK(s.surface.params.at("axes") == std::vector<double>{1.0, 1.2, 0.8, 1.1});
    CHECK(s.surface.normal_sign == -1);
    REQUIRE(s.field.base.has_value());
    CHECK((*s.field.base)(1) == -0.2);
    REQUIRE(s.field.v0.size() == 2);
    CHECK(s.field.v0[0](3) == 0.5);
    REQUIRE(s.checks.size() == 3);
    CHECK(s.checks[0].range == std::make_pair(0, 2));
    CHECK(s.checks[0].tolerance == 1e-6);
    CHECK(s.checks[0].line == 16);
    CHECK_FALSE(s.checks[2].range.has_value());
    CHECK(s.resolution == std::vector<int>{20, 20, 20});
    CHECK(s.csv.value() == "out.csv");
}

TEST_CASE("parse errors carry line numbers") {
    CHECK(error_line("[ambient]\nkind = euclid\n[checks]\nminkowski = @ 1e-8\n") == 2);
    CHECK(error_line("[ambient]\nkind = euclidean\n\n[checks]\nminkowski = 0..1 @ 0\n") == 5);
    CHECK(error_line("[ambient]\nkind = euclidean\n[checks]\nbogus = @ 1e-8\n") == 4);
    CHECK(error_line("[ambient]\nkind = euclidean\nkind = sphere\n[checks]\nminkowski = @ 1\n") == 3);
    CHECK(error_line("[nowhere]\n") == 1);
    CHECK(error_line("[surface]\naxes = 1 2/0 3\n[checks]\nminkowski = @ 1\n") == 2);
    CHECK(error_line("[quadrature]\nresolution = 2 64\n[checks]\nminkowski = @ 1\n") == 2);
    CHECK(error_line("key without section\n") == 1);
    CHECK_THROWS_AS(parse("[ambient]\nkind = euclidean\n"), ScenarioError);
    try {
        (void)parse("[ambient]\nkind = euclid\n");
    } catch (const ScenarioError& e) {
        CHECK(std::string(e.what()).rfind("inline:2:", 0) == 0);
    }
}

TEST_CASE("every bundled scenario parses and builds") {
    int count = 0;
    for (const auto& entry : fs::directory_iterator(kScenarios)) {
        if (entry.path().extension() != ".scn") continue;
        ++count;
        CAPTURE(entry.path().string());
        const Scenario s = parse_scenario_file(entry.path());
        CHECK_FALSE(s.checks.empty());
        CHECK_NOTHROW((void)build_setup(s));
    }
    CHECK(count >= 10);
}

TEST_CASE("run writes a CSV and returns 0 on pass") {
    TempDir tmp;
    std::ostringstream out, err;
    const cli::Context ctx{out, err, 1};
    const fs::path csv = tmp.path / "torus.csv";
    CHECK(cli::run((kScenarios / "torus_minkowski.scn").string(), {csv.string(), std::nullopt}, ctx) == cli::kExitPass);
    const std::string text = slurp(csv);
    CHECK(text.rfind("identity,i,residual,normalizer,relative,tolerance,resolution,verdict\n", 0) == 0);
    CHECK(text.find("minkowski,0,") != std::string::npos);
    CHECK(text.find("minkowski,1,") != std::string::npos);
    CHECK(text.find("128x128") != std::string::npos);
    CHECK(text.find(",fail") == std::string::npos);
    CHECK(out.str().find("verdict: pass") != std::string::npos);
}

TEST_CASE("the latitude sphere scenario compares H_i with the closed form") {
    std::ostringstream out, err;
    CHECK(cli::run((kScenarios / "s3_latitude.scn").string(), {}, {out, err, 1}) == cli::kExitPass);
    CHECK(out.str().find("closed_form_h i=2") != std::string::npos);
    CHECK(out.str().find("rhs=3.333333e-01") != std::string::npos);
}

TEST_CASE("CSV output does not depend on the thread count") {
    TempDir tmp;
    std::ostringstream out, err;
    for (const char* name : {"ellipsoid_minkowski.scn", "torus_katsurada.scn"}) {
        const fs::path a = tmp.path / "a.csv", b = tmp.path / "b.csv";
        REQUIRE(cli::run((kScenarios / name).string(), {a.string(), std::nullopt}, {out, err, 1}) == 0);
        REQUIRE(cli::run((kScenarios / name).string(), {b.string(), std::nullopt}, {out, err, 4}) == 0);
        CHECK(slurp(a) == slurp(b));
    }
}

TEST_CASE("malformed scenario exits 1 without writing a CSV") {
    TempDir tmp;
    const fs::path scn = tmp.path / "bad.scn", csv = tmp.path / "bad.csv";
    write(scn, "[ambient]\nkind = euclidean\n[surface]\ntype = torus\nmajor = 2\nminor = 3\n[checks]\nminkowski = @ 1e-8\n");
    std::ostringstream out, err;
    CHECK(cli::run(scn.string(), {csv.string(), std::nullopt}, {out, err, 1}) == cli::kExitInput);
    CHECK_FALSE(fs::exists(csv));
    CHECK_FALSE(err.str().empty());

    write(scn, "[ambient\n");
    CHECK(cli::run(scn.string(), {csv.string(), std::nullopt}, {out, err, 1}) == cli::kExitInput);
    CHECK(err.str().find("bad.scn:1:") != std::string::npos);
    CHECK_FALSE(fs::exists(csv));
    CHECK(cli::run((tmp.path / "missing.scn").string(), {}, {out, err, 1}) == cli::kExitInput);
}

TEST_CASE("an identity failure exits 2 and still writes the report") {
    TempDir tmp;
    const fs::path scn = tmp.path / "coarse.scn", csv = tmp.path / "coarse.csv";
    write(scn, "[ambient]\nkind = euclidean\n[surface]\ntype = ellipsoid\naxes = 1 1.3 0.7\n"
               "[checks]\nminkowski = 0 @ 1e-12\n[quadrature]\nresolution = 8 8\n");
    std::ostringstream out, err;
    CHECK(cli::run(scn.string(), {csv.string(), std::nullopt}, {out, err, 1}) == cli::kExitFailure);
    CHECK(slurp(csv).find(",fail") != std::string::npos);
    CHECK(out.str().find("verdict: fail") != std::string::npos);
}

TEST_CASE("output paths in the scenario resolve against its directory") {
    TempDir tmp;
    const fs::path scn = tmp.path / "with_output.scn";
    write(scn, "[ambient]\nkind = euclidean\n[surface]\ntype = sphere\nradius = 1\n"
               "[checks]\nminkowski = @ 1e-10\n[quadrature]\nresolution = 8 8\n[output]\ncsv = here.csv\n");
    std::ostringstream out, err;
    CHECK(cli::run(scn.string(), {}, {out, err, 1}) == 0);
    CHECK(fs::exists(tmp.path / "here.csv"));
}

TEST_CASE("algebra command") {
    std::ostringstream out, err;
    CHECK(cli::algebra(4, false, {out, err, 1}) == cli::kExitPass);
    CHECK(out.str().find("pass") != std::string::npos);
    std::ostringstream bad;
    CHECK(cli::algebra(2, true, {bad, err, 1}) == cli::kExitFailure);
    CHECK(bad.str().find("FAIL dual_definition") != std::string::npos);
    CHECK(cli::algebra(7, false, {out, err, 1}) == cli::kExitInput);
}

TEST_CASE("convergence command") {
    TempDir tmp;
    std::ostringstream out, err;
    const fs::path plot = tmp.path / "plot.txt", csv = tmp.path / "conv.csv";
    CHECK(cli::convergence((kScenarios / "sphere_minkowski.scn").string(), 2, {csv.string(), plot.string()},
                           {out, err, 1}) == cli::kExitPass);
    CHECK(out.str().find("order=floor") != std::string::npos);
    const std::string p = slurp(plot);
    CHECK(p.find("# minkowski i=0") != std::string::npos);
    CHECK(p.find("1024 ") != std::string::npos);
    CHECK(p.find("4096 ") != std::string::npos);

    // The ellipsoid decays fast before reaching the floor.
    const fs::path scn = tmp.path / "ell.scn";
    write(scn, "[ambient]\nkind = euclidean\n[surface]\ntype = ellipsoid\naxes = 1 1.3 0.7\n"
               "[checks]\nminkowski = 0..1 @ 1e-6\n[quadrature]\nresolution = 8 8\n");
    std::ostringstream o2;
    CHECK(cli::convergence(scn.string(), 3, {}, {o2, err, 1}) == cli::kExitPass);
    CHECK(o2.str().find("order=") != std::string::npos);
    CHECK(o2.str().find("order=floor") == std::string::npos);
    CHECK(cli::convergence(scn.string(), 1, {}, {o2, err, 1}) == cli::kExitInput);
}

TEST_CASE("decay order") {
    Scenario s = parse("[ambient]\nkind = euclidean\n[surface]\ntype = ellipsoid\naxes = 1 1.3 0.7\n"
                       "[checks]\nminkowski = 0 @ 1e-6\n[quadrature]\nresolution = 8 8\n");
    std::vector<Report> levels;
    for (int scale : {1, 2}) levels.push_back(run_scenario(s, {1, scale}));
    const auto order = cli::decay_order(levels, 0);
    REQUIRE(order.has_value());
    CHECK(*order > 2.0);
}

TEST_CASE("thread count from the environment") {
    ::setenv("CURVINT_THREADS", "3", 1);
    CHECK(cli::threads_from_env() == 3);
    ::setenv("CURVINT_THREADS", "zero", 1);
    CHECK_THROWS_AS(cli::threads_from_env(), InvalidArgument);
    ::unsetenv("CURVINT_THREADS");
    CHECK(cli::threads_from_env() >= 1);
}
