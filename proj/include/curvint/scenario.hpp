#pragma once

// Scenario files: line-oriented `[section]` blocks of `key = value` pairs
// with `#` comments. Numbers may be written as rationals p/q. Lists are
// whitespace or comma separated; matrix rows are separated by `;`.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "curvint/identities.hpp"
#include "curvint/immersion.hpp"
#include "curvint/spaceform.hpp"

namespace curvint {

// Input error with a source location.
class ScenarioError : public InvalidArgument {
public:
    ScenarioError(const std::string& source, int line, const std::string& message);
    [[nodiscard]] int line() const { return line_; }

private:
    int line_;
};

struct CheckSpec {
    std::string name;
    std::optional<std::pair<int, int>> range;
    double tolerance = 0.0;
    int line = 0;
};

struct Scenario {
    std::string name;
    std::string source;

    struct Ambient {
        ModelKind kind = ModelKind::euclidean;
        int dimension = 3;
        std::optional<double> radius;
        std::optional<double> curvature;
        std::vector<double> warp_polynomial;
        std::optional<double> warp_space_form;
    } ambient;

    struct Surface {
        std::string type;  // empty when the scenario has no surface
        std::map<std::string, std::vector<double>> params;
        int normal_sign = 1;
    } surface;

    struct Field {
        std::optional<Vec> base;
        std::vector<Vec> v0;
        std::optional<Mat> omega;
        std::optional<Vec> translation;
    } field;

    std::vector<CheckSpec> checks;
    std::vector<int> resolution;  // empty: default per axis
    std::optional<std::string> csv;
    std::optional<std::string> plot;
};

Scenario parse_scenario(std::istream& in, const std::string& source);
Scenario parse_scenario_file(const std::filesystem::path& path);

// Everything a scenario needs at run time.
struct ScenarioSetup {
    AmbientModel model;
    std::optional<NamedSurface> surface;
    AmbientPoint base;
    std::optional<VectorField> killing;
};

ScenarioSetup build_setup(const Scenario& scenario);

inline constexpr int kDefaultResolution = 64;
inline constexpr int kMaxResolution = 4096;
inline constexpr int kLawSamples = 100;

struct ReportRow {
    IdentityReport report;
    double tolerance = 0.0;
    bool pass = false;
};

struct Report {
    std::string scenario;
    std::vector<ReportRow> rows;
    bool pass = true;
    double wall = 0.0;  // seconds
};

struct RunOptions {
    unsigned threads = 1;
    int scale = 1;  // multiplies every axis resolution
};

Report run_scenario(const Scenario& scenario, const RunOptions& options = {});

std::string format_csv(const Report& report);
// Blocks of `nodes |residual|` pairs, one block per check row.
std::string format_plot(const std::vector<Report>& levels);

// Writes through a temporary file in the same directory and renames it.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace curvint
