#include "curvint/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace curvint {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    return s;
}

std::vector<std::string> split(const std::string& s, const std::string& seps) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (seps.find(ch) != std::string::npos) {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

struct Entry {
    std::string value;
    int line;
};

class Reader {
public:
    Reader(std::string source) : source_(std::move(source)) {}

    [[noreturn]] void fail(int line, const std::string& msg) const { throw ScenarioError(source_, line, msg); }

    double number(const std::string& token, int line) const {
        const auto slash = token.find('/');
        if (slash != std::string::npos) {
            const double p = plain(token.substr(0, slash), line);
            const double q = plain(token.substr(slash + 1), line);
            if (q == 0.0) fail(line, "zero denominator in '" + token + "'");
            return p / q;
        }
        return plain(token, line);
    }

    int integer(const std::string& token, int line) const {
        int v = 0;
        const auto* end = token.data() + token.size();
        const auto [ptr, ec] = std::from_chars(token.data(), end, v);
        if (ec != std::errc() || ptr != end) fail(line, "expected an integer, got '" + token + "'");
        return v;
    }

    std::vector<double> list(const std::string& value, int line) const {
        std::vector<double> out;
        for (const auto& tok : split(value, " \t,")) out.push_back(number(tok, line));
        if (out.empty()) fail(line, "expected a list of numbers");
        return out;
    }

    double scalar(const std::string& value, int line) const {
        const auto v = list(value, line);
        if (v.size() != 1) fail(line, "expected a single number");
        return v[0];
    }

    Mat matrix(const std::string& value, int line) const {
        std::vector<std::vector<double>> rows;
        for (const auto& r : split(value, ";")) {
            if (trim(r).empty()) continue;
            rows.push_back(list(r, line));
        }
        if (rows.empty()) fail(line, "expected matrix rows separated by ';'");
        Mat m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != rows[0].size()) fail(line, "matrix rows have different lengths");
            for (std::size_t j = 0; j < rows[i].size(); ++j) {
                m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
            }
        }
        return m;
    }

    const std::string& source() const { return source_; }

private:
    double plain(const std::string& token, int line) const {
        const std::string t = trim(token);
        double v = 0.0;
        const auto* end = t.data() + t.size();
        const auto [ptr, ec] = std::from_chars(t.data(), end, v);
        if (t.empty() || ec != std::errc() || ptr != end || !std::isfinite(v)) {
            fail(line, "expected a number, got '" + token + "'");
        }
        return v;
    }

    std::string source_;
};

Vec to_vec(const std::vector<double>& v) {
    return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

const std::set<std::string> kCheckNames = {"minkowski",   "spaceform",     "flux",     "katsurada", "katsurada_ratio",
                                           "closed_form_h", "umbilic", "position_law", "killing"};

void parse_check(const Reader& rd, Scenario& sc, const std::string& name, const std::string& value, int line) {
    if (!kCheckNames.contains(name)) rd.fail(line, "unknown check '" + name + "'");
    const auto at = value.find('@');
    if (at == std::string::npos) rd.fail(line, "check needs a tolerance: '" + name + " = lo..hi @ tol'");
    CheckSpec c;
    c.name = name;
    c.line = line;
    c.tolerance = rd.scalar(trim(value.substr(at + 1)), line);
    if (!(c.tolerance > 0.0)) rd.fail(line, "tolerance must be positive");
    const std::string range = trim(value.substr(0, at));
    if (!range.empty()) {
        const auto dots = range.find("..");
        if (dots == std::string::npos) {
            const int i = rd.integer(range, line);
            c.range = {i, i};
        } else {
            const int lo = rd.integer(trim(range.substr(0, dots)), line);
            const int hi = rd.integer(trim(range.substr(dots + 2)), line);
            if (hi < lo) rd.fail(line, "empty index range");
            c.range = {lo, hi};
        }
    }
    sc.checks.push_back(c);
}

ModelKind parse_kind(const Reader& rd, const std::string& v, int line) {
    const std::string k = lower(v);
    if (k == "euclidean") return ModelKind::euclidean;
    if (k == "sphere") return ModelKind::sphere;
    if (k == "hyperboloid" || k == "hyperbolic") return ModelKind::hyperboloid;
    if (k == "warped" || k == "warped-product") return ModelKind::warped_product;
    rd.fail(line, "unknown ambient kind '" + v + "'");
}

void parse_entry(const Reader& rd, Scenario& sc, const std::string& section, const std::string& key,
                 const std::string& value, int line) {
    if (section == "ambient") {
        if (key == "kind") {
            sc.ambient.kind = parse_kind(rd, value, line);
        } else if (key == "dimension") {
            sc.ambient.dimension = rd.integer(value, line);
        } else if (key == "radius") {
            sc.ambient.radius = rd.scalar(value, line);
        } else if (key == "curvature") {
            sc.ambient.curvature = rd.scalar(value, line);
        } else if (key == "warp") {
            const auto parts = split(value, " \t");
            if (parts.empty()) rd.fail(line, "empty warp specification");
            const std::string rest = trim(value.substr(value.find(parts[0]) + parts[0].size()));
            if (lower(parts[0]) == "polynomial") {
                sc.ambient.warp_polynomial = rd.list(rest, line);
            } else if (lower(parts[0]) == "space-form") {
                sc.ambient.warp_space_form = rd.scalar(rest, line);
            } else {
                rd.fail(line, "warp must be 'polynomial <coeffs>' or 'space-form <c>'");
            }
        } else {
            rd.fail(line, "unknown key '" + key + "' in [ambient]");
        }
    } else if (section == "surface") {
        if (key == "type") {
            sc.surface.type = lower(value);
        } else if (key == "normal_sign") {
            const int s = rd.integer(value, line);
            if (s != 1 && s != -1) rd.fail(line, "normal_sign must be 1 or -1");
            sc.surface.normal_sign = s;
        } else {
            sc.surface.params[key] = rd.list(value, line);
        }
    } else if (section == "field") {
        if (key == "base") {
            sc.field.base = to_vec(rd.list(value, line));
        } else if (key == "v0") {
            for (const auto& row : split(value, ";")) sc.field.v0.push_back(to_vec(rd.list(row, line)));
        } else if (key == "rotation" || key == "omega") {
            sc.field.omega = rd.matrix(value, line);
        } else if (key == "translation") {
            sc.field.translation = to_vec(rd.list(value, line));
        } else {
            rd.fail(line, "unknown key '" + key + "' in [field]");
        }
    } else if (section == "checks") {
        parse_check(rd, sc, key, value, line);
    } else if (section == "quadrature") {
        if (key != "resolution") rd.fail(line, "unknown key '" + key + "' in [quadrature]");
        sc.resolution.clear();
        for (const auto& tok : split(value, " \t,x")) {
            const int r = rd.integer(tok, line);
            if (r < kMinResolution || r > kMaxResolution) {
                rd.fail(line, "resolution " + tok + " outside " + std::to_string(kMinResolution) + ".." +
                                  std::to_string(kMaxResolution));
            }
            sc.resolution.push_back(r);
        }
        if (sc.resolution.empty()) rd.fail(line, "empty resolution");
    } else if (section == "output") {
        if (key == "csv") {
            sc.csv = value;
        } else if (key == "plot") {
            sc.plot = value;
        } else {
            rd.fail(line, "unknown key '" + key + "' in [output]");
        }
    } else {
        rd.fail(line, "entry outside a known section");
    }
}

const std::set<std::string> kSections = {"ambient", "surface", "field", "checks", "quadrature", "output"};

}  // namespace

ScenarioError::ScenarioError(const std::string& source, int line, const std::string& message)
    : InvalidArgument(source + ":" + std::to_string(line) + ": " + message), line_(line) {}

Scenario parse_scenario(std::istream& in, const std::string& source) {
    Reader rd(source);
    Scenario sc;
    sc.source = source;
    sc.name = std::filesystem::path(source).stem().string();
    std::string section;
    std::set<std::string> seen_keys;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (text.empty()) continue;
        if (text.front() == '[') {
            if (text.back() != ']') rd.fail(line, "unterminated section header");
            section = lower(trim(text.substr(1, text.size() - 2)));
            if (!kSections.contains(section)) rd.fail(line, "unknown section [" + section + "]");
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string::npos) rd.fail(line, "expected 'key = value'");
        const std::string key = lower(trim(text.substr(0, eq)));
        const std::string value = trim(text.substr(eq + 1));
        if (key.empty()) rd.fail(line, "missing key");
        if (value.empty()) rd.fail(line, "missing value for '" + key + "'");
        if (section.empty()) rd.fail(line, "entry before any section header");
        if (!seen_keys.insert(section + "." + key).second) rd.fail(line, "duplicate key '" + key + "'");
        parse_entry(rd, sc, section, key, value, line);
    }
    if (sc.checks.empty()) rd.fail(line, "scenario declares no checks");
    return sc;
}

Scenario parse_scenario_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open scenario '" + path.string() + "'");
    return parse_scenario(in, path.string());
}

// ---------------------------------------------------------------------------

namespace {

AmbientModel build_model(const Scenario& sc) {
    const auto& a = sc.ambient;
    if (a.dimension < 2 || a.dimension > 7) throw InvalidArgument("ambient dimension must lie in 2..7");
    auto radius = [&]() {
        double R = a.radius.value_or(1.0);
        if (a.curvature) {
            if (*a.curvature == 0.0) throw InvalidArgument("curvature 0 needs a Euclidean ambient");
            const double Rc = 1.0 / std::sqrt(std::abs(*a.curvature));
            if (a.radius && std::abs(*a.radius - Rc) > 1e-12 * Rc) {
                throw InvalidArgument("ambient radius and curvature disagree");
            }
            R = Rc;
        }
        if (!(R > 0.0)) throw InvalidArgument("ambient radius must be positive");
        return R;
    };
    switch (a.kind) {
        case ModelKind::euclidean:
            if (a.curvature && *a.curvature != 0.0) throw InvalidArgument("Euclidean ambient has curvature 0");
            return AmbientModel::euclidean(a.dimension);
        case ModelKind::sphere:
            if (a.curvature && *a.curvature < 0.0) throw InvalidArgument("sphere needs positive curvature");
            return AmbientModel::sphere(a.dimension, radius());
        case ModelKind::hyperboloid:
            if (a.curvature && *a.curvature > 0.0) throw InvalidArgument("hyperboloid needs negative curvature");
            return AmbientModel::hyperboloid(a.dimension, radius());
        case ModelKind::warped_product:
            if (a.warp_space_form) return AmbientModel::warped(a.dimension, Warp::space_form(*a.warp_space_form));
            if (a.warp_polynomial.empty()) throw InvalidArgument("warped ambient needs a warp specification");
            return AmbientModel::warped(a.dimension, Warp::polynomial(a.warp_polynomial));
    }
    throw InvalidArgument("unsupported ambient");
}

double param(const Scenario::Surface& s, const std::string& key, std::optional<double> fallback = std::nullopt) {
    const auto it = s.params.find(key);
    if (it == s.params.end()) {
        if (fallback) return *fallback;
        throw InvalidArgument("surface '" + s.type + "' needs parameter '" + key + "'");
    }
    if (it->second.size() != 1) throw InvalidArgument("surface parameter '" + key + "' must be a single number");
    return it->second[0];
}

void require_params(const Scenario::Surface& s, std::set<std::string> allowed) {
    for (const auto& [k, v] : s.params) {
        if (!allowed.contains(k)) throw InvalidArgument("surface '" + s.type + "' has no parameter '" + k + "'");
    }
}

NamedSurface build_surface(const Scenario::Surface& s, const AmbientModel& model) {
    const int n = model.dim() - 1;
    auto require_euclidean = [&]() {
        if (model.kind() != ModelKind::euclidean) throw InvalidArgument("surface '" + s.type + "' needs a Euclidean ambient");
    };
    NamedSurface out = [&]() -> NamedSurface {
        if (s.type == "sphere") {
            require_euclidean();
            require_params(s, {"radius", "center"});
            Vec center = Vec::Zero(n + 1);
            if (const auto it = s.params.find("center"); it != s.params.end()) {
                if (static_cast<int>(it->second.size()) != n + 1) throw InvalidArgument("sphere center has wrong dimension");
                center = to_vec(it->second);
            }
            return sphere_surface(n, param(s, "radius", 1.0), center);
        }
        if (s.type == "torus") {
            require_euclidean();
            require_params(s, {"major", "minor"});
            if (n != 2) throw InvalidArgument("torus needs a 3-dimensional ambient");
            return torus_surface(param(s, "major"), param(s, "minor"));
        }
        if (s.type == "ellipsoid") {
            require_euclidean();
            require_params(s, {"axes"});
            const auto it = s.params.find("axes");
            if (it == s.params.end() || static_cast<int>(it->second.size()) != n + 1) {
                throw InvalidArgument("ellipsoid needs " + std::to_string(n + 1) + " semi-axes");
            }
            return ellipsoid_surface(it->second);
        }
        if (s.type == "geodesic-sphere") {
            require_params(s, {"rho"});
            return geodesic_sphere(model, param(s, "rho"));
        }
        if (s.type == "latitude-sphere" || s.type == "latitude-sphere-in-s3") {
            require_params(s, {"t"});
            if (model.kind() != ModelKind::sphere) throw InvalidArgument("latitude sphere needs a sphere ambient");
            if (s.type == "latitude-sphere-in-s3" && model.dim() != 3) {
                throw InvalidArgument("latitude-sphere-in-S3 needs ambient dimension 3");
            }
            return latitude_sphere(n, model.radius(), param(s, "t"));
        }
        throw InvalidArgument("unknown surface type '" + s.type + "'");
    }();
    if (s.normal_sign == -1) {
        out.surface = out.surface.flipped();
        if (out.umbilic_curvature) out.umbilic_curvature = -*out.umbilic_curvature;
    }
    return out;
}

}  // namespace

ScenarioSetup build_setup(const Scenario& sc) {
    AmbientModel model = build_model(sc);
    std::optional<NamedSurface> surface;
    if (!sc.surface.type.empty()) surface = build_surface(sc.surface, model);

    AmbientPoint base = model.origin();
    if (sc.field.base) {
        if (sc.field.base->size() != model.coord_dim()) throw InvalidArgument("field base has wrong dimension");
        base = {*sc.field.base};
        model.require_member(base);
    }
    for (const Vec& v : sc.field.v0) {
        if (v.size() != model.coord_dim()) throw InvalidArgument("field v0 has wrong dimension");
    }
    std::optional<VectorField> killing;
    if (sc.field.omega || sc.field.translation) {
        const int N = model.coord_dim();
        KillingGenerator g{sc.field.omega.value_or(Mat::Zero(N, N)), sc.field.translation.value_or(Vec())};
        killing = killing_field(model, g);
    }
    return {model, surface, base, killing};
}

// ---------------------------------------------------------------------------

namespace {

std::pair<int, int> default_range(const std::string& name, int n) {
    if (name == "minkowski" || name == "spaceform") return {0, n - 1};
    if (name == "flux") return {1, n};
    if (name == "katsurada_ratio") return {1, n - 1};
    return {0, n};
}

}  // namespace

Report run_scenario(const Scenario& sc, const RunOptions& options) {
    const auto t0 = std::chrono::steady_clock::now();
    const ScenarioSetup setup = build_setup(sc);
    const EvalOptions eval{options.threads};
    Report report;
    report.scenario = sc.name;

    std::optional<GridRule> grid;
    if (setup.surface) {
        const auto& domain = setup.surface->surface.chart.domain;
        std::vector<int> res = sc.resolution;
        if (res.empty()) res.assign(domain.size(), kDefaultResolution);
        if (res.size() == 1) res.assign(domain.size(), res[0]);
        if (res.size() != domain.size()) {
            throw InvalidArgument("quadrature resolution needs " + std::to_string(domain.size()) + " entries");
        }
        for (int& r : res) {
            r *= options.scale;
            if (r > kMaxResolution) throw InvalidArgument("scaled resolution exceeds " + std::to_string(kMaxResolution));
        }
        grid = build_grid(domain, res);
    }

    auto need_surface = [&](const CheckSpec& c) -> const Hypersurface& {
        if (!setup.surface) {
            throw ScenarioError(sc.source, c.line, "check '" + c.name + "' needs a [surface] section");
        }
        return setup.surface->surface;
    };
    auto need_killing = [&](const CheckSpec& c) -> const VectorField& {
        if (!setup.killing) throw ScenarioError(sc.source, c.line, "check '" + c.name + "' needs a Killing generator");
        return *setup.killing;
    };
    auto add = [&](IdentityReport r, double tol) {
        const bool pass = r.passes(tol);
        report.pass = report.pass && pass;
        report.rows.push_back({std::move(r), tol, pass});
    };

    for (const CheckSpec& c : sc.checks) {
        if (c.name == "position_law") {
            add(position_law(setup.model, setup.base, kLawSamples, 20260101), c.tolerance);
            continue;
        }
        if (c.name == "killing") {
            add(killing_check(setup.model, need_killing(c), kLawSamples, 20260102), c.tolerance);
            continue;
        }
        const Hypersurface& s = need_surface(c);
        const int n = s.dim();
        if (c.name == "umbilic") {
            add(umbilic_residual(s, *grid, setup.surface->umbilic_curvature, eval), c.tolerance);
            continue;
        }
        const auto [lo, hi] = c.range.value_or(default_range(c.name, n));
        for (int i = lo; i <= hi; ++i) {
            if (c.name == "minkowski") {
                const AmbientPoint base = sc.field.base ? setup.base : AmbientPoint{Vec::Zero(setup.model.coord_dim())};
                add(minkowski_residual(s, *grid, base, i, eval), c.tolerance);
            } else if (c.name == "spaceform") {
                add(spaceform_residual(s, *grid, setup.base, i, eval), c.tolerance);
            } else if (c.name == "flux") {
                if (sc.field.v0.empty()) throw ScenarioError(sc.source, c.line, "check 'flux' needs field v0");
                for (std::size_t k = 0; k < sc.field.v0.size(); ++k) {
                    IdentityReport r = flux_residual(s, *grid, sc.field.v0[k], i, eval);
                    r.identity = "flux/v0_" + std::to_string(k + 1);
                    add(std::move(r), c.tolerance);
                }
            } else if (c.name == "katsurada") {
                add(katsurada_residual(s, *grid, need_killing(c), i, eval), c.tolerance);
            } else if (c.name == "katsurada_ratio") {
                add(katsurada_ratio(s, *grid, need_killing(c), i, eval), c.tolerance);
            } else if (c.name == "closed_form_h") {
                if (!setup.surface->umbilic_curvature) {
                    throw ScenarioError(sc.source, c.line, "closed_form_h needs a surface with known umbilic curvature");
                }
                add(closed_form_mean_curvature(s, *grid, *setup.surface->umbilic_curvature, i, eval), c.tolerance);
            }
        }
    }
    report.wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

namespace {

std::string sci(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12e", v);
    return buf;
}

std::string resolution_text(const std::vector<int>& r) {
    std::string s;
    for (std::size_t k = 0; k < r.size(); ++k) s += (k ? "x" : "") + std::to_string(r[k]);
    return s;
}

}  // namespace

std::string format_csv(const Report& report) {
    std::string out = "identity,i,residual,normalizer,relative,tolerance,resolution,verdict\n";
    for (const auto& row : report.rows) {
        const IdentityReport& r = row.report;
        out += r.identity + "," + std::to_string(r.i) + "," + sci(r.residual) + "," + sci(r.normalizer) + "," +
               sci(r.relative()) + "," + sci(row.tolerance) + "," + resolution_text(r.resolution) + "," +
               (row.pass ? "pass" : "fail") + "\n";
    }
    return out;
}

std::string format_plot(const std::vector<Report>& levels) {
    if (levels.empty()) return {};
    std::string out;
    for (std::size_t k = 0; k < levels.front().rows.size(); ++k) {
        const IdentityReport& head = levels.front().rows[k].report;
        out += "# " + head.identity + " i=" + std::to_string(head.i) + "\n";
        for (const Report& level : levels) {
            const IdentityReport& r = level.rows.at(k).report;
            long nodes = 1;
            for (int v : r.resolution) nodes *= v;
            out += std::to_string(nodes) + " " + sci(std::abs(r.residual)) + "\n";
        }
        out += "\n\n";
    }
    return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InvalidArgument("cannot write '" + tmp.string() + "'");
        out << content;
        if (!out.flush()) throw InvalidArgument("failed writing '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw InvalidArgument("cannot rename into '" + path.string() + "': " + ec.message());
    }
}

}  // namespace curvint
