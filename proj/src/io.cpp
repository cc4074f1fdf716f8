#include "echoloc/io.hpp"

#include "echoloc/echo.hpp"
#include "echoloc/flat_spectrum.hpp"
#include "echoloc/loops.hpp"
#include "echoloc/trace.hpp"
#include "echoloc/window.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

namespace echoloc {

using json = nlohmann::ordered_json;

namespace {

std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view s, char sep)
{
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        parts.push_back(trim(s.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

// Quoted cells may hold commas; "" is a literal quote.
std::vector<std::string> split_csv_line(std::string_view line)
{
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false, was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch != '"') cell += ch;
            else if (i + 1 < line.size() && line[i + 1] == '"') cell += '"', ++i;
            else quoted = false;
        } else if (ch == '"') {
            quoted = was_quoted = true;
        } else if (ch == ',') {
            cells.push_back(was_quoted ? cell : trim(cell));
            cell.clear();
            was_quoted = false;
        } else {
            cell += ch;
        }
    }
    if (quoted) throw ConfigError("csv: unterminated quote in '" + std::string(line) + "'");
    cells.push_back(was_quoted ? cell : trim(cell));
    return cells;
}

double parse_double(const std::string& key, std::string_view text)
{
    const std::string t = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
        throw ConfigError("config key '" + key + "': not a number: '" + t + "'");
    return v;
}

std::vector<double> parse_list(const std::string& key, std::string_view text)
{
    std::string t(text);
    std::replace(t.begin(), t.end(), ',', ' ');
    std::istringstream in(t);
    std::vector<double> out;
    std::string item;
    while (in >> item) out.push_back(parse_double(key, item));
    return out;
}

/// "p; q; ..." where each item is two numbers.
std::vector<std::array<double, 2>> parse_pairs(const std::string& key, std::string_view text)
{
    std::vector<std::array<double, 2>> out;
    for (const auto& item : split(text, ';')) {
        if (item.empty()) continue;
        const auto v = parse_list(key, item);
        if (v.size() != 2) throw ConfigError("config key '" + key + "': expected two numbers per point, got '" + item + "'");
        out.push_back({v[0], v[1]});
    }
    return out;
}

json num(double v)
{
    if (!std::isfinite(v)) return nullptr;
    return std::stod(format_number(v));
}

json point_json(Point p) { return json::array({num(p.x1), num(p.x2)}); }
json point_json(HPoint p) { return json::array({num(p.re), num(p.im)}); }

std::string surface_label(const SurfaceConfig& s) { return s.name; }

Window window_from(const ConfigValues& v, Weight default_weight, bool need_r = true)
{
    if (need_r && !v.has("window.r")) throw ConfigError("window.r is required");
    const double r = v.number("window.r", 1.0);
    const double eps = v.number("window.eps", 0.2);
    const std::string profile = v.text("window.profile", "compact");
    const std::string weight = v.text("window.weight", std::string(to_string(default_weight)));
    Profile p;
    if (profile == "compact") p = Profile::CompactBump;
    else if (profile == "gaussian") p = Profile::GaussianBump;
    else throw ConfigError("window.profile must be compact or gaussian");
    Weight w;
    if (weight == "none") w = Weight::None;
    else if (weight == "sqrt_t") w = Weight::SqrtT;
    else if (weight == "sqrt_sinh") w = Weight::SqrtSinh;
    else throw ConfigError("window.weight must be none, sqrt_t or sqrt_sinh");
    try {
        return make_window(p, r, eps, w);
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
}

Point first_point(const ExperimentConfig& cfg) { return cfg.points.empty() ? Point{} : cfg.points.front(); }
HPoint first_hpoint(const ExperimentConfig& cfg) { return cfg.hpoints.empty() ? HPoint{} : cfg.hpoints.front(); }

// Each runner returns the text of its output file.

std::string run_spectrum(const ExperimentConfig& cfg)
{
    const auto& s = cfg.require_surface();
    if (!s.is_flat()) throw ConfigError("spectrum requires a flat surface");
    const double lambda_max = cfg.params.number("spectrum.lambda_max", 20.0);
    CsvTable table{{"family", "m", "n", "lambda", "multiplicity_in_level", "phase"}, {}};
    for (const auto& level : group_levels(flat_modes(s.flat(), lambda_max))) {
        for (const auto& mode : level.modes) {
            table.rows.push_back({std::string(to_string(mode.family)), std::to_string(mode.m), std::to_string(mode.n),
                format_number(mode.lambda), std::to_string(level.modes.size()), mode.phase == X1Phase::Cos ? "cos" : "sin"});
        }
    }
    return to_csv(table);
}

std::string run_weyl(const ExperimentConfig& cfg)
{
    const auto& s = cfg.require_surface();
    if (!s.is_flat()) throw ConfigError("weyl requires a flat surface");
    const double lambda_max = cfg.params.number("weyl.lambda_max", 20.0);
    const std::vector<Point> points = cfg.points.empty() ? std::vector<Point>{Point{}} : cfg.points;
    CsvTable table{{"point", "x1", "x2", "lambda", "N"}, {}};
    for (std::size_t i = 0; i < points.size(); ++i) {
        double running = 0.0;
        for (const auto& level : level_densities(s.flat(), points[i], lambda_max)) {
            running += level.density;
            table.rows.push_back({std::to_string(i), format_number(points[i].x1), format_number(points[i].x2),
                format_number(level.lambda), format_number(running)});
        }
    }
    return to_csv(table);
}

std::string run_heat(const ExperimentConfig& cfg)
{
    const auto& s = cfg.require_surface();
    if (!s.is_flat()) throw ConfigError("heat requires a flat surface");
    const double t_min = cfg.params.number("heat.t_min", 1e-3);
    const double t_max = cfg.params.number("heat.t_max", 1.0);
    const int samples = cfg.params.integer("heat.samples", 16);
    const double tol = cfg.params.number("heat.tol", 1e-6);
    if (!(t_min > 0.0) || !(t_max >= t_min) || samples < 1) throw ConfigError("heat: need 0 < t_min <= t_max and samples >= 1");
    const std::vector<Point> points = cfg.points.empty() ? std::vector<Point>{Point{}} : cfg.points;
    json out;
    out["surface"] = surface_label(s);
    const auto times = default_heat_times(s.flat());
    out["curvature_times"] = json::array({num(times[0]), num(times[1]), num(times[2])});
    json list = json::array();
    for (const auto& x : points) {
        json rec;
        rec["x"] = point_json(x);
        json sweep = json::array();
        for (int i = 0; i < samples; ++i) {
            const double t = samples == 1 ? t_min : t_min * std::pow(t_max / t_min, static_cast<double>(i) / (samples - 1));
            const TraceValue h = heat_trace(s.flat(), x, t);
            sweep.push_back({{"t", num(t)}, {"value", num(h.value.real())}, {"truncation_bound", num(h.truncation_bound)}});
        }
        rec["samples"] = sweep;
        const double k = curvature_estimate(s.flat(), x);
        rec["curvature_estimate"] = num(k);
        rec["classification"] = std::string(to_string(classify_curvature(k, tol)));
        list.push_back(rec);
    }
    out["points"] = list;
    return out.dump(2) + "\n";
}

std::string run_wavetrace(const ExperimentConfig& cfg)
{
    const auto& s = cfg.require_surface();
    if (!s.is_flat()) throw ConfigError("wavetrace requires a flat surface (no hyperbolic eigendata)");
    const Window w = window_from(cfg.params, Weight::SqrtT);
    const auto lambdas = cfg.params.numbers("wavetrace.lambdas", {100.0, 200.0, 400.0});
    const Point x = first_point(cfg);
    CsvTable table{{"lambda", "spectral_re", "spectral_im", "geometric_re", "geometric_im", "abs_error", "truncation_bound"}, {}};
    for (const double lambda : lambdas) {
        const TraceValue sp = smoothed_wave_spectral(s.flat(), x, lambda, w);
        const TraceValue ge = geometric_side_flat(deck_of(s.flat()), x, lambda, w);
        table.rows.push_back({format_number(lambda), format_number(sp.value.real()), format_number(sp.value.imag()),
            format_number(ge.value.real()), format_number(ge.value.imag()), format_number(std::abs(sp.value - ge.value)),
            format_number(sp.truncation_bound)});
    }
    return to_csv(table);
}

std::string run_loops(const ExperimentConfig& cfg)
{
    const auto& s = cfg.require_surface();
    const double R = cfg.params.number("loops.R", 5.0);
    LoopTable table;
    if (s.is_flat()) {
        table = looping_times(deck_of(s.flat()), first_point(cfg), R);
    } else {
        EnumerationOptions opts;
        opts.max_word_length = cfg.params.integer("loops.max_word_length", opts.max_word_length);
        table = looping_times(s.hyperbolic(), first_hpoint(cfg), R, opts);
    }
    CsvTable csv{{"r", "multiplicity", "word_example"}, {}};
    for (const auto& e : table.entries) csv.rows.push_back({format_number(e.length), std::to_string(e.multiplicity), e.words.front()});
    return to_csv(csv);
}

json detection_json(const DetectionResult& d)
{
    json rec;
    rec["r"] = num(d.r);
    rec["estimate"] = num(d.estimate);
    rec["lambda_max"] = num(d.lambda_max);
    rec["epsilon"] = num(d.epsilon);
    rec["converged"] = d.converged;
    json per = json::array();
    for (std::size_t i = 0; i < d.per_lambda.size(); ++i)
        per.push_back({{"lambda", num(d.lambdas[i])}, {"re", num(d.per_lambda[i].real())}, {"im", num(d.per_lambda[i].imag())}});
    rec["per_lambda"] = per;
    rec["warnings"] = d.warnings;
    return rec;
}

std::string run_detect(const ExperimentConfig& cfg)
{
    const auto& s = cfg.require_surface();
    const Weight default_weight = s.is_flat() ? Weight::SqrtT : Weight::SqrtSinh;
    const Window w = window_from(cfg.params, default_weight);
    const auto lambdas = cfg.params.numbers("detect.lambdas", {100.0, 200.0, 400.0, 800.0});
    DetectOptions opts;
    opts.profile = w.profile;
    opts.epsilon_halvings = cfg.params.integer("detect.epsilon_halvings", 0);
    std::vector<Window> windows;
    for (int i = 0; i <= opts.epsilon_halvings; ++i) windows.push_back(make_window(w.profile, w.center, std::ldexp(w.width, -i), w.weight));

    json out;
    out["surface"] = surface_label(s);
    json results = json::array();
    if (s.is_flat()) {
        const std::vector<Point> points = cfg.points.empty() ? std::vector<Point>{Point{}} : cfg.points;
        for (const auto& x : points) {
            const SpectralData data = exact_spectral_data(s.flat(), x, lambdas, windows);
            json rec = detection_json(detect_multiplicity(data, w.center, w.width, lambdas, w.weight, opts));
            rec["basepoint"] = point_json(x);
            results.push_back(rec);
        }
    } else {
        const std::vector<HPoint> points = cfg.hpoints.empty() ? std::vector<HPoint>{HPoint{}} : cfg.hpoints;
        for (const auto& x : points) {
            const SpectralData data = synthesize_spectral_from_geometric(s.hyperbolic(), x, lambdas, windows);
            json rec = detection_json(detect_multiplicity(data, w.center, w.width, lambdas, w.weight, opts));
            rec["basepoint"] = point_json(x);
            results.push_back(rec);
        }
    }
    out["results"] = results;
    return out.dump(2) + "\n";
}

std::string run_echolocate(const ExperimentConfig& cfg)
{
    const auto& s = cfg.require_surface();
    const auto* klein = std::get_if<FlatKleinSpec>(&s.spec);
    if (klein == nullptr) throw ConfigError("echolocate requires a Klein bottle");
    const KleinLevelModel model = klein_level_model(*klein);
    json out;
    out["surface"] = surface_label(s);
    out["level_lambda"] = num(model.lambda);
    out["offset"] = num(model.offset);
    out["scale"] = num(model.scale);
    out["degenerate"] = model.degenerate;
    json results = json::array();
    if (const auto value = cfg.params.number("echolocate.level_sum")) {
        results.push_back({{"level_sum", num(*value)}, {"recovered", point_json(klein_echolocate(*klein, *value))}});
    } else {
        const std::vector<Point> points = cfg.points.empty() ? std::vector<Point>{Point{}} : cfg.points;
        for (const auto& x : points) {
            const double v = level_sum(s.flat(), x, model.lambda);
            results.push_back({{"input", point_json(x)}, {"level_sum", num(v)}, {"recovered", point_json(klein_echolocate(*klein, v))},
                {"canonical", point_json(klein_canonicalize(x, *klein))}});
        }
    }
    out["results"] = results;
    return out.dump(2) + "\n";
}

std::string run_constancy(const ExperimentConfig& cfg)
{
    const auto& s = cfg.require_surface();
    if (!s.is_flat()) throw ConfigError("constancy requires a flat surface");
    const double lambda_max = cfg.params.number("constancy.lambda_max", 50.0);
    const ConstancyResult r = constancy_test(s.flat(), lambda_max, cfg.points);
    json out;
    out["surface"] = surface_label(s);
    out["lambda_max"] = num(lambda_max);
    out["constant"] = r.constant;
    if (r.constant) {
        out["witness_level"] = nullptr;
        out["points"] = json::array();
        out["values"] = json::array();
    } else {
        out["witness_level"] = num(r.witness_level);
        out["points"] = json::array({point_json(r.p), point_json(r.q)});
        out["values"] = json::array({num(r.value_p), num(r.value_q)});
    }
    return out.dump(2) + "\n";
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::filesystem::filesystem_error("cannot read", path, std::make_error_code(std::errc::no_such_file_or_directory));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string run_plot(const ExperimentConfig& cfg, const std::filesystem::path& config_dir, const std::filesystem::path& output_dir)
{
    if (!cfg.params.has("plot.input") || !cfg.params.has("plot.x") || !cfg.params.has("plot.y"))
        throw ConfigError("plot needs plot.input, plot.x and plot.y");
    std::filesystem::path input = cfg.params.text("plot.input", "");
    if (input.is_relative()) input = std::filesystem::exists(output_dir / input) ? output_dir / input : config_dir / input;
    const CsvTable table = parse_csv(read_file(input));
    return render_svg(table, cfg.params.text("plot.x", ""), split(cfg.params.text("plot.y", ""), ','), cfg.params.boolean("plot.step", false),
        cfg.params.text("plot.title", ""));
}

std::string output_name(std::string_view sub)
{
    static const std::set<std::string_view> csv{"spectrum", "weyl", "wavetrace", "loops"};
    if (sub == "plot") return "plot.svg";
    return std::string(sub) + (csv.count(sub) ? ".csv" : ".json");
}

void emit_error(std::ostream& err, std::string_view kind, std::string_view message, int code)
{
    json e;
    e["error"] = kind;
    e["message"] = message;
    e["exit_code"] = code;
    err << e.dump() << "\n";
}

} // namespace

FlatSpec SurfaceConfig::flat() const
{
    if (const auto* t = std::get_if<FlatTorusSpec>(&spec)) return *t;
    if (const auto* k = std::get_if<FlatKleinSpec>(&spec)) return *k;
    throw ConfigError("surface '" + name + "' is not flat");
}

const HyperbolicSurfaceSpec& SurfaceConfig::hyperbolic() const
{
    if (const auto* h = std::get_if<HyperbolicSurfaceSpec>(&spec)) return *h;
    throw ConfigError("surface '" + name + "' is not hyperbolic");
}

const SurfaceConfig& ExperimentConfig::require_surface() const
{
    if (!surface) throw ConfigError("no surface configured (set surface.preset or surface.kind)");
    return *surface;
}

std::vector<std::string> preset_names() { return {"torus_unit", "torus_2_1", "klein_2_1", "klein_2_2", "klein_4_1", "genus2_octagon", "bolza"}; }

SurfaceConfig surface_preset(std::string_view name)
{
    const std::string n(name);
    if (n == "torus_unit") return {n, make_torus(1.0, 1.0)};
    if (n == "torus_2_1") return {n, make_torus(2.0, 1.0)};
    if (n == "klein_2_1") return {n, make_klein(2.0, 1.0)};
    if (n == "klein_2_2") return {n, make_klein(2.0, 2.0)};
    if (n == "klein_4_1") return {n, make_klein(4.0, 1.0)};
    if (n == "genus2_octagon" || n == "bolza") return {n, genus2_octagon()};
    throw ConfigError("unknown surface preset '" + n + "'");
}

void ConfigValues::set(const std::string& key, const std::string& value)
{
    if (!values_.emplace(key, value).second) throw ConfigError("duplicate config key '" + key + "'");
}

bool ConfigValues::has(const std::string& key) const { return values_.count(key) > 0; }

std::string ConfigValues::text(const std::string& key, const std::string& fallback) const
{
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double ConfigValues::number(const std::string& key, double fallback) const { return number(key).value_or(fallback); }

std::optional<double> ConfigValues::number(const std::string& key) const
{
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return parse_double(key, it->second);
}

int ConfigValues::integer(const std::string& key, int fallback) const
{
    const auto v = number(key);
    if (!v) return fallback;
    if (*v != std::floor(*v) || std::abs(*v) > 1e9) throw ConfigError("config key '" + key + "': expected an integer");
    return static_cast<int>(*v);
}

bool ConfigValues::boolean(const std::string& key, bool fallback) const
{
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw ConfigError("config key '" + key + "': expected true or false");
}

std::vector<double> ConfigValues::numbers(const std::string& key, const std::vector<double>& fallback) const
{
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    auto v = parse_list(key, it->second);
    if (v.empty()) throw ConfigError("config key '" + key + "': empty list");
    return v;
}

const std::vector<std::string>& known_config_keys()
{
    static const std::vector<std::string> keys{
        "surface.preset", "surface.kind", "surface.a", "surface.b", "surface.generators",
        "basepoints", "basepoints.random", "basepoints.seed",
        "spectrum.lambda_max", "weyl.lambda_max",
        "heat.t_min", "heat.t_max", "heat.samples", "heat.tol",
        "window.r", "window.eps", "window.profile", "window.weight",
        "wavetrace.lambdas", "loops.R", "loops.max_word_length",
        "detect.lambdas", "detect.epsilon_halvings",
        "echolocate.level_sum", "constancy.lambda_max",
        "plot.input", "plot.x", "plot.y", "plot.step", "plot.title",
    };
    return keys;
}

ExperimentConfig parse_config(std::string_view text)
{
    ExperimentConfig cfg;
    const auto& known = known_config_keys();
    int line_no = 0;
    for (const auto& raw : split(text, '\n')) {
        ++line_no;
        std::string line = raw;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (std::find(known.begin(), known.end(), key) == known.end()) throw ConfigError("unknown config key '" + key + "'");
        cfg.params.set(key, value);
    }

    const ConfigValues& v = cfg.params;
    try {
        if (v.has("surface.preset")) {
            if (v.has("surface.kind")) throw ConfigError("give either surface.preset or surface.kind, not both");
            cfg.surface = surface_preset(v.text("surface.preset", ""));
        } else if (v.has("surface.kind")) {
            const std::string kind = v.text("surface.kind", "");
            if (kind == "torus" || kind == "klein") {
                if (!v.has("surface.a") || !v.has("surface.b")) throw ConfigError("surface.a and surface.b are required");
                const double a = v.number("surface.a", 1.0), b = v.number("surface.b", 1.0);
                if (kind == "torus") cfg.surface = SurfaceConfig{"torus", make_torus(a, b)};
                else cfg.surface = SurfaceConfig{"klein", make_klein(a, b)};
            } else if (kind == "hyperbolic") {
                std::vector<MobiusElement> gens;
                for (const auto& item : split(v.text("surface.generators", ""), ';')) {
                    if (item.empty()) continue;
                    const auto e = parse_list("surface.generators", item);
                    if (e.size() != 4) throw ConfigError("surface.generators: each generator needs four entries");
                    gens.push_back(make_mobius(e[0], e[1], e[2], e[3]));
                }
                cfg.surface = SurfaceConfig{"hyperbolic", make_hyperbolic(std::move(gens), HPoint{})};
            } else {
                throw ConfigError("surface.kind must be torus, klein or hyperbolic");
            }
        }

        const auto pairs = parse_pairs("basepoints", v.text("basepoints", ""));
        const int random = v.integer("basepoints.random", 0);
        if (random < 0) throw ConfigError("basepoints.random must be nonnegative");
        if ((!pairs.empty() || random > 0) && !cfg.surface) throw ConfigError("basepoints given without a surface");
        if (cfg.surface && cfg.surface->is_flat()) {
            const FlatSpec flat = cfg.surface->flat();
            for (const auto& p : pairs) cfg.points.push_back(reduce(Point{p[0], p[1]}, flat));
            std::mt19937_64 rng(static_cast<std::uint64_t>(v.integer("basepoints.seed", 1)));
            std::uniform_real_distribution<double> unit(0.0, 1.0);
            const bool klein = std::holds_alternative<FlatKleinSpec>(flat);
            const double a = std::visit([](const auto& s) { return s.a; }, flat);
            const double b = std::visit([](const auto& s) { return s.b; }, flat);
            for (int i = 0; i < random; ++i) {
                const double x1 = unit(rng) * (klein ? 0.5 * a : a);
                const double x2 = unit(rng) * b;
                cfg.points.push_back(reduce(Point{x1, x2}, flat));
            }
        } else if (cfg.surface) {
            if (random > 0) throw ConfigError("basepoints.random is only supported on flat surfaces");
            for (const auto& p : pairs) cfg.hpoints.push_back(make_hpoint(p[0], p[1]));
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string format_number(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.15g", v == 0.0 ? 0.0 : v);
    return buf;
}

std::string to_csv(const CsvTable& table)
{
    std::string out;
    auto row = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            const std::string& c = cells[i];
            if (c.find_first_of(",\"\n") == std::string::npos) {
                out += c;
                continue;
            }
            out += '"';
            for (const char ch : c) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
            out += '"';
        }
        out += '\n';
    };
    row(table.header);
    for (const auto& r : table.rows) row(r);
    return out;
}

CsvTable parse_csv(std::string_view text)
{
    CsvTable table;
    bool first = true;
    for (const auto& line : split(text, '\n')) {
        if (line.empty()) continue;
        auto cells = split_csv_line(line);
        if (first) {
            table.header = std::move(cells);
            first = false;
        } else {
            if (cells.size() != table.header.size()) throw ConfigError("csv: ragged row '" + line + "'");
            table.rows.push_back(std::move(cells));
        }
    }
    if (first) throw ConfigError("csv: empty input");
    return table;
}

std::string render_svg(const CsvTable& table, const std::string& x_column, const std::vector<std::string>& y_columns,
    bool step, const std::string& title)
{
    auto column = [&](const std::string& name) {
        const auto it = std::find(table.header.begin(), table.header.end(), name);
        if (it == table.header.end()) throw ConfigError("csv has no column '" + name + "'");
        const auto idx = static_cast<std::size_t>(it - table.header.begin());
        std::vector<double> v;
        for (const auto& r : table.rows) v.push_back(parse_double(name, r[idx]));
        return v;
    };
    const std::vector<double> xs = column(x_column);
    std::vector<std::vector<double>> ys;
    for (const auto& y : y_columns) ys.push_back(column(y));
    if (xs.empty()) throw ConfigError("plot: no rows");

    double x0 = *std::min_element(xs.begin(), xs.end()), x1 = *std::max_element(xs.begin(), xs.end());
    double y0 = 0.0, y1 = 0.0;
    bool seeded = false;
    for (const auto& y : ys)
        for (const double v : y) {
            if (!std::isfinite(v)) continue;
            y0 = seeded ? std::min(y0, v) : v;
            y1 = seeded ? std::max(y1, v) : v;
            seeded = true;
        }
    if (x1 == x0) x1 = x0 + 1.0;
    if (y1 == y0) y1 = y0 + 1.0;

    const double W = 640, H = 400, L = 70, R = 20, T = 40, B = 50;
    auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
    auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!title.empty()) s << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\">" << title << "</text>\n";
    s << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
    s << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
    s << "<text x=\"" << L << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\">" << format_number(x0) << "</text>\n";
    s << "<text x=\"" << W - R << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\">" << format_number(x1) << "</text>\n";
    s << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">" << x_column << "</text>\n";
    s << "<text x=\"" << L - 6 << "\" y=\"" << H - B << "\" text-anchor=\"end\">" << format_number(y0) << "</text>\n";
    s << "<text x=\"" << L - 6 << "\" y=\"" << T + 4 << "\" text-anchor=\"end\">" << format_number(y1) << "</text>\n";
    for (std::size_t k = 0; k < ys.size(); ++k) {
        s << "<polyline fill=\"none\" stroke=\"" << colors[k % 5] << "\" stroke-width=\"1.5\" points=\"";
        bool any = false;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (!std::isfinite(ys[k][i])) continue;
            if (step && any) s << format_number(px(xs[i])) << ',' << format_number(py(ys[k][i - 1])) << ' ';
            s << format_number(px(xs[i])) << ',' << format_number(py(ys[k][i])) << ' ';
            any = true;
        }
        s << "\"/>\n";
        s << "<text x=\"" << W - R - 4 << "\" y=\"" << T + 14 * (k + 1) << "\" text-anchor=\"end\" fill=\"" << colors[k % 5] << "\">"
          << y_columns[k] << "</text>\n";
    }
    s << "</svg>\n";
    return s.str();
}

const std::vector<std::string>& subcommands()
{
    static const std::vector<std::string> names{"spectrum", "weyl", "heat", "wavetrace", "loops", "detect", "echolocate", "constancy", "plot"};
    return names;
}

int run(std::string_view subcommand, const std::filesystem::path& config_path, const std::filesystem::path& output_dir,
    std::ostream& out, std::ostream& err)
{
    try {
        const auto& subs = subcommands();
        if (std::find(subs.begin(), subs.end(), subcommand) == subs.end())
            throw ConfigError("unknown subcommand '" + std::string(subcommand) + "'");
        const ExperimentConfig cfg = load_config(config_path);
        std::string text;
        if (subcommand == "spectrum") text = run_spectrum(cfg);
        else if (subcommand == "weyl") text = run_weyl(cfg);
        else if (subcommand == "heat") text = run_heat(cfg);
        else if (subcommand == "wavetrace") text = run_wavetrace(cfg);
        else if (subcommand == "loops") text = run_loops(cfg);
        else if (subcommand == "detect") text = run_detect(cfg);
        else if (subcommand == "echolocate") text = run_echolocate(cfg);
        else if (subcommand == "constancy") text = run_constancy(cfg);
        else text = run_plot(cfg, config_path.parent_path(), output_dir);

        std::filesystem::create_directories(output_dir);
        const auto path = output_dir / output_name(subcommand);
        std::ofstream file(path, std::ios::binary | std::ios::trunc);
        if (!file || !(file << text)) throw std::filesystem::filesystem_error("cannot write", path, std::make_error_code(std::errc::io_error));
        out << path.string() << "\n";
        return 0;
    } catch (const ContractError& e) {
        emit_error(err, "numerical_contract", e.what(), 3);
        return 3;
    } catch (const DomainError& e) {
        emit_error(err, "config", e.what(), 2);
        return 2;
    } catch (const std::filesystem::filesystem_error& e) {
        emit_error(err, "io", e.what(), 2);
        return 2;
    } catch (const std::exception& e) {
        emit_error(err, "numerical_contract", e.what(), 3);
        return 3;
    }
}

} // namespace echoloc
