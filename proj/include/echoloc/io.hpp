#pragma once

#include "echoloc/error.hpp"
#include "echoloc/geometry.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace echoloc {

/// Malformed or unknown config entries. Maps to exit code 2.
class ConfigError : public DomainError {
public:
    using DomainError::DomainError;
};

using SurfaceSpec = std::variant<FlatTorusSpec, FlatKleinSpec, HyperbolicSurfaceSpec>;

struct SurfaceConfig {
    std::string name;
    SurfaceSpec spec;

    bool is_flat() const { return !std::holds_alternative<HyperbolicSurfaceSpec>(spec); }
    FlatSpec flat() const;
    const HyperbolicSurfaceSpec& hyperbolic() const;
};

/// Named surfaces: torus_unit, torus_2_1, klein_2_1, klein_2_2, klein_4_1,
/// genus2_octagon (alias bolza).
SurfaceConfig surface_preset(std::string_view name);
std::vector<std::string> preset_names();

/// Raw key/value entries of a config with typed accessors.
class ConfigValues {
public:
    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;
    std::string text(const std::string& key, const std::string& fallback) const;
    double number(const std::string& key, double fallback) const;
    std::optional<double> number(const std::string& key) const;
    int integer(const std::string& key, int fallback) const;
    bool boolean(const std::string& key, bool fallback) const;
    std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback) const;

private:
    std::map<std::string, std::string> values_;
};

struct ExperimentConfig {
    /// Absent for subcommands that need no surface (plot).
    std::optional<SurfaceConfig> surface;
    /// Flat basepoints (reduced to the fundamental domain) or half-plane lifts.
    std::vector<Point> points;
    std::vector<HPoint> hpoints;
    ConfigValues params;

    /// ConfigError when no surface was configured.
    const SurfaceConfig& require_surface() const;
};

/// Every accepted key; anything else is a ConfigError.
const std::vector<std::string>& known_config_keys();

/// "key = value" lines, '#' comments, dotted keys.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// %.15g; non-finite values print as nan / inf / -inf.
std::string format_number(double v);

/// Comma-separated, header row, LF endings.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};
std::string to_csv(const CsvTable& table);
CsvTable parse_csv(std::string_view text);

/// Minimal SVG line or step plot of columns y against x.
std::string render_svg(const CsvTable& table, const std::string& x_column, const std::vector<std::string>& y_columns,
    bool step, const std::string& title);

const std::vector<std::string>& subcommands();

/// Runs one subcommand, writing its output file into `output_dir`. Returns
/// 0 on success, 2 on config/domain errors, 3 on numerical-contract errors;
/// failures print a one-line JSON error record to `err`.
int run(std::string_view subcommand, const std::filesystem::path& config_path, const std::filesystem::path& output_dir,
    std::ostream& out, std::ostream& err);

} // namespace echoloc
