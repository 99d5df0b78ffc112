#ifndef LATWALK_CLI_COMMON_HPP
#define LATWALK_CLI_COMMON_HPP

#include <charconv>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "latwalk/analysis.hpp"
#include "latwalk/integrate.hpp"
#include "latwalk/model.hpp"

namespace latwalk::cli {

using json = nlohmann::json;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Shortest decimal that parses back to the identical double.
inline std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw ConfigError("malformed numeric field: '" + s + "'");
    return v;
}

/// A full run description; all defaults are explicit in print-config output.
struct RunConfig {
    LatticeParams params;
    PhaseState initial;
    IntegratorConfig integrator;
    double horizon = 100.0;
    std::uint64_t seed = 0;
    std::vector<std::string> outputs = {"trajectory"};
    std::string series = "momentum";  // spectrum input series
    std::string kind = "harmonic";    // approx-compare subject
    double window = 0.0;              // approx-compare window; 0 = horizon
    double lyapunov_t_total = 10000.0;
    double lyapunov_renorm = 1.0;
};

struct SweepAxis {
    std::string field;
    double min = 0.0;
    double max = 0.0;
    std::size_t count = 0;
};

struct SweepConfig {
    std::vector<SweepAxis> axes;  // 1 or 2 swept numeric fields
};

struct ChartConfig {
    double eps0 = 0.0;
    double lambda_min = -5.0, lambda_max = 5.0;
    double omega_min = 0.1, omega_max = 5.0;
    std::size_t resolution_lambda = 64, resolution_omega = 64;
};

void reject_unknown_keys(const json& j, const std::vector<std::string>& known,
                         const std::string& where);

RunConfig run_config_from_json(const json& j);
json run_config_to_json(const RunConfig& cfg);
SweepConfig sweep_config_from_json(const json& j);
ChartConfig chart_config_from_json(const json& j);

json load_json_file(const std::string& path);

double* resolve_numeric_field(RunConfig& cfg, const std::string& dotted);

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << content;
}

}  // namespace latwalk::cli

#endif
