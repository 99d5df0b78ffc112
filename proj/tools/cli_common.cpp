#include "cli_common.hpp"

#include <algorithm>

namespace latwalk::cli {

void reject_unknown_keys(const json& j, const std::vector<std::string>& known,
                         const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + ": expected a JSON object");
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

namespace {

double get_num(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number()) throw ConfigError(std::string("field '") + key + "' must be numeric");
    return j.at(key).get<double>();
}

}  // namespace

RunConfig run_config_from_json(const json& j) {
    RunConfig cfg;
    reject_unknown_keys(j, {"params", "initial", "integrator", "horizon", "seed", "outputs",
                            "series", "kind", "window", "lyapunov"},
                        "config");
    if (j.contains("params")) {
        const auto& p = j.at("params");
        reject_unknown_keys(p, {"lambda", "omega", "eps0"}, "params");
        cfg.params.lambda = get_num(p, "lambda", cfg.params.lambda);
        cfg.params.omega = get_num(p, "omega", cfg.params.omega);
        cfg.params.eps0 = get_num(p, "eps0", cfg.params.eps0);
    }
    if (j.contains("initial")) {
        const auto& s = j.at("initial");
        reject_unknown_keys(s, {"x", "p", "t"}, "initial");
        cfg.initial.x = get_num(s, "x", cfg.initial.x);
        cfg.initial.p = get_num(s, "p", cfg.initial.p);
        cfg.initial.t = get_num(s, "t", cfg.initial.t);
    }
    if (j.contains("integrator")) {
        const auto& i = j.at("integrator");
        reject_unknown_keys(i, {"method", "dt", "rel_tol", "abs_tol", "sample_every", "max_steps"},
                            "integrator");
        if (i.contains("method")) {
            const std::string m = i.at("method").get<std::string>();
            if (m == "symplectic_verlet")
                cfg.integrator.method = Method::symplectic_verlet;
            else if (m == "adaptive_reference")
                cfg.integrator.method = Method::adaptive_reference;
            else
                throw ConfigError("integrator.method must be symplectic_verlet or adaptive_reference");
        }
        cfg.integrator.dt = get_num(i, "dt", cfg.integrator.dt);
        cfg.integrator.rel_tol = get_num(i, "rel_tol", cfg.integrator.rel_tol);
        cfg.integrator.abs_tol = get_num(i, "abs_tol", cfg.integrator.abs_tol);
        if (i.contains("sample_every"))
            cfg.integrator.sample_every = i.at("sample_every").get<std::size_t>();
        if (i.contains("max_steps"))
            cfg.integrator.max_steps = i.at("max_steps").get<std::uint64_t>();
    }
    cfg.horizon = get_num(j, "horizon", cfg.horizon);
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("outputs")) cfg.outputs = j.at("outputs").get<std::vector<std::string>>();
    if (j.contains("series")) cfg.series = j.at("series").get<std::string>();
    if (j.contains("kind")) cfg.kind = j.at("kind").get<std::string>();
    cfg.window = get_num(j, "window", cfg.window);
    if (j.contains("lyapunov")) {
        const auto& l = j.at("lyapunov");
        reject_unknown_keys(l, {"t_total", "renorm_interval"}, "lyapunov");
        cfg.lyapunov_t_total = get_num(l, "t_total", cfg.lyapunov_t_total);
        cfg.lyapunov_renorm = get_num(l, "renorm_interval", cfg.lyapunov_renorm);
    }
    try {
        cfg.params.validate();
        cfg.integrator.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("invalid configuration: ") + e.what());
    }
    return cfg;
}

json run_config_to_json(const RunConfig& cfg) {
    json j;
    j["params"] = {{"lambda", cfg.params.lambda},
                   {"omega", cfg.params.omega},
                   {"eps0", cfg.params.eps0}};
    j["initial"] = {{"x", cfg.initial.x}, {"p", cfg.initial.p}, {"t", cfg.initial.t}};
    j["integrator"] = {
        {"method", cfg.integrator.method == Method::symplectic_verlet ? "symplectic_verlet"
                                                                      : "adaptive_reference"},
        {"dt", cfg.integrator.dt},
        {"rel_tol", cfg.integrator.rel_tol},
        {"abs_tol", cfg.integrator.abs_tol},
        {"sample_every", cfg.integrator.sample_every},
        {"max_steps", cfg.integrator.max_steps}};
    j["horizon"] = cfg.horizon;
    j["seed"] = cfg.seed;
    j["outputs"] = cfg.outputs;
    j["series"] = cfg.series;
    j["kind"] = cfg.kind;
    j["window"] = cfg.window;
    j["lyapunov"] = {{"t_total", cfg.lyapunov_t_total}, {"renorm_interval", cfg.lyapunov_renorm}};
    return j;
}

SweepConfig sweep_config_from_json(const json& j) {
    SweepConfig sweep;
    reject_unknown_keys(j, {"axes"}, "sweep");
    if (!j.contains("axes")) throw ConfigError("sweep: missing 'axes'");
    for (const auto& a : j.at("axes")) {
        reject_unknown_keys(a, {"field", "min", "max", "count"}, "sweep axis");
        SweepAxis axis;
        axis.field = a.at("field").get<std::string>();
        axis.min = a.at("min").get<double>();
        axis.max = a.at("max").get<double>();
        axis.count = a.at("count").get<std::size_t>();
        if (axis.count < 2) throw ConfigError("sweep axis count must be >= 2");
        sweep.axes.push_back(axis);
    }
    if (sweep.axes.empty() || sweep.axes.size() > 2)
        throw ConfigError("sweep supports one or two axes");
    return sweep;
}

ChartConfig chart_config_from_json(const json& j) {
    ChartConfig cfg;
    reject_unknown_keys(j, {"eps0", "lambda_range", "omega_range", "resolution"}, "chart");
    cfg.eps0 = get_num(j, "eps0", cfg.eps0);
    if (j.contains("lambda_range")) {
        cfg.lambda_min = j.at("lambda_range").at(0).get<double>();
        cfg.lambda_max = j.at("lambda_range").at(1).get<double>();
    }
    if (j.contains("omega_range")) {
        cfg.omega_min = j.at("omega_range").at(0).get<double>();
        cfg.omega_max = j.at("omega_range").at(1).get<double>();
    }
    if (j.contains("resolution")) {
        cfg.resolution_lambda = j.at("resolution").at(0).get<std::size_t>();
        cfg.resolution_omega = j.at("resolution").at(1).get<std::size_t>();
    }
    return cfg;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }
}

double* resolve_numeric_field(RunConfig& cfg, const std::string& dotted) {
    if (dotted == "params.lambda") return &cfg.params.lambda;
    if (dotted == "params.omega") return &cfg.params.omega;
    if (dotted == "params.eps0") return &cfg.params.eps0;
    if (dotted == "initial.x") return &cfg.initial.x;
    if (dotted == "initial.p") return &cfg.initial.p;
    if (dotted == "horizon") return &cfg.horizon;
    throw ConfigError("sweep field '" + dotted + "' is not a sweepable numeric field");
}

}  // namespace latwalk::cli
