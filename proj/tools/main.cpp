#include <atomic>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "cli_common.hpp"
#include "latwalk/analysis.hpp"
#include "latwalk/approx.hpp"
#include "latwalk/integrate.hpp"
#include "latwalk/specfun.hpp"
#include "latwalk/stability.hpp"

namespace fs = std::filesystem;
using namespace latwalk;
using namespace latwalk::cli;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitPartial = 4;

json rng_metadata() {
    // pinned so Gaussian ensembles reproduce across implementations
    return {{"algorithm", "mt19937_64"}, {"gaussian", "box-muller"}, {"version", 1}};
}

std::string trajectory_csv(const Trajectory& traj) {
    std::string out;
    out.reserve(traj.samples.size() * 48 + 16);
    out += "t,x,p\n";
    for (const PhaseState& s : traj.samples) {
        out += format_double(s.t);
        out += ',';
        out += format_double(s.x);
        out += ',';
        out += format_double(s.p);
        out += '\n';
    }
    return out;
}

json trajectory_json(const Trajectory& traj) {
    json rows = json::array();
    for (const PhaseState& s : traj.samples) rows.push_back({s.t, s.x, s.p});
    return {{"columns", {"t", "x", "p"}}, {"rows", rows}};
}

json sidecar(const RunConfig& cfg, const Trajectory& traj) {
    return {{"config", run_config_to_json(cfg)},
            {"rng", rng_metadata()},
            {"integrator_stats",
             {{"steps_taken", traj.steps_taken},
              {"samples", traj.samples.size()},
              {"aborted", traj.aborted},
              {"abort_reason", traj.abort_reason}}}};
}

int cmd_simulate(const RunConfig& cfg, const std::string& out_dir, const std::string& format) {
    const Trajectory traj =
        integrate(cfg.params, cfg.initial, cfg.initial.t + cfg.horizon, cfg.integrator);
    fs::create_directories(out_dir);
    if (format == "json")
        write_text_file(out_dir + "/trajectory_data.json", trajectory_json(traj).dump(2) + "\n");
    else
        write_text_file(out_dir + "/trajectory.csv", trajectory_csv(traj));
    write_text_file(out_dir + "/trajectory.json", sidecar(cfg, traj).dump(2) + "\n");
    return traj.aborted ? kExitNumerical : kExitOk;
}

struct LyapunovRow {
    double lambda, omega, x0, p0;
    std::array<double, 3> exps{std::nan(""), std::nan(""), std::nan("")};
    std::string status = "ok";
};

LyapunovRow lyapunov_cell(const RunConfig& cfg) {
    LyapunovRow row{cfg.params.lambda, cfg.params.omega, cfg.initial.x, cfg.initial.p};
    try {
        const LyapunovResult r = lyapunov_spectrum(cfg.params, cfg.initial, cfg.lyapunov_t_total,
                                                   cfg.lyapunov_renorm, cfg.integrator.dt);
        row.exps = r.exponents;
        for (double e : row.exps)
            if (!std::isfinite(e)) row.status = "nonfinite_exponent";
    } catch (const std::exception& e) {
        row.status = std::string("error: ") + e.what();
    }
    if (row.status != "ok")
        row.exps = {std::nan(""), std::nan(""), std::nan("")};
    return row;
}

std::string lyapunov_csv(const std::vector<LyapunovRow>& rows) {
    std::string out = "lambda,omega,x0,p0,l1,l2,l3\n";
    for (const auto& r : rows) {
        out += format_double(r.lambda) + ',' + format_double(r.omega) + ',' +
               format_double(r.x0) + ',' + format_double(r.p0) + ',' +
               format_double(r.exps[0]) + ',' + format_double(r.exps[1]) + ',' +
               format_double(r.exps[2]) + '\n';
    }
    return out;
}

/// Expands sweep axes into per-cell configs in deterministic cell-index order
/// (outer axis first), runs `work` possibly in parallel, returns results by index.
template <class Work>
auto run_sweep_cells(const RunConfig& base, const SweepConfig& sweep, unsigned jobs, Work work) {
    std::vector<RunConfig> cells;
    const SweepAxis& a0 = sweep.axes[0];
    auto axis_value = [](const SweepAxis& a, std::size_t i) {
        return a.min + (a.max - a.min) * static_cast<double>(i) /
                           static_cast<double>(a.count - 1);
    };
    if (sweep.axes.size() == 1) {
        for (std::size_t i = 0; i < a0.count; ++i) {
            RunConfig c = base;
            *resolve_numeric_field(c, a0.field) = axis_value(a0, i);
            cells.push_back(c);
        }
    } else {
        const SweepAxis& a1 = sweep.axes[1];
        for (std::size_t i = 0; i < a0.count; ++i)
            for (std::size_t k = 0; k < a1.count; ++k) {
                RunConfig c = base;
                *resolve_numeric_field(c, a0.field) = axis_value(a0, i);
                *resolve_numeric_field(c, a1.field) = axis_value(a1, k);
                cells.push_back(c);
            }
    }

    using Result = decltype(work(base));
    std::vector<Result> results(cells.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            results[i] = work(cells[i]);
        }
    };
    const unsigned n_threads = std::max(1u, std::min<unsigned>(jobs, std::thread::hardware_concurrency()));
    if (n_threads <= 1 || cells.size() <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return results;
}

int cmd_lyapunov(const RunConfig& cfg, const std::optional<SweepConfig>& sweep, unsigned jobs,
                 const std::string& out_dir) {
    std::vector<LyapunovRow> rows;
    if (sweep)
        rows = run_sweep_cells(cfg, *sweep, jobs, [](const RunConfig& c) { return lyapunov_cell(c); });
    else
        rows.push_back(lyapunov_cell(cfg));

    fs::create_directories(out_dir);
    write_text_file(out_dir + "/lyapunov.csv", lyapunov_csv(rows));
    json failures = json::array();
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (rows[i].status != "ok") failures.push_back({{"cell", i}, {"reason", rows[i].status}});
    json meta = {{"config", run_config_to_json(cfg)},
                 {"rng", rng_metadata()},
                 {"cells", rows.size()},
                 {"failed_cells", failures}};
    write_text_file(out_dir + "/lyapunov.json", meta.dump(2) + "\n");
    return failures.empty() ? kExitOk : kExitPartial;
}

int cmd_stability(const ChartConfig& cfg, const std::string& out_dir) {
    const StabilityChart chart =
        stability_chart({cfg.lambda_min, cfg.lambda_max}, {cfg.omega_min, cfg.omega_max},
                        cfg.eps0, cfg.resolution_lambda, cfg.resolution_omega);
    std::string out = "lambda,omega,trace,stable,mu_imag\n";
    for (std::size_t il = 0; il < chart.lambda_axis.size(); ++il)
        for (std::size_t iw = 0; iw < chart.omega_axis.size(); ++iw) {
            const StabilityCell& c = chart.at(il, iw);
            out += format_double(chart.lambda_axis[il]) + ',' +
                   format_double(chart.omega_axis[iw]) + ',' + format_double(c.trace) + ',' +
                   (c.stable ? "1" : "0") + ',' + format_double(c.mu_imag) + '\n';
        }
    fs::create_directories(out_dir);
    write_text_file(out_dir + "/chart.csv", out);
    json meta = {{"eps0", cfg.eps0},
                 {"lambda_range", {cfg.lambda_min, cfg.lambda_max}},
                 {"omega_range", {cfg.omega_min, cfg.omega_max}},
                 {"resolution", {cfg.resolution_lambda, cfg.resolution_omega}},
                 {"marginal_cells_count_as", "stable"}};
    write_text_file(out_dir + "/chart.json", meta.dump(2) + "\n");
    return kExitOk;
}

int cmd_spectrum(const RunConfig& cfg, const std::string& out_dir) {
    const Trajectory traj =
        integrate(cfg.params, cfg.initial, cfg.initial.t + cfg.horizon, cfg.integrator);
    if (traj.aborted) {
        fs::create_directories(out_dir);
        write_text_file(out_dir + "/spectrum.json", sidecar(cfg, traj).dump(2) + "\n");
        return kExitNumerical;
    }
    const SpectrumResult spec = power_spectrum(traj, cfg.series != "position");
    std::string out = "freq,power\n";
    for (std::size_t i = 0; i < spec.freqs.size(); ++i)
        out += format_double(spec.freqs[i]) + ',' + format_double(spec.power[i]) + '\n';
    fs::create_directories(out_dir);
    write_text_file(out_dir + "/spectrum.csv", out);
    write_text_file(out_dir + "/spectrum.json", sidecar(cfg, traj).dump(2) + "\n");
    return kExitOk;
}

int cmd_classify(const RunConfig& cfg, const std::string& out_dir) {
    const Trajectory traj =
        integrate(cfg.params, cfg.initial, cfg.initial.t + cfg.horizon, cfg.integrator);
    if (traj.aborted) {
        fs::create_directories(out_dir);
        write_text_file(out_dir + "/regime.json", sidecar(cfg, traj).dump(2) + "\n");
        return kExitNumerical;
    }
    const LyapunovResult lyt = lyapunov_spectrum(cfg.params, cfg.initial, cfg.lyapunov_t_total,
                                                 cfg.lyapunov_renorm, cfg.integrator.dt);
    const RegimeReport rep = classify_regime(cfg.params, cfg.initial, traj, lyt);
    json j = {{"label", regime_name(rep.label)},
              {"inconclusive", rep.inconclusive},
              {"diagnostics",
               {{"trapping_time", rep.trapping_time},
                {"oscillation_period", rep.oscillation_period},
                {"hop_time", rep.hop_time},
                {"largest_lyapunov", rep.largest_lyapunov},
                {"net_displacement_ratio", rep.net_displacement_ratio},
                {"median_residence", rep.median_residence},
                {"exponents", {lyt.exponents[0], lyt.exponents[1], lyt.exponents[2]}}}},
              {"config", run_config_to_json(cfg)}};
    fs::create_directories(out_dir);
    write_text_file(out_dir + "/regime.json", j.dump(2) + "\n");
    return kExitOk;
}

ApproxKind kind_from_string(const std::string& s) {
    if (s == "harmonic") return ApproxKind::harmonic;
    if (s == "escape") return ApproxKind::escape;
    if (s == "parabolic_cylinder") return ApproxKind::parabolic_cylinder;
    if (s == "airy") return ApproxKind::airy;
    if (s == "pendulum") return ApproxKind::pendulum;
    if (s == "linearized_mathieu") return ApproxKind::linearized_mathieu;
    if (s == "free_flight") return ApproxKind::free_flight;
    if (s == "beat_momentum") return ApproxKind::beat_momentum;
    if (s == "beat_momentum_corrected") return ApproxKind::beat_momentum_corrected;
    throw ConfigError("unknown approximation kind: " + s);
}

int cmd_approx_compare(const RunConfig& cfg, const std::string& out_dir) {
    const double window = cfg.window > 0.0 ? cfg.window : cfg.horizon;
    const ComparisonReport rep = compare(kind_from_string(cfg.kind), cfg.params, cfg.initial, window);
    json j = {{"kind", cfg.kind},
              {"l_inf", rep.l_inf},
              {"rms", rep.rms},
              {"window", {rep.t_start, rep.t_end}},
              {"config", run_config_to_json(cfg)}};
    fs::create_directories(out_dir);
    write_text_file(out_dir + "/comparison.json", j.dump(2) + "\n");
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"latwalk: classical atom transport in an amplitude-modulated optical lattice"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".", format = "csv";
    unsigned jobs = 1;
    std::uint64_t seed_value = 0;
    bool seed_given = false;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        auto* opt = sub->add_option("--config", config_path, "JSON run configuration");
        if (needs_config) opt->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--jobs", jobs, "parallel sweep workers");
        sub->add_option("--format", format, "table format")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--seed", seed_value, "override the config seed")
            ->each([&seed_given](const std::string&) { seed_given = true; });
    };

    auto* sim = app.add_subcommand("simulate", "integrate one trajectory");
    auto* lya = app.add_subcommand("lyapunov", "Lyapunov spectrum (single cell or sweep)");
    auto* sta = app.add_subcommand("stability", "Floquet stability chart");
    auto* spe = app.add_subcommand("spectrum", "power spectrum of a trajectory series");
    auto* cla = app.add_subcommand("classify", "label the walking regime");
    auto* cmp = app.add_subcommand("approx-compare", "approximation vs reference metrics");
    auto* swp = app.add_subcommand("sweep", "parameter sweep of the Lyapunov spectrum");
    auto* prt = app.add_subcommand("print-config", "print the fully-defaulted configuration");
    for (auto* sub : {sim, lya, spe, cla, cmp, swp}) add_common(sub, true);
    add_common(sta, true);
    add_common(prt, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (prt->parsed()) {
            RunConfig cfg;
            if (!config_path.empty()) cfg = run_config_from_json(load_json_file(config_path));
            if (seed_given) cfg.seed = seed_value;
            std::cout << run_config_to_json(cfg).dump(2) << "\n";
            return kExitOk;
        }

        const json raw = load_json_file(config_path);
        if (sta->parsed()) return cmd_stability(chart_config_from_json(raw), out_dir);

        json run_part = raw;
        std::optional<SweepConfig> sweep;
        if (raw.contains("sweep")) {
            sweep = sweep_config_from_json(raw.at("sweep"));
            run_part.erase("sweep");
        }
        RunConfig cfg = run_config_from_json(run_part);
        if (seed_given) cfg.seed = seed_value;

        if (sim->parsed()) return cmd_simulate(cfg, out_dir, format);
        if (lya->parsed()) return cmd_lyapunov(cfg, sweep, jobs, out_dir);
        if (spe->parsed()) return cmd_spectrum(cfg, out_dir);
        if (cla->parsed()) return cmd_classify(cfg, out_dir);
        if (cmp->parsed()) return cmd_approx_compare(cfg, out_dir);
        if (swp->parsed()) {
            if (!sweep) throw ConfigError("sweep subcommand needs a 'sweep' section in the config");
            return cmd_lyapunov(cfg, sweep, jobs, out_dir);
        }
        return kExitConfig;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}
