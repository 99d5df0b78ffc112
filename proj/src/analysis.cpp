#include "latwalk/analysis.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>

namespace latwalk {

namespace {

void require_trajectory(const Trajectory& traj) {
    if (traj.samples.size() < 2)
        throw std::invalid_argument("trajectory must hold at least two samples");
}

}  // namespace

LyapunovResult lyapunov_spectrum(const LatticeParams& params, const PhaseState& initial,
                                 double t_total, double renorm_interval, double dt) {
    params.validate();
    if (params.eps0 != 0.0)
        throw std::domain_error("Lyapunov analysis runs on the nonlinear model (eps0 == 0)");
    if (!(t_total > 0.0) || !(renorm_interval > 0.0) || !(dt > 0.0))
        throw std::invalid_argument("t_total, renorm_interval and dt must be positive");

    LyapunovResult res;
    res.t_total = t_total;
    res.renorm_interval = renorm_interval;
    res.short_horizon = t_total < 100.0 * renorm_interval;

    const double lambda = params.lambda, omega = params.omega;
    const auto steps_per_renorm =
        std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(renorm_interval / dt)));
    const auto renorms =
        std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(t_total / renorm_interval)));

    // orthonormal tangent frame over (x, p, t); the time-translation
    // direction carries the structural zero exponent. Columns are vectors.
    double Q[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    double sums[3] = {0, 0, 0};

    double x = initial.x, p = initial.p;
    double t = initial.t;
    double f = -lambda * std::sin(x) * std::cos(omega * t);
    std::uint64_t total_steps = 0;

    for (std::uint64_t r = 0; r < renorms; ++r) {
        for (std::uint64_t i = 0; i < steps_per_renorm; ++i) {
            // differentiated kick-drift-kick step on the extended system
            const double th = omega * t;
            const double s1 = -lambda * std::cos(x) * std::cos(th);
            const double g1 = lambda * std::sin(x) * std::sin(th) * omega;  // d f / d t
            const double p_half = p + 0.5 * dt * f;
            double dp[3], dx[3];
            for (int j = 0; j < 3; ++j)
                dp[j] = Q[1][j] + 0.5 * dt * (s1 * Q[0][j] + g1 * Q[2][j]);
            for (int j = 0; j < 3; ++j) dx[j] = Q[0][j] + dt * dp[j];
            x += dt * p_half;
            ++total_steps;
            t = initial.t + static_cast<double>(total_steps) * dt;
            const double th2 = omega * t;
            const double f2 = -lambda * std::sin(x) * std::cos(th2);
            const double s2 = -lambda * std::cos(x) * std::cos(th2);
            const double g2 = lambda * std::sin(x) * std::sin(th2) * omega;
            p = p_half + 0.5 * dt * f2;
            for (int j = 0; j < 3; ++j)
                dp[j] += 0.5 * dt * (s2 * dx[j] + g2 * Q[2][j]);
            for (int j = 0; j < 3; ++j) {
                Q[0][j] = dx[j];
                Q[1][j] = dp[j];
                // theta tangent component is transported unchanged
            }
            f = f2;
        }
        if (!std::isfinite(x) || !std::isfinite(p))
            throw std::runtime_error("Lyapunov trajectory left the finite domain");

        // modified Gram-Schmidt on the columns, accumulating log norms
        for (int j = 0; j < 3; ++j) {
            for (int i = 0; i < j; ++i) {
                double dot = 0.0;
                for (int r2 = 0; r2 < 3; ++r2) dot += Q[r2][i] * Q[r2][j];
                for (int r2 = 0; r2 < 3; ++r2) Q[r2][j] -= dot * Q[r2][i];
            }
            double norm = 0.0;
            for (int r2 = 0; r2 < 3; ++r2) norm += Q[r2][j] * Q[r2][j];
            norm = std::sqrt(norm);
            sums[j] += std::log(norm);
            for (int r2 = 0; r2 < 3; ++r2) Q[r2][j] /= norm;
        }
    }

    const double horizon =
        static_cast<double>(renorms) * static_cast<double>(steps_per_renorm) * dt;
    for (int j = 0; j < 3; ++j) res.exponents[j] = sums[j] / horizon;
    std::sort(res.exponents.begin(), res.exponents.end(), std::greater<>());
    return res;
}

namespace {
std::mutex fftw_plan_mutex;  // FFTW planning is not thread-safe
}

SpectrumResult power_spectrum(const std::vector<double>& series, double dt) {
    const std::size_t n = series.size();
    if (n < 256)
        throw std::invalid_argument("power spectrum needs at least 256 samples");
    if (!(dt > 0.0)) throw std::invalid_argument("sample spacing must be positive");

    double mean = 0.0;
    for (double v : series) mean += v;
    mean /= static_cast<double>(n);

    std::vector<double> windowed(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double w =
            0.5 - 0.5 * std::cos(2.0 * M_PI * static_cast<double>(i) / static_cast<double>(n - 1));
        windowed[i] = (series[i] - mean) * w;
    }

    const std::size_t nbins = n / 2 + 1;
    std::vector<double> spectrum(nbins);
    {
        std::vector<fftw_complex> out(nbins);
        std::unique_lock<std::mutex> lock(fftw_plan_mutex);
        fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), windowed.data(), out.data(),
                                              FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
        lock.unlock();
        fftw_execute(plan);
        lock.lock();
        fftw_destroy_plan(plan);
        lock.unlock();
        // one-sided periodogram normalized so that sum(power) = mean square
        const double norm = 1.0 / (static_cast<double>(n) * static_cast<double>(n));
        for (std::size_t k = 0; k < nbins; ++k) {
            const double mag2 = out[k][0] * out[k][0] + out[k][1] * out[k][1];
            const bool shared = (k == 0) || (n % 2 == 0 && k == nbins - 1);
            spectrum[k] = mag2 * norm * (shared ? 1.0 : 2.0);
        }
    }

    SpectrumResult res;
    res.power = std::move(spectrum);
    res.freqs.resize(nbins);
    const double dw = 2.0 * M_PI / (static_cast<double>(n) * dt);
    for (std::size_t k = 0; k < nbins; ++k) res.freqs[k] = static_cast<double>(k) * dw;
    return res;
}

SpectrumResult power_spectrum(const Trajectory& traj, bool momentum) {
    require_trajectory(traj);
    const auto& s = traj.samples;
    const double dt = s[1].t - s[0].t;
    // a trailing sample forced onto the horizon endpoint may sit off the
    // uniform grid; exclude it rather than reject the whole series
    std::size_t n = s.size();
    if (n > 2 && std::abs((s[n - 1].t - s[n - 2].t) - dt) > 1e-9 * std::max(1.0, std::abs(dt)))
        --n;
    for (std::size_t i = 1; i < n; ++i) {
        const double step = s[i].t - s[i - 1].t;
        if (std::abs(step - dt) > 1e-9 * std::max(1.0, std::abs(dt)))
            throw std::invalid_argument("power spectrum requires uniform sampling");
    }
    std::vector<double> series(n);
    for (std::size_t i = 0; i < n; ++i) series[i] = momentum ? s[i].p : s[i].x;
    return power_spectrum(series, dt);
}

std::vector<std::pair<double, double>> fold_phase_space(const Trajectory& traj) {
    require_trajectory(traj);
    std::vector<std::pair<double, double>> out;
    out.reserve(traj.samples.size());
    for (const PhaseState& s : traj.samples) {
        double xf = std::fmod(s.x, 2.0 * M_PI);
        if (xf < 0.0) xf += 2.0 * M_PI;
        if (xf >= 2.0 * M_PI) xf = 0.0;  // guard the fmod corner at exactly 2 pi
        out.emplace_back(xf, s.p);
    }
    return out;
}

std::vector<SiteSegment> site_sequence(const Trajectory& traj, double hysteresis,
                                       double min_dwell) {
    require_trajectory(traj);
    if (!(hysteresis > 0.0) || !(hysteresis < M_PI / 2))
        throw std::invalid_argument("hysteresis band must lie in (0, pi/2)");

    std::vector<SiteSegment> out;
    long assigned = nearest_site(traj.samples.front().x).index;
    double entry = traj.samples.front().t;

    auto commit = [&](double leave_time) {
        const double stay = leave_time - entry;
        if (stay >= min_dwell) {
            if (!out.empty() && out.back().site == assigned)
                out.back().residence = leave_time - out.back().entry_time;
            else
                out.push_back({assigned, entry, stay});
        }
    };

    for (const PhaseState& s : traj.samples) {
        const Site near = nearest_site(s.x);
        if (near.index != assigned && std::abs(s.x - near.center()) <= hysteresis) {
            commit(s.t);
            assigned = near.index;
            entry = s.t;
        }
    }
    commit(traj.samples.back().t);
    return out;
}

std::pair<double, double> drift_fit(const Trajectory& traj) {
    require_trajectory(traj);
    if (traj.samples.size() < 100)
        throw std::invalid_argument("drift fit needs at least 100 samples");
    double st = 0.0, sx = 0.0, stt = 0.0, stx = 0.0;
    const double n = static_cast<double>(traj.samples.size());
    const double t0 = traj.samples.front().t;  // center for conditioning
    for (const PhaseState& s : traj.samples) {
        const double tt = s.t - t0;
        st += tt;
        sx += s.x;
        stt += tt * tt;
        stx += tt * s.x;
    }
    const double denom = n * stt - st * st;
    const double slope = (n * stx - st * sx) / denom;
    const double b0 = (sx - slope * st) / n;  // intercept in centered time
    return {slope, b0 - slope * t0};
}

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::trapped_oscillation_jumping: return "trapped_oscillation_jumping";
        case Regime::pendulum_step_shifting: return "pendulum_step_shifting";
        case Regime::random_chaotic_transport: return "random_chaotic_transport";
        case Regime::quasi_periodic_trapped: return "quasi_periodic_trapped";
        case Regime::ballistic: return "ballistic";
    }
    return "unknown";
}

RegimeReport classify_regime(const LatticeParams& params, const PhaseState& initial,
                             const Trajectory& traj, const LyapunovResult& lyapunov,
                             const ClassifierConfig& cfg) {
    require_trajectory(traj);
    params.validate();

    RegimeReport rep;
    const double sqrt_lambda = std::sqrt(params.lambda);
    rep.trapping_time = params.omega > 0.0 ? M_PI / params.omega
                                           : std::numeric_limits<double>::quiet_NaN();
    rep.oscillation_period = params.lambda > 0.0 ? 2.0 * M_PI / sqrt_lambda
                                                 : std::numeric_limits<double>::quiet_NaN();
    rep.largest_lyapunov = lyapunov.exponents[0];

    const double horizon = traj.t_end() - traj.t_begin();
    const double net = traj.samples.back().x - traj.samples.front().x;
    const double mean_p = net / horizon;
    rep.hop_time = std::abs(mean_p) > 1e-12 ? M_PI / std::abs(mean_p)
                                            : std::numeric_limits<double>::quiet_NaN();
    rep.net_displacement_ratio =
        std::abs(initial.p) > 1e-12 ? net / (initial.p * horizon)
                                    : std::numeric_limits<double>::quiet_NaN();

    // enough material for residence statistics: many trap oscillations and a
    // handful of modulation cycles
    double needed = 0.0;
    if (params.omega > 0.0) needed = std::max(needed, 5.0 * 2.0 * M_PI / params.omega);
    if (params.lambda > 0.0) needed = std::max(needed, 50.0 * rep.oscillation_period);
    rep.inconclusive = horizon < needed;

    // committed residences: at least cfg.dwell_periods trap oscillations
    const double min_dwell =
        params.lambda > 0.0 ? cfg.dwell_periods * rep.oscillation_period : 0.0;
    const auto segments = site_sequence(traj, M_PI / 4, min_dwell);
    if (!segments.empty()) {
        std::vector<double> res;
        res.reserve(segments.size());
        for (const auto& s : segments) res.push_back(s.residence);
        std::sort(res.begin(), res.end());
        const std::size_t mid = res.size() / 2;
        rep.median_residence =
            res.size() % 2 ? res[mid] : 0.5 * (res[mid - 1] + res[mid]);
    }

    const double start_center = nearest_site(initial.x).center();
    double excursion = 0.0;
    for (const PhaseState& s : traj.samples)
        excursion = std::max(excursion, std::abs(s.x - start_center));

    // ordered decision rules; first match wins
    const bool fast_regime = std::abs(initial.p) >= cfg.ballistic_momentum_factor * sqrt_lambda ||
                             params.omega >= cfg.ballistic_omega_factor * sqrt_lambda ||
                             params.lambda == 0.0;
    if (fast_regime && std::isfinite(rep.net_displacement_ratio) &&
        rep.net_displacement_ratio >= cfg.ballistic_displacement_ratio) {
        rep.label = Regime::ballistic;
        return rep;
    }
    if (rep.largest_lyapunov < cfg.lyapunov_cut && excursion < cfg.trapped_excursion) {
        rep.label = Regime::quasi_periodic_trapped;
        return rep;
    }
    const bool residence_in_band =
        params.omega > 0.0 && rep.median_residence >= cfg.residence_band_lo * rep.trapping_time &&
        rep.median_residence <= cfg.residence_band_hi * rep.trapping_time;
    const double timescale_ratio = (params.lambda > 0.0 && params.omega > 0.0)
                                       ? rep.trapping_time / rep.oscillation_period
                                       : std::numeric_limits<double>::infinity();
    if (residence_in_band && timescale_ratio > cfg.slow_modulation_ratio) {
        rep.label = Regime::trapped_oscillation_jumping;
        return rep;
    }
    if (residence_in_band && timescale_ratio >= cfg.residence_band_lo &&
        timescale_ratio <= cfg.slow_modulation_ratio) {
        rep.label = Regime::pendulum_step_shifting;
        return rep;
    }
    rep.label = Regime::random_chaotic_transport;
    return rep;
}

}  // namespace latwalk
