#ifndef LATWALK_ANALYSIS_HPP
#define LATWALK_ANALYSIS_HPP

#include <array>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "latwalk/integrate.hpp"
#include "latwalk/model.hpp"

namespace latwalk {

/// Lyapunov exponents of the extended autonomous system (x, p, theta) with
/// theta = omega t, estimated by tangent-space stretching with periodic
/// modified Gram-Schmidt renormalization. Volume preservation forces the
/// exponents into the pattern (+r, 0, -r).
struct LyapunovResult {
    std::array<double, 3> exponents{};  ///< sorted descending
    double t_total = 0.0;
    double renorm_interval = 0.0;
    bool short_horizon = false;  ///< set when t_total < 100 * renorm_interval

    double sum() const { return exponents[0] + exponents[1] + exponents[2]; }
};

LyapunovResult lyapunov_spectrum(const LatticeParams& params, const PhaseState& initial,
                                 double t_total, double renorm_interval, double dt = 1e-3);

/// One-sided power spectrum of a mean-removed, Hann-windowed series.
/// freqs are angular; sum(power) equals the mean square of the windowed,
/// detrended input (Parseval).
struct SpectrumResult {
    std::vector<double> freqs;
    std::vector<double> power;
};

SpectrumResult power_spectrum(const std::vector<double>& series, double dt);

/// Momentum (or position) spectrum of a uniformly sampled trajectory.
/// Throws if the sampling grid is not uniform.
SpectrumResult power_spectrum(const Trajectory& traj, bool momentum = true);

/// Positions folded into the first lattice period [0, 2 pi), momenta kept.
std::vector<std::pair<double, double>> fold_phase_space(const Trajectory& traj);

/// One committed stay at a lattice site.
struct SiteSegment {
    long site = 0;
    double entry_time = 0.0;
    double residence = 0.0;
};

/// Segments a trajectory into site residences. A new site is entered when the
/// position comes within `hysteresis` of its center (preventing chatter at
/// the nodes); a visit is committed only once the atom has stayed assigned
/// for at least `min_dwell`, so fly-through transits during a jump are not
/// counted as residences. min_dwell = 0 reproduces raw hysteresis
/// segmentation. Consecutive duplicates are merged.
std::vector<SiteSegment> site_sequence(const Trajectory& traj, double hysteresis = M_PI / 4,
                                       double min_dwell = 0.0);

/// Least-squares line through (t, x); the slope estimates the transport
/// momentum. Requires >= 100 samples.
std::pair<double, double> drift_fit(const Trajectory& traj);

enum class Regime {
    trapped_oscillation_jumping,
    pendulum_step_shifting,
    random_chaotic_transport,
    quasi_periodic_trapped,
    ballistic,
};

const char* regime_name(Regime r);

/// Decision thresholds of the classifier. Defaults separate the canonical
/// parameter sets of the five regimes; every cut is a heuristic, hence
/// exposed here rather than hard-coded.
struct ClassifierConfig {
    double ballistic_momentum_factor = 2.0;   ///< p0 >= factor * sqrt(lambda)
    double ballistic_omega_factor = 10.0;     ///< omega >= factor * sqrt(lambda)
    double ballistic_displacement_ratio = 0.8;
    double lyapunov_cut = 0.01;
    double trapped_excursion = 2.0 * M_PI;
    double slow_modulation_ratio = 8.0;   ///< trapping time vs oscillation period
    double residence_band_lo = 0.5;       ///< committed residence vs pi/omega
    double residence_band_hi = 1.5;
    double dwell_periods = 2.0;           ///< min dwell in oscillation periods
};

/// Diagnostics backing a regime label. Quantities that do not exist for the
/// given parameters (e.g. the oscillation period at lambda = 0) are NaN.
struct RegimeReport {
    Regime label = Regime::random_chaotic_transport;
    double trapping_time = 0.0;       ///< pi / omega
    double oscillation_period = 0.0;  ///< 2 pi / sqrt(lambda)
    double hop_time = 0.0;            ///< pi / <p>
    double largest_lyapunov = 0.0;
    double net_displacement_ratio = 0.0;  ///< (x_end - x_0) / (p0 * T)
    double median_residence = 0.0;        ///< committed residences only
    bool inconclusive = false;            ///< horizon too short for the label
};

RegimeReport classify_regime(const LatticeParams& params, const PhaseState& initial,
                             const Trajectory& traj, const LyapunovResult& lyapunov,
                             const ClassifierConfig& cfg = {});

}  // namespace latwalk

#endif
