#ifndef LATWALK_APPROX_HPP
#define LATWALK_APPROX_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "latwalk/model.hpp"

namespace latwalk {

/// Reduced-model solutions whose deviation from the reference integrator can
/// be quantified with compare().
enum class ApproxKind {
    harmonic,
    escape,
    parabolic_cylinder,
    airy,
    pendulum,
    linearized_mathieu,
    free_flight,
    beat_momentum,
    beat_momentum_corrected,
};

/// Deviation metrics of an approximation against the reference trajectory,
/// taken over a time window: l_inf >= rms >= 0.
struct ComparisonReport {
    double l_inf = 0.0;
    double rms = 0.0;
    double t_start = 0.0;
    double t_end = 0.0;
};

/// Small-oscillation solution about the nearest even site x* (the potential
/// minimum while the depth is positive):
/// x(t) = x* + (x0-x*) cos(sqrt(lambda) t) + (p0/sqrt(lambda)) sin(sqrt(lambda) t).
std::pair<double, double> harmonic_solution(const LatticeParams& params, double x0,
                                            double p0, double t);

/// Exponential escape from an inverted site once the effective depth turns
/// negative: cos -> cosh, sin -> sinh in the harmonic form.
std::pair<double, double> escape_solution(const LatticeParams& params, double x0,
                                          double p0, double t);

/// Quadratic-in-time depth decay x'' + lambda (1 - omega^2 t^2 / 2) x = 0,
/// whose solutions are parabolic cylinder functions; evaluated numerically.
std::pair<double, double> parabolic_cylinder_solution(const LatticeParams& params, double x0,
                                                      double p0, double t);

/// Linear-in-time depth decay anchored to the true t=0 depth:
/// x'' + lambda (1 - (2/pi) omega t) x = 0. Like the pi/2 - omega*t variant the
/// solutions are Airy functions, but the secant slope through the depth's
/// zero crossing keeps the initial oscillation frequency at sqrt(lambda),
/// which is what makes this form competitive with the harmonic solution from
/// t = 0 onward.
std::pair<double, double> airy_solution(const LatticeParams& params, double x0,
                                        double p0, double t);

/// Frozen-lattice pendulum libration released from rest:
/// x(t) = 2 asin[ sin(x0/2) sn(sqrt(lambda) t + K(sin x0/2), sin x0/2) ].
/// Requires lambda > 0 and |x0| < pi.
double pendulum_solution(double lambda, double x0, double t);

/// One sampled pendulum orbit: the drawn release position, folded into the
/// basin of its branch. `shifted` marks the branch about x = pi representing
/// a negative effective depth.
struct PendulumOrbit {
    double x0;
    bool shifted;

    double evaluate(double lambda, double t) const;   ///< position at time t
    double momentum(double lambda, double t) const;   ///< finite-difference-free derivative
};

/// Draws n Gaussian release positions (mean, variance; Box-Muller over a
/// seeded mt19937_64) and returns 2n orbits: each draw on the plain branch
/// and on the shifted branch. Deterministic for a fixed seed.
std::vector<PendulumOrbit> pendulum_ensemble(double lambda, double mean_x0, double variance,
                                             int n, std::uint64_t seed);

/// x(t) = x0 + p0 t, p(t) = p0.
std::pair<double, double> free_flight(double x0, double p0, double t);

/// Two-frequency beat of the momentum for a fast atom or fast modulation.
/// corrected=false evaluates the raw antiderivative (which misses the p(0)
/// condition); corrected=true subtracts the integration constant so that
/// p(0) = p0 exactly. Requires |p0 -+ omega| >= 1e-6.
double beat_momentum(const LatticeParams& params, double p0, double t, bool corrected);

/// Integrates the reference trajectory over [initial.t, initial.t + window]
/// and measures the approximation against it on n_samples uniform times.
ComparisonReport compare(ApproxKind kind, const LatticeParams& params,
                         const PhaseState& initial, double window, int n_samples = 2000);

}  // namespace latwalk

#endif
