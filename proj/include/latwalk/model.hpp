#ifndef LATWALK_MODEL_HPP
#define LATWALK_MODEL_HPP

#include <utility>

namespace latwalk {

/// Dimensionless parameters of the amplitude-modulated standing-wave lattice.
/// All quantities are recoil-scaled: the potential is V(x,t) = -lambda cos(omega t) cos x.
/// eps0 is a constant amplitude offset used only by the linearized (Hill/Mathieu)
/// machinery; the nonlinear model operations reject eps0 != 0.
struct LatticeParams {
    double lambda = 1.0;  ///< lattice depth, >= 0
    double omega = 1.0;   ///< modulation frequency, >= 0 (0 selects the frozen lattice)
    double eps0 = 0.0;    ///< constant amplitude offset (linearized model only)

    /// Throws std::invalid_argument unless lambda, omega are finite and
    /// non-negative and eps0 is finite.
    void validate() const;
};

/// Point of phase space at a given time. Position in units of 1/k, momentum in
/// units of hbar*k, time in units of the inverse recoil frequency.
struct PhaseState {
    double x = 0.0;
    double p = 0.0;
    double t = 0.0;
};

/// Lattice site label: the antinode at x* = index * pi.
struct Site {
    long index = 0;
    double center() const;
};

/// Site whose center minimizes |x - n*pi|. Ties at the nodes x = (n+1/2)*pi
/// break toward the lower index.
Site nearest_site(double x);

/// V(x,t) = -lambda cos(omega t) cos x. Requires eps0 == 0.
double potential(const LatticeParams& params, double x, double t);

/// F(x,t) = -dV/dx = -lambda cos(omega t) sin x. Requires eps0 == 0.
double force(const LatticeParams& params, double x, double t);

/// H = p^2/2 + V(x,t). Requires eps0 == 0.
double hamiltonian(const LatticeParams& params, const PhaseState& state);

/// The two counter-propagating drive components felt by an atom moving at
/// constant momentum p0: { -(lambda/2) sin((omega+p0) t), +(lambda/2) sin((omega-p0) t) }.
/// Their sum equals -lambda sin(p0 t) cos(omega t).
std::pair<double, double> drift_forces(const LatticeParams& params, double p0, double t);

}  // namespace latwalk

#endif
