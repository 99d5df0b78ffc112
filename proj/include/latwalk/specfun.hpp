#ifndef LATWALK_SPECFUN_HPP
#define LATWALK_SPECFUN_HPP

#include <complex>
#include <utility>

#include "latwalk/model.hpp"

namespace latwalk {

/// Complete elliptic integral of the first kind, K(k) with modulus k in [0,1),
/// computed by the arithmetic-geometric mean. Relative error < 1e-12.
double elliptic_K(double k);

/// Jacobi elliptic sn(u, k) for modulus k in [0, 1], by descending Landen
/// transformation seeded from the AGM sequence.
double jacobi_sn(double u, double k);

/// Solution of x'' + lambda (pi/2 - omega t) x = 0 (the linear-in-time depth
/// decay whose solutions are Airy functions of argument scaled by
/// (lambda*omega)^(1/3)), with x(0) = x0, x'(0) = p0. Evaluated by
/// high-accuracy integration of the linear equation.
std::pair<double, double> airy_regime_solution(const LatticeParams& params, double x0,
                                               double p0, double t);

/// Values of the fundamental pair of x'' + (a - 2 q cos 2 tau) x = 0 with
/// c(0)=1, c'(0)=0, s(0)=0, s'(0)=1 (derivatives in tau). The Wronskian
/// c s' - c' s stays 1.
struct MathieuFundamental {
    double c, c_dot, s, s_dot;

    double wronskian() const { return c * s_dot - c_dot * s; }
};

/// Fundamental pair at tau, by adaptive integration over one period pi plus
/// Floquet extension (monodromy powers) beyond it.
MathieuFundamental mathieu_fundamental(double a, double q, double tau);

/// Floquet characteristic exponent data for x'' + (a - 2 q cos 2 tau) x = 0.
/// |trace| <= 2 gives a real exponent (stable); otherwise mu acquires the
/// imaginary part acosh(|trace|/2)/pi. The integer part (band index) is
/// reported as 0.
struct CharExponent {
    std::complex<double> mu;
    double trace;

    bool stable() const { return mu.imag() == 0.0; }
};

CharExponent mathieu_char_exponent(double a, double q);

/// Linearized trapped motion x'' + (eps0 + lambda cos omega t) x = 0 with
/// x(0)=x0, x'(0)=p0, via the Mathieu fundamental pair in rescaled time
/// tau = omega t / 2 (a = 4 eps0 / omega^2, q = -2 lambda / omega^2). The odd
/// solution carries the chain-rule factor 2/omega so that the pair matches
/// unit initial conditions in t.
std::pair<double, double> linearized_solution(const LatticeParams& params, double x0,
                                              double p0, double t);

}  // namespace latwalk

#endif
