#include "latwalk/model.hpp"

#include <cmath>
#include <stdexcept>

namespace latwalk {

namespace {

void require_nonlinear_form(const LatticeParams& params) {
    params.validate();
    if (params.eps0 != 0.0)
        throw std::domain_error(
            "nonlinear lattice model has no amplitude offset; "
            "eps0 != 0 is only meaningful for the linearized equation");
}

}  // namespace

void LatticeParams::validate() const {
    if (!std::isfinite(lambda) || lambda < 0.0)
        throw std::invalid_argument("lattice depth lambda must be finite and >= 0");
    if (!std::isfinite(omega) || omega < 0.0)
        throw std::invalid_argument("modulation frequency omega must be finite and >= 0");
    if (!std::isfinite(eps0))
        throw std::invalid_argument("amplitude offset eps0 must be finite");
}

double Site::center() const {
    return static_cast<double>(index) * M_PI;
}

Site nearest_site(double x) {
    // round half-down so the node x = (n+1/2)*pi belongs to site n
    return Site{static_cast<long>(std::ceil(x / M_PI - 0.5))};
}

double potential(const LatticeParams& params, double x, double t) {
    require_nonlinear_form(params);
    return -params.lambda * std::cos(params.omega * t) * std::cos(x);
}

double force(const LatticeParams& params, double x, double t) {
    require_nonlinear_form(params);
    return -params.lambda * std::cos(params.omega * t) * std::sin(x);
}

double hamiltonian(const LatticeParams& params, const PhaseState& state) {
    return 0.5 * state.p * state.p + potential(params, state.x, state.t);
}

std::pair<double, double> drift_forces(const LatticeParams& params, double p0, double t) {
    params.validate();
    const double half = 0.5 * params.lambda;
    return {-half * std::sin((params.omega + p0) * t),
            +half * std::sin((params.omega - p0) * t)};
}

}  // namespace latwalk
