#ifndef LATWALK_INTEGRATE_HPP
#define LATWALK_INTEGRATE_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "latwalk/model.hpp"

namespace latwalk {

enum class Method {
    symplectic_verlet,   ///< fixed-step Stormer-Verlet (kick-drift-kick)
    adaptive_reference,  ///< embedded Dormand-Prince 5(4) with dense output
};

struct IntegratorConfig {
    Method method = Method::symplectic_verlet;
    double dt = 1e-3;            ///< fixed step (symplectic); output spacing unit (adaptive)
    double rel_tol = 1e-10;      ///< adaptive relative tolerance
    double abs_tol = 1e-12;      ///< adaptive absolute tolerance
    std::size_t sample_every = 1;       ///< output decimation, >= 1
    std::uint64_t max_steps = 1'000'000'000;  ///< runaway-parameter cap

    void validate() const;  ///< throws std::invalid_argument on violation
};

/// Time-ordered phase-space samples plus integration metadata. Samples are
/// strictly increasing in t; an aborted run keeps every sample up to the last
/// good state and records the reason.
struct Trajectory {
    LatticeParams params;
    IntegratorConfig config;
    std::vector<PhaseState> samples;
    bool aborted = false;
    std::string abort_reason;
    std::uint64_t steps_taken = 0;

    double t_begin() const { return samples.front().t; }
    double t_end() const { return samples.back().t; }
};

/// One kick-drift-kick leapfrog step of H = p^2/2 - lambda cos(omega t) cos x.
/// The time dependence enters only through the kick times, so the (x,p) map
/// of each step has unit Jacobian determinant.
PhaseState step_symplectic(const LatticeParams& params, const PhaseState& state, double dt);

/// Integrate from `initial` to t_end, sampling every config.sample_every
/// steps (symplectic) or on the uniform grid with spacing
/// config.dt * config.sample_every (adaptive, via dense output).
Trajectory integrate(const LatticeParams& params, const PhaseState& initial, double t_end,
                     const IntegratorConfig& config);

/// Row-major 2x2 tangent-map matrix d(x,p)_t / d(x,p)_0 at a sample time.
struct TangentSample {
    double t;
    std::array<double, 4> m;

    double det() const { return m[0] * m[3] - m[1] * m[2]; }
};

struct TangentResult {
    Trajectory trajectory;
    std::vector<TangentSample> tangents;  ///< one per trajectory sample
};

/// Co-integrates the variational system d(dx)/dt = dp,
/// d(dp)/dt = -lambda cos(omega t) cos(x) dx along the trajectory.
/// With the symplectic method the tangent map is the exact differential of
/// the leapfrog step, so det == 1 up to round-off.
TangentResult integrate_tangent(const LatticeParams& params, const PhaseState& initial,
                                double t_end, const IntegratorConfig& config);

}  // namespace latwalk

#endif
