#include "latwalk/integrate.hpp"

#include <cmath>
#include <stdexcept>

#include "latwalk/detail/rk45.hpp"

namespace latwalk {

namespace {

void require_nonlinear_form(const LatticeParams& params) {
    params.validate();
    if (params.eps0 != 0.0)
        throw std::domain_error("integration of the nonlinear equation requires eps0 == 0");
}

bool finite_state(double x, double p) {
    return std::isfinite(x) && std::isfinite(p);
}

struct MotionRhs {
    double lambda, omega;
    void operator()(double t, const detail::State<2>& y, detail::State<2>& dydt) const {
        dydt[0] = y[1];
        dydt[1] = -lambda * std::sin(y[0]) * std::cos(omega * t);
    }
};

struct MotionTangentRhs {
    double lambda, omega;
    void operator()(double t, const detail::State<6>& y, detail::State<6>& dydt) const {
        const double stiff = -lambda * std::cos(y[0]) * std::cos(omega * t);
        dydt[0] = y[1];
        dydt[1] = -lambda * std::sin(y[0]) * std::cos(omega * t);
        // variational block, columns of the 2x2 tangent map
        dydt[2] = y[4];
        dydt[3] = y[5];
        dydt[4] = stiff * y[2];
        dydt[5] = stiff * y[3];
    }
};

}  // namespace

void IntegratorConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw std::invalid_argument("integrator dt must be positive and finite");
    if (!(rel_tol > 0.0 && rel_tol < 1e-2) || !(abs_tol > 0.0 && abs_tol < 1e-2))
        throw std::invalid_argument("adaptive tolerances must lie in (0, 1e-2)");
    if (sample_every < 1)
        throw std::invalid_argument("sample_every must be >= 1");
    if (max_steps < 1)
        throw std::invalid_argument("max_steps must be >= 1");
}

PhaseState step_symplectic(const LatticeParams& params, const PhaseState& state, double dt) {
    require_nonlinear_form(params);
    if (dt == 0.0 || !std::isfinite(dt))
        throw std::invalid_argument("step size must be nonzero and finite");
    const double lambda = params.lambda, omega = params.omega;
    const double p_half = state.p - 0.5 * dt * lambda * std::sin(state.x) * std::cos(omega * state.t);
    const double x_new = state.x + dt * p_half;
    const double t_new = state.t + dt;
    const double p_new = p_half - 0.5 * dt * lambda * std::sin(x_new) * std::cos(omega * t_new);
    return {x_new, p_new, t_new};
}

namespace {

/* Fixed-step run: advances with the leapfrog map, reusing the closing
 * half-kick force as the next opening one, and emits decimated samples
 * through `emit`. Returns false if the run aborted. */
template <class Emit>
bool run_symplectic(const LatticeParams& params, const PhaseState& initial, double t_end,
                    const IntegratorConfig& config, Trajectory& out, Emit&& emit) {
    const double lambda = params.lambda, omega = params.omega;
    const double t0 = initial.t;
    const double span = t_end - t0;
    const std::uint64_t n_full = static_cast<std::uint64_t>(std::floor(span / config.dt));

    double x = initial.x, p = initial.p, t = t0;
    double f = -lambda * std::sin(x) * std::cos(omega * t);
    emit(x, p, t);

    if (n_full + 2 > config.max_steps) {
        out.aborted = true;
        out.abort_reason = "step-count cap exceeded before integration started";
        return false;
    }

    std::uint64_t emitted_since = 0;
    for (std::uint64_t i = 1; i <= n_full; ++i) {
        const double p_half = p + 0.5 * config.dt * f;
        x += config.dt * p_half;
        const double t_new = t0 + static_cast<double>(i) * config.dt;
        const double f_new = -lambda * std::sin(x) * std::cos(omega * t_new);
        p = p_half + 0.5 * config.dt * f_new;
        f = f_new;
        t = t_new;
        ++out.steps_taken;
        if (++emitted_since == config.sample_every) {
            emitted_since = 0;
            if (!finite_state(x, p)) {
                out.aborted = true;
                out.abort_reason = "non-finite state encountered; last good state retained";
                return false;
            }
            emit(x, p, t);
        }
    }
    const double rem = t_end - t;
    if (rem > 1e-12 * std::max(1.0, std::abs(t_end))) {
        const double p_half = p + 0.5 * rem * f;
        x += rem * p_half;
        const double f_new = -lambda * std::sin(x) * std::cos(omega * t_end);
        p = p_half + 0.5 * rem * f_new;
        f = f_new;
        t = t_end;
        ++out.steps_taken;
        emitted_since = config.sample_every;  // force emission below
    }
    if (!finite_state(x, p)) {
        out.aborted = true;
        out.abort_reason = "non-finite state encountered; last good state retained";
        return false;
    }
    if (emitted_since != 0 || out.samples.size() < 2) emit(x, p, t);
    return true;
}

}  // namespace

Trajectory integrate(const LatticeParams& params, const PhaseState& initial, double t_end,
                     const IntegratorConfig& config) {
    require_nonlinear_form(params);
    config.validate();
    if (!finite_state(initial.x, initial.p) || !std::isfinite(initial.t))
        throw std::invalid_argument("initial state must be finite");
    if (!(t_end > initial.t))
        throw std::invalid_argument("t_end must exceed the initial time");

    Trajectory out;
    out.params = params;
    out.config = config;

    if (config.method == Method::symplectic_verlet) {
        run_symplectic(params, initial, t_end, config, out,
                       [&](double x, double p, double t) { out.samples.push_back({x, p, t}); });
        return out;
    }

    // adaptive reference: dense output on the uniform grid dt * sample_every
    const double grid = config.dt * static_cast<double>(config.sample_every);
    detail::Dopri5<2, MotionRhs> solver(MotionRhs{params.lambda, params.omega},
                                        config.rel_tol, config.abs_tol);
    solver.init(initial.t, {initial.x, initial.p});
    out.samples.push_back(initial);
    double next_sample = initial.t + grid;
    while (solver.time() < t_end) {
        const double t_before = solver.time();
        double t_now;
        try {
            t_now = solver.step(t_end);
        } catch (const std::runtime_error&) {
            out.aborted = true;
            out.abort_reason = "adaptive step selection failed; last good state retained";
            break;
        }
        ++out.steps_taken;
        if (out.steps_taken > config.max_steps) {
            out.aborted = true;
            out.abort_reason = "step-count cap exceeded; last good state retained";
            break;
        }
        const auto& y = solver.state();
        if (!finite_state(y[0], y[1])) {
            out.aborted = true;
            out.abort_reason = "non-finite state encountered; last good state retained";
            break;
        }
        while (next_sample <= t_now + 1e-14 * std::max(1.0, std::abs(t_now)) &&
               next_sample < t_end - 1e-14 * std::max(1.0, std::abs(t_end))) {
            if (next_sample > t_before) {
                const auto ys = solver.interpolate(next_sample);
                out.samples.push_back({ys[0], ys[1], next_sample});
            }
            next_sample += grid;
        }
        if (t_now >= t_end) {
            out.samples.push_back({y[0], y[1], t_now});
            break;
        }
    }
    if (out.samples.size() < 2) {
        const auto& y = solver.state();
        out.samples.push_back({y[0], y[1], solver.time()});
    }
    return out;
}

TangentResult integrate_tangent(const LatticeParams& params, const PhaseState& initial,
                                double t_end, const IntegratorConfig& config) {
    require_nonlinear_form(params);
    config.validate();
    if (!(t_end > initial.t))
        throw std::invalid_argument("t_end must exceed the initial time");

    TangentResult res;
    res.trajectory.params = params;
    res.trajectory.config = config;

    if (config.method == Method::symplectic_verlet) {
        const double lambda = params.lambda, omega = params.omega;
        // tangent matrix, row-major [dx/dx0 dx/dp0; dp/dx0 dp/dp0],
        // advanced by the exact differential of each kick-drift-kick step
        std::array<double, 4> m{1.0, 0.0, 0.0, 1.0};
        Trajectory& out = res.trajectory;
        const double t0 = initial.t;
        const double span = t_end - t0;
        const std::uint64_t n_full = static_cast<std::uint64_t>(std::floor(span / config.dt));
        double x = initial.x, p = initial.p, t = t0;
        double f = -lambda * std::sin(x) * std::cos(omega * t);
        auto emit = [&](double xx, double pp, double tt) {
            out.samples.push_back({xx, pp, tt});
            res.tangents.push_back({tt, m});
        };
        emit(x, p, t);
        if (n_full + 2 > config.max_steps) {
            out.aborted = true;
            out.abort_reason = "step-count cap exceeded before integration started";
            return res;
        }
        std::uint64_t emitted_since = 0;
        auto advance = [&](double h, double t_new) {
            const double s1 = -lambda * std::cos(x) * std::cos(omega * t);
            const double p_half = p + 0.5 * h * f;
            double m10 = m[2] + 0.5 * h * s1 * m[0];
            double m11 = m[3] + 0.5 * h * s1 * m[1];
            x += h * p_half;
            const double m00 = m[0] + h * m10;
            const double m01 = m[1] + h * m11;
            const double f_new = -lambda * std::sin(x) * std::cos(omega * t_new);
            const double s2 = -lambda * std::cos(x) * std::cos(omega * t_new);
            p = p_half + 0.5 * h * f_new;
            m10 += 0.5 * h * s2 * m00;
            m11 += 0.5 * h * s2 * m01;
            m = {m00, m01, m10, m11};
            f = f_new;
            t = t_new;
            ++out.steps_taken;
        };
        for (std::uint64_t i = 1; i <= n_full; ++i) {
            advance(config.dt, t0 + static_cast<double>(i) * config.dt);
            if (++emitted_since == config.sample_every) {
                emitted_since = 0;
                if (!finite_state(x, p)) {
                    out.aborted = true;
                    out.abort_reason = "non-finite state encountered; last good state retained";
                    return res;
                }
                emit(x, p, t);
            }
        }
        const double rem = t_end - t;
        if (rem > 1e-12 * std::max(1.0, std::abs(t_end))) {
            advance(rem, t_end);
            emitted_since = config.sample_every;
        }
        if (!finite_state(x, p)) {
            out.aborted = true;
            out.abort_reason = "non-finite state encountered; last good state retained";
            return res;
        }
        if (emitted_since != 0 || out.samples.size() < 2) emit(x, p, t);
        return res;
    }

    // adaptive method: extended 6-dimensional system
    const double grid = config.dt * static_cast<double>(config.sample_every);
    detail::Dopri5<6, MotionTangentRhs> solver(MotionTangentRhs{params.lambda, params.omega},
                                               config.rel_tol, config.abs_tol);
    solver.init(initial.t, {initial.x, initial.p, 1.0, 0.0, 0.0, 1.0});
    auto push = [&](const detail::State<6>& y, double t) {
        res.trajectory.samples.push_back({y[0], y[1], t});
        res.tangents.push_back({t, {y[2], y[3], y[4], y[5]}});
    };
    push(solver.state(), initial.t);
    double next_sample = initial.t + grid;
    while (solver.time() < t_end) {
        const double t_before = solver.time();
        double t_now;
        try {
            t_now = solver.step(t_end);
        } catch (const std::runtime_error&) {
            res.trajectory.aborted = true;
            res.trajectory.abort_reason = "adaptive step selection failed; last good state retained";
            break;
        }
        ++res.trajectory.steps_taken;
        if (res.trajectory.steps_taken > config.max_steps) {
            res.trajectory.aborted = true;
            res.trajectory.abort_reason = "step-count cap exceeded; last good state retained";
            break;
        }
        const auto& y = solver.state();
        if (!finite_state(y[0], y[1])) {
            res.trajectory.aborted = true;
            res.trajectory.abort_reason = "non-finite state encountered; last good state retained";
            break;
        }
        while (next_sample <= t_now + 1e-14 * std::max(1.0, std::abs(t_now)) &&
               next_sample < t_end - 1e-14 * std::max(1.0, std::abs(t_end))) {
            if (next_sample > t_before) push(solver.interpolate(next_sample), next_sample);
            next_sample += grid;
        }
        if (t_now >= t_end) {
            push(y, t_now);
            break;
        }
    }
    return res;
}

}  // namespace latwalk
