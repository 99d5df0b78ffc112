#include "latwalk/approx.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "latwalk/detail/rk45.hpp"
#include "latwalk/integrate.hpp"
#include "latwalk/specfun.hpp"

namespace latwalk {

namespace {

double nearest_even_site(double x) {
    return 2.0 * M_PI * std::round(x / (2.0 * M_PI));
}

void require_positive_depth(const LatticeParams& params) {
    params.validate();
    if (!(params.lambda > 0.0))
        throw std::domain_error("this approximation requires lambda > 0");
}

std::pair<double, double> linear_decay_solution(const LatticeParams& params, double x0,
                                                double p0, double t, double slope) {
    // x'' + lambda (1 - slope * omega * t) x = 0 about the nearest even site
    require_positive_depth(params);
    if (!(params.omega > 0.0))
        throw std::domain_error("time-decaying trap approximations require omega > 0");
    const double xs = nearest_even_site(x0);
    const double lambda = params.lambda, omega = params.omega;
    auto rhs = [lambda, omega, slope](double tt, const detail::State<2>& y,
                                      detail::State<2>& d) {
        d[0] = y[1];
        d[1] = -lambda * (1.0 - slope * omega * tt) * y[0];
    };
    const auto y = detail::integrate_to<2>(rhs, 0.0, {x0 - xs, p0}, t, 1e-12, 1e-14);
    return {xs + y[0], y[1]};
}

double pendulum_momentum(double lambda, double x0, double t) {
    if (x0 == 0.0) return 0.0;
    const double k = std::sin(0.5 * x0);
    const double m = std::abs(k);
    const double K = elliptic_K(m);
    const double u = std::sqrt(lambda) * t + K;
    const double sn = jacobi_sn(u, m);
    // sign of cn from the quarter-period structure: cn > 0 on (-K, K) mod 4K
    double v = std::fmod(u + K, 4.0 * K);
    if (v < 0.0) v += 4.0 * K;
    const double sign_cn = (v < 2.0 * K) ? 1.0 : -1.0;
    const double cn_abs = std::sqrt(std::max(0.0, 1.0 - sn * sn));
    return 2.0 * k * std::sqrt(lambda) * cn_abs * sign_cn;
}

}  // namespace

std::pair<double, double> harmonic_solution(const LatticeParams& params, double x0,
                                            double p0, double t) {
    require_positive_depth(params);
    const double w = std::sqrt(params.lambda);
    const double xs = nearest_even_site(x0);
    const double dx = x0 - xs;
    return {xs + dx * std::cos(w * t) + (p0 / w) * std::sin(w * t),
            -dx * w * std::sin(w * t) + p0 * std::cos(w * t)};
}

std::pair<double, double> escape_solution(const LatticeParams& params, double x0,
                                          double p0, double t) {
    require_positive_depth(params);
    const double w = std::sqrt(params.lambda);
    const double xs = nearest_even_site(x0);
    const double dx = x0 - xs;
    return {xs + dx * std::cosh(w * t) + (p0 / w) * std::sinh(w * t),
            dx * w * std::sinh(w * t) + p0 * std::cosh(w * t)};
}

std::pair<double, double> parabolic_cylinder_solution(const LatticeParams& params, double x0,
                                                      double p0, double t) {
    require_positive_depth(params);
    if (!(params.omega > 0.0))
        throw std::domain_error("parabolic cylinder approximation requires omega > 0");
    const double xs = nearest_even_site(x0);
    const double lambda = params.lambda, omega = params.omega;
    auto rhs = [lambda, omega](double tt, const detail::State<2>& y, detail::State<2>& d) {
        d[0] = y[1];
        d[1] = -lambda * (1.0 - 0.5 * omega * omega * tt * tt) * y[0];
    };
    const auto y = detail::integrate_to<2>(rhs, 0.0, {x0 - xs, p0}, t, 1e-12, 1e-14);
    return {xs + y[0], y[1]};
}

std::pair<double, double> airy_solution(const LatticeParams& params, double x0, double p0,
                                        double t) {
    return linear_decay_solution(params, x0, p0, t, 2.0 / M_PI);
}

double pendulum_solution(double lambda, double x0, double t) {
    if (!(lambda > 0.0))
        throw std::domain_error("pendulum_solution requires lambda > 0");
    if (!(std::abs(x0) < M_PI))
        throw std::domain_error("pendulum_solution covers libration only (|x0| < pi)");
    if (x0 == 0.0) return 0.0;
    const double k = std::sin(0.5 * x0);
    const double m = std::abs(k);
    const double K = elliptic_K(m);
    return 2.0 * std::asin(k * jacobi_sn(std::sqrt(lambda) * t + K, m));
}

double PendulumOrbit::evaluate(double lambda, double t) const {
    return shifted ? M_PI + pendulum_solution(lambda, x0 - M_PI, t)
                   : pendulum_solution(lambda, x0, t);
}

double PendulumOrbit::momentum(double lambda, double t) const {
    return pendulum_momentum(lambda, shifted ? x0 - M_PI : x0, t);
}

std::vector<PendulumOrbit> pendulum_ensemble(double lambda, double mean_x0, double variance,
                                             int n, std::uint64_t seed) {
    if (!(lambda > 0.0))
        throw std::domain_error("pendulum_ensemble requires lambda > 0");
    if (n < 1) throw std::invalid_argument("ensemble size must be >= 1");
    if (!(variance >= 0.0)) throw std::invalid_argument("variance must be >= 0");

    // Box-Muller over mt19937_64: both are pinned by the standard, so the
    // draw sequence reproduces bit-for-bit across implementations.
    std::mt19937_64 gen(seed);
    auto uniform = [&gen]() {
        return (static_cast<double>(gen() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
    };
    const double sigma = std::sqrt(variance);
    const double edge = M_PI - 1e-9;

    std::vector<PendulumOrbit> orbits;
    orbits.reserve(2 * static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double u1 = uniform(), u2 = uniform();
        const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
        const double draw = mean_x0 + sigma * z;
        double plain = std::remainder(draw, 2.0 * M_PI);
        plain = std::clamp(plain, -edge, edge);
        double dev = std::remainder(draw - M_PI, 2.0 * M_PI);
        dev = std::clamp(dev, -edge, edge);
        orbits.push_back({plain, false});
        orbits.push_back({M_PI + dev, true});
    }
    return orbits;
}

std::pair<double, double> free_flight(double x0, double p0, double t) {
    return {x0 + p0 * t, p0};
}

double beat_momentum(const LatticeParams& params, double p0, double t, bool corrected) {
    params.validate();
    const double dm = p0 - params.omega;
    const double dp = p0 + params.omega;
    if (std::abs(dm) < 1e-6 || std::abs(dp) < 1e-6)
        throw std::domain_error("beat formula diverges at the resonance p0 = +-omega");
    const double half = 0.5 * params.lambda;
    if (corrected)
        return p0 + half * ((std::cos(dm * t) - 1.0) / dm + (std::cos(dp * t) - 1.0) / dp);
    return p0 + half * (std::cos(dm * t) / dm + std::cos(dp * t) / dp);
}

namespace {

std::pair<double, double> evaluate_approx(ApproxKind kind, const LatticeParams& params,
                                          const PhaseState& initial, double elapsed) {
    switch (kind) {
        case ApproxKind::harmonic:
            return harmonic_solution(params, initial.x, initial.p, elapsed);
        case ApproxKind::escape:
            return escape_solution(params, initial.x, initial.p, elapsed);
        case ApproxKind::parabolic_cylinder:
            return parabolic_cylinder_solution(params, initial.x, initial.p, elapsed);
        case ApproxKind::airy:
            return airy_solution(params, initial.x, initial.p, elapsed);
        case ApproxKind::pendulum: {
            const double xs = nearest_even_site(initial.x);
            return {xs + pendulum_solution(params.lambda, initial.x - xs, elapsed),
                    pendulum_momentum(params.lambda, initial.x - xs, elapsed)};
        }
        case ApproxKind::linearized_mathieu: {
            const double xs = nearest_even_site(initial.x);
            auto [x, p] = linearized_solution(params, initial.x - xs, initial.p, elapsed);
            return {xs + x, p};
        }
        case ApproxKind::free_flight:
            return free_flight(initial.x, initial.p, elapsed);
        case ApproxKind::beat_momentum:
            return {initial.x + initial.p * elapsed,
                    beat_momentum(params, initial.p, elapsed, false)};
        case ApproxKind::beat_momentum_corrected:
            return {initial.x + initial.p * elapsed,
                    beat_momentum(params, initial.p, elapsed, true)};
    }
    throw std::logic_error("unknown approximation kind");
}

}  // namespace

ComparisonReport compare(ApproxKind kind, const LatticeParams& params,
                         const PhaseState& initial, double window, int n_samples) {
    if (!(window > 0.0)) throw std::invalid_argument("comparison window must be positive");
    if (n_samples < 2) throw std::invalid_argument("need at least 2 comparison samples");

    IntegratorConfig ref;
    ref.method = Method::adaptive_reference;
    ref.rel_tol = 1e-10;
    ref.abs_tol = 1e-12;
    ref.dt = window / static_cast<double>(n_samples - 1);
    ref.sample_every = 1;

    LatticeParams nonlinear = params;
    nonlinear.eps0 = 0.0;  // the reference dynamics is the nonlinear model
    const Trajectory traj = integrate(nonlinear, initial, initial.t + window, ref);

    ComparisonReport rep;
    rep.t_start = initial.t;
    rep.t_end = initial.t + window;
    double sum_sq = 0.0;
    for (const PhaseState& s : traj.samples) {
        const auto [xa, pa] = evaluate_approx(kind, params, initial, s.t - initial.t);
        const double d = std::hypot(s.x - xa, s.p - pa);
        rep.l_inf = std::max(rep.l_inf, d);
        sum_sq += d * d;
    }
    rep.rms = std::sqrt(sum_sq / static_cast<double>(traj.samples.size()));
    return rep;
}

}  // namespace latwalk
