#include "latwalk/approx.hpp"

#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "latwalk/integrate.hpp"
#include "latwalk/model.hpp"
#include "latwalk/specfun.hpp"
#include "test_util.hpp"

using namespace latwalk;

namespace {
// slowly modulated trap, zoomed on one site: the standing comparison fixture
const LatticeParams kSlowTrap{1.0, 0.02, 0.0};
const PhaseState kSlowTrapInit{0.6, 0.1, 0.0};
}  // namespace

TEST_CASE("harmonic solution basics") {
    const double lambda = 1.7;
    LatticeParams p{lambda, 0.02, 0.0};
    const double period = 2.0 * M_PI / std::sqrt(lambda);
    const auto [x, v] = harmonic_solution(p, 0.6, 0.1, period);
    CHECK(x == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(v == doctest::Approx(0.1).epsilon(1e-12));

    const auto [xf, vf] = harmonic_solution(p, 0.0, 0.0, 3.7);
    CHECK(xf == 0.0);
    CHECK(vf == 0.0);
    CHECK_THROWS_AS(harmonic_solution({0.0, 1.0, 0.0}, 0.1, 0.0, 1.0), std::domain_error);

    // measured about the nearest even site
    const auto [xs, vs] = harmonic_solution(p, 2.0 * M_PI + 0.3, 0.0, period / 2);
    CHECK(xs == doctest::Approx(2.0 * M_PI - 0.3).epsilon(1e-12));
    (void)vs;
}

TEST_CASE("harmonic orbit tracks the reference over one period") {
    const ComparisonReport rep = compare(ApproxKind::harmonic, kSlowTrap, kSlowTrapInit,
                                         2.0 * M_PI / std::sqrt(kSlowTrap.lambda));
    CHECK(rep.l_inf < 0.15);
    CHECK(rep.l_inf >= rep.rms);
    CHECK(rep.rms >= 0.0);
}

TEST_CASE("escape solution grows exponentially from the unstable site") {
    LatticeParams p{1.0, 0.02, 0.0};
    const auto [x0v, p0v] = escape_solution(p, 1e-3, 0.0, 0.0);
    CHECK(x0v == doctest::Approx(1e-3));
    CHECK(p0v == 0.0);

    const auto [xf, vf] = escape_solution(p, 0.0, 0.0, 11.0);
    CHECK(xf == 0.0);
    CHECK(vf == 0.0);

    const auto [x, v] = escape_solution(p, 1e-3, 0.0, 5.0);
    CHECK(x == doctest::Approx(1e-3 * std::cosh(5.0)).epsilon(1e-12));
    // cross-check against integrating the inverted-trap equation x'' = lambda x
    auto rhs = [](double, const std::vector<double>& y, std::vector<double>& d) {
        d[0] = y[1];
        d[1] = y[0];
    };
    const auto y = testutil::rk4_integrate(rhs, {1e-3, 0.0}, 0.0, 5.0, 50000);
    CHECK(x == doctest::Approx(y[0]).epsilon(1e-8));
    CHECK(v == doctest::Approx(y[1]).epsilon(1e-8));
}

TEST_CASE("quadratic depth-decay solution") {
    const auto [x0v, p0v] = parabolic_cylinder_solution(kSlowTrap, 0.6, 0.1, 0.0);
    CHECK(x0v == 0.6);
    CHECK(p0v == 0.1);

    // vanishing modulation reduces to the harmonic solution
    LatticeParams slow{1.0, 1e-4, 0.0};
    const auto [xp, vp] = parabolic_cylinder_solution(slow, 0.6, 0.1, 1.0);
    const auto [xh, vh] = harmonic_solution(slow, 0.6, 0.1, 1.0);
    CHECK(std::abs(xp - xh) < 1e-6);
    CHECK(std::abs(vp - vh) < 1e-6);

    // tolerance-halved self-check through an independent fixed-step integration
    const double lambda = kSlowTrap.lambda, omega = kSlowTrap.omega;
    auto rhs = [lambda, omega](double t, const std::vector<double>& y, std::vector<double>& d) {
        d[0] = y[1];
        d[1] = -lambda * (1.0 - 0.5 * omega * omega * t * t) * y[0];
    };
    const auto y = testutil::rk4_integrate(rhs, {0.6, 0.1}, 0.0, 20.0, 400000);
    const auto [x, v] = parabolic_cylinder_solution(kSlowTrap, 0.6, 0.1, 20.0);
    CHECK(std::abs(x - y[0]) < 1e-8);
    CHECK(std::abs(v - y[1]) < 1e-8);
}

TEST_CASE("depth-anchored linear decay beats the harmonic orbit over one period") {
    const double period = 2.0 * M_PI / std::sqrt(kSlowTrap.lambda);
    const ComparisonReport airy = compare(ApproxKind::airy, kSlowTrap, kSlowTrapInit, period);
    const ComparisonReport harm = compare(ApproxKind::harmonic, kSlowTrap, kSlowTrapInit, period);
    CHECK(airy.l_inf < harm.l_inf);
    CHECK(airy.l_inf < 0.06);
}

TEST_CASE("pendulum closed form honors release conditions") {
    CHECK(pendulum_solution(1.0, 0.4, 0.0) == doctest::Approx(0.4).epsilon(1e-10));
    CHECK(pendulum_solution(1.0, -0.4, 0.0) == doctest::Approx(-0.4).epsilon(1e-10));
    CHECK(pendulum_solution(2.0, 0.0, 3.3) == 0.0);
    CHECK_THROWS_AS(pendulum_solution(0.0, 0.4, 1.0), std::domain_error);
    CHECK_THROWS_AS(pendulum_solution(1.0, 3.2, 1.0), std::domain_error);
}

TEST_CASE("pendulum half period swings to the mirror point") {
    const double lambda = 1.0, x0 = 0.4;
    const double k = std::sin(0.5 * x0);
    const double half_period = 2.0 * elliptic_K(k) / std::sqrt(lambda);
    CHECK(pendulum_solution(lambda, x0, half_period) == doctest::Approx(-x0).epsilon(1e-9));
}

TEST_CASE("small-angle pendulum matches the harmonic law") {
    const double x0 = 0.01, lambda = 1.0;
    for (double t = 0.0; t <= 2.0 * M_PI; t += 0.1)
        CHECK(std::abs(pendulum_solution(lambda, x0, t) - x0 * std::cos(t)) < 1e-5);
}

TEST_CASE("pendulum closed form against the swing equation") {
    testutil::SplitMix rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const double lambda = (trial % 3 == 0) ? 0.5 : (trial % 3 == 1) ? 1.0 : 2.0;
        const double x0 = rng.uniform(-3.0, 3.0);
        auto rhs = [lambda](double, const std::vector<double>& y, std::vector<double>& d) {
            d[0] = y[1];
            d[1] = -lambda * std::sin(y[0]);
        };
        const double k = std::abs(std::sin(0.5 * x0));
        const double period = 4.0 * elliptic_K(k) / std::sqrt(lambda);
        std::vector<double> y = {x0, 0.0};
        double t = 0.0;
        const double t_end = 10.0 * period;
        const int chunks = 50;
        for (int c = 0; c < chunks; ++c) {
            const double t_next = t_end * (c + 1) / chunks;
            y = testutil::rk4_integrate(rhs, y, t, t_next, 20000);
            CHECK(std::abs(pendulum_solution(lambda, x0, t_next) - y[0]) < 1e-6);
            t = t_next;
        }
    }
}

TEST_CASE("pendulum momentum is the time derivative of the position law") {
    PendulumOrbit orbit{0.9, false};
    const double lambda = 1.3, h = 1e-6;
    for (double t : {0.3, 1.7, 4.4, 9.2}) {
        const double fd =
            (orbit.evaluate(lambda, t + h) - orbit.evaluate(lambda, t - h)) / (2.0 * h);
        CHECK(orbit.momentum(lambda, t) == doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("pendulum ensemble is deterministic and degenerate at zero variance") {
    const auto a = pendulum_ensemble(1.0, 0.4, 0.0, 10, 42);
    CHECK(a.size() == 20);
    for (const auto& orbit : a)
        if (!orbit.shifted) CHECK(orbit.x0 == doctest::Approx(0.4));

    const auto b = pendulum_ensemble(1.0, 0.4, M_PI / 2, 25, 7);
    const auto c = pendulum_ensemble(1.0, 0.4, M_PI / 2, 25, 7);
    REQUIRE(b.size() == c.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
        CHECK(b[i].x0 == c[i].x0);
        CHECK(b[i].shifted == c[i].shifted);
    }
    const auto d = pendulum_ensemble(1.0, 0.4, M_PI / 2, 25, 8);
    CHECK(d[0].x0 != b[0].x0);
}

TEST_CASE("ensemble orbits envelope the strictly simulated walking band") {
    // strict run: slow modulation, pendulum-like shifting between sites
    LatticeParams p{1.0, 0.1, 0.0};
    IntegratorConfig cfg;
    cfg.dt = 1e-3;
    cfg.sample_every = 200;
    const Trajectory strict = integrate(p, {0.4, 0.0, 0.0}, 2000.0, cfg);

    const auto orbits = pendulum_ensemble(1.0, 0.4, M_PI / 2, 50, 2024);
    std::vector<testutil::Point> cloud;
    for (const auto& orbit : orbits) {
        const double k = std::abs(std::sin(0.5 * (orbit.shifted ? orbit.x0 - M_PI : orbit.x0)));
        const double period = 4.0 * elliptic_K(std::min(k, 1.0 - 1e-12)) / 1.0;
        for (int i = 0; i < 120; ++i) {
            const double t = period * i / 120.0;
            double x = std::fmod(orbit.evaluate(1.0, t), 2.0 * M_PI);
            if (x < 0) x += 2.0 * M_PI;
            cloud.push_back({x, orbit.momentum(1.0, t)});
        }
    }
    const auto hull = testutil::convex_hull(cloud);

    std::size_t inside = 0, total = 0;
    for (const PhaseState& s : strict.samples) {
        double x = std::fmod(s.x, 2.0 * M_PI);
        if (x < 0) x += 2.0 * M_PI;
        ++total;
        if (testutil::point_in_hull(hull, {x, s.p})) ++inside;
    }
    CHECK(static_cast<double>(inside) / static_cast<double>(total) >= 0.8);
}

TEST_CASE("free flight and its comparison degenerate case") {
    const auto [x, v] = free_flight(0.2, 0.1, 1000.0);
    CHECK(x == doctest::Approx(100.2));
    CHECK(v == 0.1);
    const ComparisonReport rep =
        compare(ApproxKind::free_flight, {0.0, 1.0, 0.0}, {0.2, 0.1, 0.0}, 50.0);
    CHECK(rep.l_inf < 1e-9);
}

TEST_CASE("beat momentum formula variants") {
    LatticeParams p{1.0, 10.0, 0.0};
    const double p0 = 0.1;
    CHECK(beat_momentum(p, p0, 0.0, true) == doctest::Approx(p0).epsilon(1e-15));
    CHECK(beat_momentum(p, p0, 0.0, false) ==
          doctest::Approx(p0 + p.lambda * p0 / (p0 * p0 - p.omega * p.omega)).epsilon(1e-12));
    LatticeParams res{1.0, 1.0, 0.0};
    CHECK_THROWS_AS(beat_momentum(res, 1.0 + 1e-9, 0.0, true), std::domain_error);
    CHECK_THROWS_AS(beat_momentum(res, -1.0, 0.0, true), std::domain_error);
}

TEST_CASE("corrected beat keeps its time average near the launch momentum") {
    LatticeParams p{1.0, 10.0, 0.0};
    const double p0 = 0.1;
    // average over an integer number of envelope periods
    const double envelope = 2.0 * M_PI / std::min(std::abs(p0 - p.omega), p0 + p.omega);
    const double T = 3.0 * envelope;
    double mean = 0.0;
    const int n = 30000;
    for (int i = 0; i < n; ++i) mean += beat_momentum(p, p0, T * i / n, true);
    mean /= n;
    const double bound = p.lambda / (2.0 * std::abs(p0 - p.omega)) +
                         p.lambda / (2.0 * (p0 + p.omega));
    CHECK(std::abs(mean - p0) < bound);
}

TEST_CASE("every reduced model reproduces the initial state at t = 0") {
    const LatticeParams p{1.3, 0.7, 0.0};
    const double x0 = 0.45, p0 = -0.2;
    for (ApproxKind kind : {ApproxKind::harmonic, ApproxKind::escape,
                            ApproxKind::parabolic_cylinder, ApproxKind::airy,
                            ApproxKind::linearized_mathieu, ApproxKind::free_flight,
                            ApproxKind::beat_momentum_corrected}) {
        const ComparisonReport rep = compare(kind, p, {x0, p0, 0.0}, 1e-9, 2);
        CHECK(rep.l_inf < 1e-7);
    }
}
