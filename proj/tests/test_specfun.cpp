#include "latwalk/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "latwalk/model.hpp"
#include "test_util.hpp"

using namespace latwalk;

namespace {

// defining integral of K, evaluated by quadrature independent of the AGM
double K_quadrature(double k) {
    return testutil::adaptive_simpson(
        [k](double th) {
            const double s = std::sin(th);
            return 1.0 / std::sqrt(1.0 - k * k * s * s);
        },
        0.0, M_PI / 2, 1e-14);
}

}  // namespace

TEST_CASE("complete elliptic integral against quadrature") {
    CHECK(elliptic_K(0.0) == doctest::Approx(M_PI / 2).epsilon(1e-15));
    const double k1 = std::sin(0.2);
    CHECK(std::abs(elliptic_K(k1) - K_quadrature(k1)) < 1e-10);
    const double K999 = elliptic_K(0.999);
    CHECK(std::abs(K999 - K_quadrature(0.999)) / K999 < 1e-9);
    CHECK_THROWS_AS(elliptic_K(1.0), std::domain_error);
    CHECK_THROWS_AS(elliptic_K(-0.1), std::domain_error);
}

TEST_CASE("jacobi sn limiting cases") {
    CHECK(jacobi_sn(0.7, 0.0) == doctest::Approx(std::sin(0.7)).epsilon(1e-14));
    CHECK(jacobi_sn(elliptic_K(0.3), 0.3) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(jacobi_sn(2.5, 1.0) == doctest::Approx(std::tanh(2.5)).epsilon(1e-14));
    CHECK_THROWS_AS(jacobi_sn(1.0, 1.5), std::domain_error);
}

TEST_CASE("jacobi sn against the amplitude ODE") {
    // dy/du = sqrt((1 - y^2)(1 - k^2 y^2)), y(0) = 0, below the turning point
    const double k = 0.6;
    auto rhs = [k](double, const std::vector<double>& y, std::vector<double>& d) {
        const double y2 = y[0] * y[0];
        d[0] = std::sqrt(std::max(0.0, (1.0 - y2) * (1.0 - k * k * y2)));
    };
    const auto y = testutil::rk4_integrate(rhs, {0.0}, 0.0, 1.7, 200000);
    CHECK(std::abs(jacobi_sn(1.7, k) - y[0]) < 1e-8);
}

TEST_CASE("jacobi sn periodicity") {
    testutil::SplitMix rng(21);
    for (int i = 0; i < 60; ++i) {
        const double k = rng.uniform(0.05, 0.95);
        const double u = rng.uniform(-30.0, 30.0);
        const double K = elliptic_K(k);
        CHECK(std::abs(jacobi_sn(u + 4.0 * K, k) - jacobi_sn(u, k)) < 1e-8);
        CHECK(std::abs(jacobi_sn(-u, k) + jacobi_sn(u, k)) < 1e-10);
    }
}

TEST_CASE("linear depth-ramp solution honors its initial conditions") {
    LatticeParams p{1.0, 0.02, 0.0};
    const auto [x, v] = airy_regime_solution(p, 0.6, 0.1, 0.0);
    CHECK(x == 0.6);
    CHECK(v == 0.1);
    CHECK_THROWS_AS(airy_regime_solution({0.0, 0.02, 0.0}, 0.6, 0.1, 1.0), std::domain_error);
}

TEST_CASE("linear depth-ramp solution against an independent integration") {
    LatticeParams p{1.0, 0.02, 0.0};
    const double lambda = p.lambda, omega = p.omega;
    auto rhs = [lambda, omega](double t, const std::vector<double>& y, std::vector<double>& d) {
        d[0] = y[1];
        d[1] = -lambda * (M_PI / 2 - omega * t) * y[0];
    };
    const auto y = testutil::rk4_integrate(rhs, {0.6, 0.1}, 0.0, 10.0, 100000);
    const auto [x, v] = airy_regime_solution(p, 0.6, 0.1, 10.0);
    CHECK(std::abs(x - y[0]) < 1e-8);
    CHECK(std::abs(v - y[1]) < 1e-8);
}

TEST_CASE("depth-ramp solution starts as a stiffened harmonic oscillation") {
    // for omega*t << 1 the ramp acts like a constant trap of depth lambda*pi/2
    for (double lambda : {0.5, 1.0, 2.0}) {
        LatticeParams p{lambda, 0.02, 0.0};
        const double t = 0.1 / std::sqrt(lambda);
        const double weff = std::sqrt(lambda * M_PI / 2);
        const double xh = 0.6 * std::cos(weff * t) + 0.1 / weff * std::sin(weff * t);
        const auto [x, v] = airy_regime_solution(p, 0.6, 0.1, t);
        CHECK(std::abs(x - xh) / std::abs(xh) < 1e-2);
    }
}

TEST_CASE("mathieu fundamental pair in the constant-coefficient limit") {
    const double a = 2.5, tau = 3.0;
    const MathieuFundamental f = mathieu_fundamental(a, 0.0, tau);
    const double w = std::sqrt(a);
    CHECK(f.c == doctest::Approx(std::cos(w * tau)).epsilon(1e-9));
    CHECK(f.s == doctest::Approx(std::sin(w * tau) / w).epsilon(1e-9));
    CHECK(f.wronskian() == doctest::Approx(1.0).epsilon(1e-10));

    const MathieuFundamental g = mathieu_fundamental(0.0, 0.0, 4.2);
    CHECK(g.c == doctest::Approx(1.0));
    CHECK(g.s == doctest::Approx(4.2));
}

TEST_CASE("mathieu fundamental pair against direct integration") {
    const double a = 0.0, q = -2.0 / (2.8 * 2.8), tau = 5.0;
    auto rhs = [a, q](double t, const std::vector<double>& y, std::vector<double>& d) {
        const double stiff = -(a - 2.0 * q * std::cos(2.0 * t));
        d[0] = y[1];
        d[1] = stiff * y[0];
        d[2] = y[3];
        d[3] = stiff * y[2];
    };
    const auto y = testutil::rk4_integrate(rhs, {1.0, 0.0, 0.0, 1.0}, 0.0, tau, 200000);
    const MathieuFundamental f = mathieu_fundamental(a, q, tau);
    CHECK(std::abs(f.c - y[0]) < 1e-8);
    CHECK(std::abs(f.c_dot - y[1]) < 1e-8);
    CHECK(std::abs(f.s - y[2]) < 1e-8);
    CHECK(std::abs(f.s_dot - y[3]) < 1e-8);
}

TEST_CASE("mathieu wronskian is one across the parameter plane") {
    // in unstable cells the pair grows like e^{mu tau}; the identity can only
    // hold to round-off relative to the squared solution magnitude
    testutil::SplitMix rng(22);
    for (int i = 0; i < 100; ++i) {
        const double a = rng.uniform(-5.0, 5.0);
        const double q = rng.uniform(-5.0, 5.0);
        const double tau = rng.uniform(0.0, 20.0);
        const MathieuFundamental f = mathieu_fundamental(a, q, tau);
        const double mag = std::max({std::abs(f.c), std::abs(f.c_dot), std::abs(f.s),
                                     std::abs(f.s_dot), 1.0});
        const double tol = std::max(1e-9, 32.0 * std::numeric_limits<double>::epsilon() * mag * mag);
        CHECK(std::abs(f.wronskian() - 1.0) < tol);
    }
}

TEST_CASE("mathieu fundamental pair extends to negative times") {
    const double a = 1.3, q = 0.7;
    auto rhs = [a, q](double t, const std::vector<double>& y, std::vector<double>& d) {
        const double stiff = -(a - 2.0 * q * std::cos(2.0 * t));
        d[0] = y[1];
        d[1] = stiff * y[0];
    };
    const auto y = testutil::rk4_integrate(rhs, {1.0, 0.0}, 0.0, -7.3, 200000);
    const MathieuFundamental f = mathieu_fundamental(a, q, -7.3);
    CHECK(std::abs(f.c - y[0]) < 1e-8);
    CHECK(std::abs(f.c_dot - y[1]) < 1e-8);
}

TEST_CASE("characteristic exponent in the closed-form limit") {
    const CharExponent e = mathieu_char_exponent(0.25, 0.0);
    CHECK(e.mu.real() == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(e.mu.imag() == 0.0);
    CHECK(e.trace == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(e.stable());
}

TEST_CASE("drive-strength stability threshold at zero mean stiffness") {
    CHECK(mathieu_char_exponent(0.0, 0.45).stable());
    CHECK(mathieu_char_exponent(0.0, -0.45).stable());
    CHECK(mathieu_char_exponent(0.0, 0.60).stable());
    CHECK_FALSE(mathieu_char_exponent(0.0, 1.00).stable());

    // bisect the transition
    double lo = 0.60, hi = 1.00;
    while (hi - lo > 1e-4) {
        const double mid = 0.5 * (lo + hi);
        (mathieu_char_exponent(0.0, mid).stable() ? lo : hi) = mid;
    }
    CHECK(lo > 0.85);
    CHECK(lo < 0.95);
}

TEST_CASE("characteristic exponent symmetry and quick-drive limit") {
    testutil::SplitMix rng(23);
    for (int i = 0; i < 40; ++i) {
        const double a = rng.uniform(-3.0, 3.0);
        const double q = rng.uniform(0.0, 3.0);
        CHECK(mathieu_char_exponent(a, q).trace ==
              doctest::Approx(mathieu_char_exponent(a, -q).trace).epsilon(1e-9));
    }

    // fixed depth, increasing drive frequency: exponent decays monotonically
    double prev = 1e9;
    for (double omega : {10.0, 12.5, 16.0, 20.0}) {
        const CharExponent e = mathieu_char_exponent(0.0, -2.0 / (omega * omega));
        CHECK(e.stable());
        CHECK(e.mu.real() < prev);
        prev = e.mu.real();
    }
    CHECK(prev < 0.01);
}

TEST_CASE("linearized trapped solution solves the time-domain equation") {
    auto check_against_ode = [](const LatticeParams& p, double x0, double p0, double t_end) {
        const double eps0 = p.eps0, lambda = p.lambda, omega = p.omega;
        auto rhs = [eps0, lambda, omega](double t, const std::vector<double>& y,
                                         std::vector<double>& d) {
            d[0] = y[1];
            d[1] = -(eps0 + lambda * std::cos(omega * t)) * y[0];
        };
        const auto y = testutil::rk4_integrate(rhs, {x0, p0}, 0.0, t_end, 400000);
        const auto [x, v] = linearized_solution(p, x0, p0, t_end);
        CHECK(std::abs(x - y[0]) < 1e-8);
        CHECK(std::abs(v - y[1]) < 1e-8);
    };
    check_against_ode({1.0, 2.8, 0.0}, 0.2, 0.18, 25.0);
    check_against_ode({1.0, 2.8, 0.1}, 0.2, 0.18, 25.0);
    check_against_ode({0.5, 1.7, 0.0}, -0.1, 0.05, 12.0);

    const auto [x0v, p0v] = linearized_solution({1.0, 2.8, 0.0}, 0.2, 0.18, 0.0);
    CHECK(x0v == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(p0v == doctest::Approx(0.18).epsilon(1e-14));
}
