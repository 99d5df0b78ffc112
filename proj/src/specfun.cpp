#include "latwalk/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "latwalk/detail/rk45.hpp"

namespace latwalk {

namespace {

constexpr int kAgmMax = 64;

struct Mat2 {
    // row-major fundamental matrix [[c, s], [c_dot, s_dot]]
    double a, b, c, d;

    Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d,
                c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Mat2 inverse_unimodular() const { return {d, -b, -c, a}; }
    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
};

Mat2 mat2_power(Mat2 base, long n) {
    if (n < 0) {
        base = base.inverse_unimodular();
        n = -n;
    }
    Mat2 acc = Mat2::identity();
    while (n > 0) {
        if (n & 1) acc = acc * base;
        base = base * base;
        n >>= 1;
    }
    return acc;
}

struct MathieuRhs {
    double a, q;
    void operator()(double tau, const detail::State<4>& y, detail::State<4>& dydt) const {
        const double stiff = -(a - 2.0 * q * std::cos(2.0 * tau));
        dydt[0] = y[1];
        dydt[1] = stiff * y[0];
        dydt[2] = y[3];
        dydt[3] = stiff * y[2];
    }
};

Mat2 mathieu_fundamental_matrix(double a, double q, double tau) {
    const auto y = detail::integrate_to<4>(MathieuRhs{a, q}, 0.0,
                                           {1.0, 0.0, 0.0, 1.0}, tau, 1e-12, 1e-14);
    return {y[0], y[2], y[1], y[3]};
}

}  // namespace

double elliptic_K(double k) {
    if (!(k >= 0.0))
        throw std::domain_error("elliptic modulus must be >= 0");
    if (!(k < 1.0))
        throw std::domain_error("complete elliptic integral K diverges for modulus >= 1");
    double a = 1.0, b = std::sqrt((1.0 - k) * (1.0 + k));
    for (int i = 0; i < kAgmMax && std::abs(a - b) > 1e-16 * a; ++i) {
        const double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
    }
    return M_PI / (2.0 * a);
}

double jacobi_sn(double u, double k) {
    if (!(k >= 0.0 && k <= 1.0))
        throw std::domain_error("jacobi_sn modulus must lie in [0, 1]");
    if (!std::isfinite(u))
        throw std::domain_error("jacobi_sn argument must be finite");
    if (k == 0.0) return std::sin(u);
    if (k == 1.0) return std::tanh(u);

    // symmetry reduction into [0, K] keeps the ascending amplitude small:
    // sn is odd, 2K-antiperiodic up to sign, and symmetric about K
    const double K = elliptic_K(k);
    double sign = 1.0;
    if (u < 0.0) {
        u = -u;
        sign = -sign;
    }
    u = std::fmod(u, 4.0 * K);
    if (u > 2.0 * K) {
        u -= 2.0 * K;
        sign = -sign;
    }
    if (u > K) u = 2.0 * K - u;

    // descending Landen: AGM scale sequence, then amplitude back-recursion
    std::array<double, kAgmMax> as, cs;
    double a = 1.0, b = std::sqrt((1.0 - k) * (1.0 + k)), c = k;
    int n = 0;
    as[0] = a;
    cs[0] = c;
    while (std::abs(c) > 1e-16 * a && n + 1 < kAgmMax) {
        const double an = 0.5 * (a + b);
        c = 0.5 * (a - b);
        b = std::sqrt(a * b);
        a = an;
        ++n;
        as[n] = a;
        cs[n] = c;
    }
    double phi = std::ldexp(1.0, n) * as[n] * u;
    for (int i = n; i > 0; --i)
        phi = 0.5 * (phi + std::asin(std::clamp(cs[i] / as[i] * std::sin(phi), -1.0, 1.0)));
    return sign * std::sin(phi);
}

std::pair<double, double> airy_regime_solution(const LatticeParams& params, double x0,
                                               double p0, double t) {
    params.validate();
    if (!(params.lambda > 0.0) || !(params.omega > 0.0))
        throw std::domain_error("airy_regime_solution requires lambda > 0 and omega > 0");
    const double lambda = params.lambda, omega = params.omega;
    auto rhs = [lambda, omega](double tt, const detail::State<2>& y, detail::State<2>& d) {
        d[0] = y[1];
        d[1] = -lambda * (M_PI / 2.0 - omega * tt) * y[0];
    };
    const auto y = detail::integrate_to<2>(rhs, 0.0, {x0, p0}, t, 1e-12, 1e-14);
    return {y[0], y[1]};
}

MathieuFundamental mathieu_fundamental(double a, double q, double tau) {
    if (!std::isfinite(a) || !std::isfinite(q) || !std::isfinite(tau))
        throw std::domain_error("mathieu_fundamental arguments must be finite");
    const double n_real = std::floor(tau / M_PI);
    const long n = static_cast<long>(n_real);
    const double tau0 = tau - n_real * M_PI;
    Mat2 phi = (tau0 != 0.0) ? mathieu_fundamental_matrix(a, q, tau0) : Mat2::identity();
    if (n != 0) {
        const Mat2 monodromy = mathieu_fundamental_matrix(a, q, M_PI);
        phi = phi * mat2_power(monodromy, n);
    }
    return {phi.a, phi.c, phi.b, phi.d};
}

CharExponent mathieu_char_exponent(double a, double q) {
    const Mat2 m = mathieu_fundamental_matrix(a, q, M_PI);
    const double trace = m.a + m.d;
    if (std::abs(trace) <= 2.0)
        return {std::complex<double>(std::acos(trace / 2.0) / M_PI, 0.0), trace};
    return {std::complex<double>(0.0, std::acosh(std::abs(trace) / 2.0) / M_PI), trace};
}

std::pair<double, double> linearized_solution(const LatticeParams& params, double x0,
                                              double p0, double t) {
    params.validate();
    if (!(params.omega > 0.0))
        throw std::domain_error("linearized_solution requires omega > 0");
    const double omega = params.omega;
    const double a = 4.0 * params.eps0 / (omega * omega);
    const double q = -2.0 * params.lambda / (omega * omega);
    const MathieuFundamental f = mathieu_fundamental(a, q, 0.5 * omega * t);
    const double x = x0 * f.c + p0 * (2.0 / omega) * f.s;
    const double p = x0 * (0.5 * omega) * f.c_dot + p0 * f.s_dot;
    return {x, p};
}

}  // namespace latwalk
