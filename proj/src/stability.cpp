#include "latwalk/stability.hpp"

#include <cmath>
#include <stdexcept>

#include "latwalk/detail/rk45.hpp"

namespace latwalk {

namespace {

struct HillRhs {
    double eps0, lambda, omega;
    void operator()(double t, const detail::State<4>& y, detail::State<4>& d) const {
        const double stiff = -(eps0 + lambda * std::cos(omega * t));
        d[0] = y[1];
        d[1] = stiff * y[0];
        d[2] = y[3];
        d[3] = stiff * y[2];
    }
};

double monodromy_trace(double eps0, double lambda, double omega) {
    const auto m = monodromy(eps0, lambda, omega);
    return m[0] + m[3];
}

constexpr double kMarginalTol = 1e-9;

StabilityCell classify_cell(double trace) {
    StabilityCell cell;
    cell.trace = trace;
    cell.stable = std::abs(trace) <= 2.0 + kMarginalTol;
    cell.mu_imag = cell.stable ? 0.0 : std::acosh(std::abs(trace) / 2.0) / M_PI;
    return cell;
}

}  // namespace

std::array<double, 4> monodromy(double eps0, double lambda, double omega) {
    if (!(omega > 0.0))
        throw std::domain_error("monodromy needs omega > 0 (no period otherwise)");
    if (!std::isfinite(eps0) || !std::isfinite(lambda))
        throw std::invalid_argument("monodromy parameters must be finite");
    const double period = 2.0 * M_PI / omega;
    const auto y = detail::integrate_to<4>(HillRhs{eps0, lambda, omega}, 0.0,
                                           {1.0, 0.0, 0.0, 1.0}, period, 1e-10, 1e-12);
    return {y[0], y[2], y[1], y[3]};  // row-major [[c, s], [c', s']]
}

StabilityChart stability_chart(AxisRange lambda_range, AxisRange omega_range, double eps0,
                               std::size_t resolution_lambda, std::size_t resolution_omega) {
    if (resolution_lambda < 16 || resolution_omega < 16)
        throw std::invalid_argument("chart resolution must be at least 16 per axis");
    if (!(omega_range.min > 0.0) || !(omega_range.max >= omega_range.min))
        throw std::invalid_argument("omega range must be strictly positive and ordered");
    if (!(lambda_range.max >= lambda_range.min))
        throw std::invalid_argument("lambda range must be ordered");

    StabilityChart chart;
    chart.eps0 = eps0;
    chart.lambda_axis.resize(resolution_lambda);
    chart.omega_axis.resize(resolution_omega);
    for (std::size_t i = 0; i < resolution_lambda; ++i)
        chart.lambda_axis[i] =
            lambda_range.min + (lambda_range.max - lambda_range.min) * static_cast<double>(i) /
                                   static_cast<double>(resolution_lambda - 1);
    for (std::size_t i = 0; i < resolution_omega; ++i)
        chart.omega_axis[i] =
            omega_range.min + (omega_range.max - omega_range.min) * static_cast<double>(i) /
                                  static_cast<double>(resolution_omega - 1);

    chart.cells.resize(resolution_lambda * resolution_omega);
    for (std::size_t il = 0; il < resolution_lambda; ++il)
        for (std::size_t iw = 0; iw < resolution_omega; ++iw)
            chart.cells[il * resolution_omega + iw] = classify_cell(
                monodromy_trace(eps0, chart.lambda_axis[il], chart.omega_axis[iw]));
    return chart;
}

double critical_boundary(double eps0, double omega, double lambda_lo, double lambda_hi) {
    if (!(lambda_hi > lambda_lo))
        throw std::invalid_argument("bracket must satisfy lambda_lo < lambda_hi");
    auto margin = [&](double lambda) {
        return std::abs(monodromy_trace(eps0, lambda, omega)) - 2.0;
    };
    double flo = margin(lambda_lo), fhi = margin(lambda_hi);
    if (flo == 0.0) return lambda_lo;
    if (fhi == 0.0) return lambda_hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw std::invalid_argument("stability margin does not change sign across the bracket");
    while (lambda_hi - lambda_lo > 1e-6) {
        const double mid = 0.5 * (lambda_lo + lambda_hi);
        const double fm = margin(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lambda_lo = mid;
            flo = fm;
        } else {
            lambda_hi = mid;
        }
    }
    return 0.5 * (lambda_lo + lambda_hi);
}

}  // namespace latwalk
