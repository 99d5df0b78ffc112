#ifndef LATWALK_STABILITY_HPP
#define LATWALK_STABILITY_HPP

#include <array>
#include <cstddef>
#include <vector>

namespace latwalk {

/// Monodromy matrix of the linearized trapped motion
/// x'' + (eps0 + lambda cos omega t) x = 0 over one modulation period
/// T = 2 pi / omega, integrated from the identity. The equation is trace-free,
/// so det = 1 (Liouville); |trace| <= 2 marks bounded (stable) solutions.
std::array<double, 4> monodromy(double eps0, double lambda, double omega);

struct StabilityCell {
    bool stable = false;
    double trace = 0.0;
    double mu_imag = 0.0;  ///< acosh(|trace|/2)/pi when unstable, else 0
};

/// Floquet stability over a (lambda, omega) grid at fixed eps0. Cells are
/// stored row-major as cells[il * omega_axis.size() + iw]; marginal cells
/// (|trace| within 1e-9 of 2) count as stable.
struct StabilityChart {
    std::vector<double> lambda_axis;
    std::vector<double> omega_axis;
    double eps0 = 0.0;
    std::vector<StabilityCell> cells;

    const StabilityCell& at(std::size_t il, std::size_t iw) const {
        return cells[il * omega_axis.size() + iw];
    }
};

struct AxisRange {
    double min = 0.0;
    double max = 0.0;
};

StabilityChart stability_chart(AxisRange lambda_range, AxisRange omega_range, double eps0,
                               std::size_t resolution_lambda, std::size_t resolution_omega);

/// Depth at which |trace| crosses 2 at fixed omega, located by bisection to
/// |d lambda| < 1e-6. Throws if |trace|-2 does not change sign across the
/// bracket.
double critical_boundary(double eps0, double omega, double lambda_lo, double lambda_hi);

}  // namespace latwalk

#endif
