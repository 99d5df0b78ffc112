#ifndef LATWALK_DETAIL_RK45_HPP
#define LATWALK_DETAIL_RK45_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace latwalk::detail {

/* Dormand-Prince 5(4) embedded pair with the classic quartic dense-output
 * interpolant (Hairer, Norsett & Wanner's DOPRI5). The right-hand side is a
 * callable rhs(t, y, dydt) over fixed-size state arrays. Used as the
 * high-accuracy reference integrator throughout; defaults target 1e-10/1e-12.
 */
template <std::size_t N>
using State = std::array<double, N>;

template <std::size_t N, class Rhs>
class Dopri5 {
public:
    Dopri5(Rhs rhs, double rel_tol, double abs_tol)
        : rhs_(rhs), rtol_(rel_tol), atol_(abs_tol) {
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
            throw std::invalid_argument("tolerances must be positive");
    }

    void init(double t0, const State<N>& y0) {
        t_ = t0;
        y_ = y0;
        rhs_(t_, y_, k1_);
        h_ = 0.0;
        have_step_ = false;
    }

    double time() const { return t_; }
    const State<N>& state() const { return y_; }
    std::size_t steps_accepted() const { return n_accept_; }
    std::size_t steps_rejected() const { return n_reject_; }

    /// Advance by one accepted step, not exceeding t_limit. Returns the new
    /// time. The interval [t_prev, t] becomes available to interpolate().
    double step(double t_limit) {
        const double dir = (t_limit >= t_) ? 1.0 : -1.0;
        if (h_ == 0.0) h_ = dir * initial_step_guess(t_limit);
        if (dir * h_ <= 0.0) h_ = -h_;

        State<N> ytmp, k2, k3, k4, k5, k6, k7, ynew, yerr;
        for (int attempt = 0; attempt < 1000; ++attempt) {
            double h = h_;
            if (dir * (t_ + h - t_limit) > 0.0) h = t_limit - t_;
            if (std::abs(h) < 1e-14 * std::max(1.0, std::abs(t_))) {
                t_prev_ = t_;
                t_ = t_limit;
                have_step_ = false;
                return t_;
            }

            for (std::size_t i = 0; i < N; ++i)
                ytmp[i] = y_[i] + h * a21 * k1_[i];
            rhs_(t_ + c2 * h, ytmp, k2);
            for (std::size_t i = 0; i < N; ++i)
                ytmp[i] = y_[i] + h * (a31 * k1_[i] + a32 * k2[i]);
            rhs_(t_ + c3 * h, ytmp, k3);
            for (std::size_t i = 0; i < N; ++i)
                ytmp[i] = y_[i] + h * (a41 * k1_[i] + a42 * k2[i] + a43 * k3[i]);
            rhs_(t_ + c4 * h, ytmp, k4);
            for (std::size_t i = 0; i < N; ++i)
                ytmp[i] = y_[i] + h * (a51 * k1_[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
            rhs_(t_ + c5 * h, ytmp, k5);
            for (std::size_t i = 0; i < N; ++i)
                ytmp[i] = y_[i] + h * (a61 * k1_[i] + a62 * k2[i] + a63 * k3[i] +
                                       a64 * k4[i] + a65 * k5[i]);
            rhs_(t_ + h, ytmp, k6);
            for (std::size_t i = 0; i < N; ++i)
                ynew[i] = y_[i] + h * (a71 * k1_[i] + a73 * k3[i] + a74 * k4[i] +
                                       a75 * k5[i] + a76 * k6[i]);
            rhs_(t_ + h, ynew, k7);  // FSAL stage
            for (std::size_t i = 0; i < N; ++i)
                yerr[i] = h * (e1 * k1_[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                               e6 * k6[i] + e7 * k7[i]);

            double err = 0.0;
            bool finite = true;
            for (std::size_t i = 0; i < N; ++i) {
                if (!std::isfinite(ynew[i])) { finite = false; break; }
                const double sk = atol_ + rtol_ * std::max(std::abs(y_[i]), std::abs(ynew[i]));
                const double r = yerr[i] / sk;
                err += r * r;
            }
            err = finite ? std::sqrt(err / static_cast<double>(N)) : 1e10;

            if (err <= 1.0) {
                prepare_dense(h, k3, k4, k5, k6, k7, ynew);
                t_prev_ = t_;
                h_prev_ = h;
                t_ += h;
                y_ = ynew;
                k1_ = k7;
                ++n_accept_;
                have_step_ = true;
                const double fac =
                    std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(err, 1e-30), -0.2)));
                h_ = h * fac;
                return t_;
            }
            ++n_reject_;
            h_ = h * std::max(0.2, 0.9 * std::pow(err, -0.2));
        }
        throw std::runtime_error("adaptive step size selection failed to converge");
    }

    /// Dense output on the last accepted step; ts must lie in [t_prev, t].
    State<N> interpolate(double ts) const {
        if (!have_step_) return y_;
        const double th = (ts - t_prev_) / h_prev_;
        const double th1 = 1.0 - th;
        State<N> out;
        for (std::size_t i = 0; i < N; ++i)
            out[i] = rc1_[i] + th * (rc2_[i] + th1 * (rc3_[i] + th * (rc4_[i] + th1 * rc5_[i])));
        return out;
    }

private:
    void prepare_dense(double h, const State<N>& k3, const State<N>& k4,
                       const State<N>& k5, const State<N>& k6, const State<N>& k7,
                       const State<N>& ynew) {
        for (std::size_t i = 0; i < N; ++i) {
            const double ydiff = ynew[i] - y_[i];
            const double bspl = h * k1_[i] - ydiff;
            rc1_[i] = y_[i];
            rc2_[i] = ydiff;
            rc3_[i] = bspl;
            rc4_[i] = ydiff - h * k7[i] - bspl;
            rc5_[i] = h * (d1 * k1_[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                           d6 * k6[i] + d7 * k7[i]);
        }
    }

    double initial_step_guess(double t_limit) const {
        double ynorm = 0.0, fnorm = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            ynorm = std::max(ynorm, std::abs(y_[i]));
            fnorm = std::max(fnorm, std::abs(k1_[i]));
        }
        double h = (fnorm > 1e-12) ? 0.01 * (ynorm + 1.0) / fnorm : 1e-3;
        return std::min(h, std::max(1e-10, std::abs(t_limit - t_)));
    }

    // Butcher tableau (Dormand & Prince, 1980)
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                            a75 = -2187.0 / 6784, a76 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
    static constexpr double d1 = -12715105075.0 / 11282082432.0,
                            d3 = 87487479700.0 / 32700410799.0,
                            d4 = -10690763975.0 / 1880347072.0,
                            d5 = 701980252875.0 / 199316789632.0,
                            d6 = -1453857185.0 / 822651844.0,
                            d7 = 69997945.0 / 29380423.0;

    Rhs rhs_;
    double rtol_, atol_;
    double t_ = 0.0, h_ = 0.0;
    double t_prev_ = 0.0, h_prev_ = 0.0;
    State<N> y_{}, k1_{};
    State<N> rc1_{}, rc2_{}, rc3_{}, rc4_{}, rc5_{};
    bool have_step_ = false;
    std::size_t n_accept_ = 0, n_reject_ = 0;
};

/// Integrate rhs from (t0, y0) to t1 and return the endpoint state.
template <std::size_t N, class Rhs>
State<N> integrate_to(Rhs rhs, double t0, const State<N>& y0, double t1,
                      double rel_tol = 1e-10, double abs_tol = 1e-12) {
    Dopri5<N, Rhs> solver(rhs, rel_tol, abs_tol);
    solver.init(t0, y0);
    if (t1 == t0) return y0;
    const double dir = (t1 > t0) ? 1.0 : -1.0;
    while (dir * (t1 - solver.time()) > 0.0) {
        if (solver.step(t1) == t1) break;
    }
    return solver.state();
}

}  // namespace latwalk::detail

#endif
