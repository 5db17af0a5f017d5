// masersim: room-temperature pentacene maser simulation toolkit.
// License: MIT.

#ifndef MASERSIM_ODE_HPP
#define MASERSIM_ODE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>

#include "masersim/errors.hpp"

namespace masersim {

struct OdeOptions {
  double rtol = 1e-8;
  double atol = 1e-10;
  double h_init = 0.0;        // <= 0: choose automatically
  double h_min = 1e-9;        // step underflow threshold (problem time units)
  long max_steps = 50'000'000;
};

// Adaptive Dormand-Prince 5(4) with the classic quartic dense-output
// interpolant. `rhs(t, y, dydt)` fills the derivative; `emit(t, y)` is called
// once per requested report time, in order. Report times must be ascending
// and lie in [t0, t1].
template <std::size_t N, typename Rhs, typename Emit>
void integrate_dopri5(Rhs&& rhs, std::array<double, N> y, double t0, double t1,
                      std::span<const double> report_times, const OdeOptions& opt,
                      Emit&& emit) {
  using State = std::array<double, N>;

  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  static constexpr double d1 = -12715105075.0 / 11282082432.0,
                          d3 = 87487479700.0 / 32700410799.0,
                          d4 = -10690763975.0 / 1880347072.0,
                          d5 = 701980252875.0 / 199316789632.0,
                          d6 = -1453857185.0 / 822651844.0,
                          d7 = 69997945.0 / 29380423.0;

  State k1, k2, k3, k4, k5, k6, k7, ytmp, ynew;
  rhs(t0, y, k1);

  double t = t0;
  const double span = t1 - t0;
  double h = opt.h_init > 0 ? opt.h_init : span / 100.0;
  h = std::min(h, span);

  std::size_t iout = 0;
  // Report times at or before t0 get the initial state.
  while (iout < report_times.size() && report_times[iout] <= t0 + 1e-14 * std::abs(span)) {
    emit(report_times[iout], y);
    ++iout;
  }

  long steps = 0;
  while (t < t1) {
    if (++steps > opt.max_steps)
      throw NumericalError("integrate_dopri5: step limit exceeded");
    if (h < opt.h_min)
      throw StepSizeUnderflow("integrate_dopri5: step size underflow at t = " +
                              std::to_string(t));
    if (t + h > t1) h = t1 - t;

    for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
    rhs(t + c2 * h, ytmp, k2);
    for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    rhs(t + c3 * h, ytmp, k3);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs(t + c4 * h, ytmp, k4);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    rhs(t + c5 * h, ytmp, k5);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                            a65 * k5[i]);
    rhs(t + h, ytmp, k6);
    for (std::size_t i = 0; i < N; ++i)
      ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    rhs(t + h, ynew, k7);

    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                             e6 * k6[i] + e7 * k7[i]);
      const double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      err += (ei / sc) * (ei / sc);
    }
    err = std::sqrt(err / static_cast<double>(N));

    if (err <= 1.0) {
      // Dense output over [t, t+h] for every report time inside.
      while (iout < report_times.size() && report_times[iout] <= t + h + 1e-12 * h) {
        const double theta = std::clamp((report_times[iout] - t) / h, 0.0, 1.0);
        State yi;
        for (std::size_t i = 0; i < N; ++i) {
          const double ydiff = ynew[i] - y[i];
          const double bspl = h * k1[i] - ydiff;
          const double r5 = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                                 d6 * k6[i] + d7 * k7[i]);
          const double r4 = ydiff - h * k7[i] - bspl;
          yi[i] = y[i] + theta * (ydiff + (1 - theta) * (bspl + theta * (r4 + (1 - theta) * r5)));
        }
        emit(report_times[iout], yi);
        ++iout;
      }
      t += h;
      y = ynew;
      k1 = k7;  // FSAL
      const double fac = std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0);
      h = std::min(h * fac, span);
    } else {
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
    }
  }

  // Trailing report times within rounding of t1.
  while (iout < report_times.size()) {
    emit(report_times[iout], y);
    ++iout;
  }
}

}  // namespace masersim

#endif
