#pragma once

// Adaptive Dormand-Prince 5(4) integrator over fixed-size real states, with
// cubic Hermite dense output on accepted steps.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

#include "qwire/error.hpp"

namespace qwire::detail {

struct Rk45Options {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double initial_step = 0.0;  // 0: pick from the interval length
  double min_step_fraction = 1e-14;
  long max_steps = 2'000'000;
};

template <std::size_t N>
using State = std::array<double, N>;

/// Integrates y' = f(x, y) from x0 to x1 (x1 > x0).
///
/// `on_step(x_old, y_old, f_old, x_new, y_new, f_new)` is called after every
/// accepted step and may rescale `y_new`/`f_new` in place (overflow guard).
template <std::size_t N, class Rhs, class OnStep>
State<N> integrate_rk45(Rhs&& f, double x0, double x1, State<N> y, const Rk45Options& opt,
                        OnStep&& on_step) {
  // Dormand-Prince tableau.
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                   b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  const double span = x1 - x0;
  double h = opt.initial_step > 0.0 ? opt.initial_step : span * 1e-3;
  const double h_min = opt.min_step_fraction * span;
  double x = x0;
  State<N> k1 = f(x, y), k2, k3, k4, k5, k6, k7, tmp, y_new;
  long steps = 0;

  while (x < x1) {
    if (++steps > opt.max_steps) throw NumericError("ODE integration exceeded the step budget");
    if (x + h > x1) h = x1 - x;
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * a21 * k1[i];
    k2 = f(x + c2 * h, tmp);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    k3 = f(x + c3 * h, tmp);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    k4 = f(x + c4 * h, tmp);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    k5 = f(x + c5 * h, tmp);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    k6 = f(x + h, tmp);
    for (std::size_t i = 0; i < N; ++i)
      y_new[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    const double x_new = (x1 - (x + h) <= 1e-15 * span) ? x1 : x + h;
    k7 = f(x_new, y_new);

    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                            e7 * k7[i]);
      const double scale =
          opt.abs_tol + opt.rel_tol * std::max(std::fabs(y[i]), std::fabs(y_new[i]));
      err = std::max(err, std::fabs(e) / scale);
    }
    if (!std::isfinite(err)) {
      h *= 0.25;
      if (h < h_min) throw NumericError("ODE step size underflow (coefficient blow-up?)");
      continue;
    }
    if (err <= 1.0) {
      on_step(x, y, k1, x_new, y_new, k7);
      x = x_new;
      y = y_new;
      k1 = k7;
      const double grow = err == 0.0 ? 5.0 : std::min(5.0, 0.9 * std::pow(err, -0.2));
      h *= grow;
    } else {
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
      if (h < h_min) throw NumericError("ODE step size underflow (coefficient blow-up?)");
    }
  }
  return y;
}

/// Cubic Hermite interpolation on [x0, x1] from values and slopes.
inline double hermite(double x0, double y0, double f0, double x1, double y1, double f1, double x) {
  const double h = x1 - x0;
  const double s = (x - x0) / h;
  const double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * f0 + (-2 * s3 + 3 * s2) * y1 +
         (s3 - s2) * h * f1;
}

}  // namespace qwire::detail
