#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <utility>
#include <limits>

#include "periodfn/error.hpp"
#include "periodfn/roots.hpp"

namespace periodfn {

template <std::size_t N>
using State = std::array<double, N>;

template <std::size_t N>
struct OdeOptions {
  double rtol = 1e-11;
  State<N> atol{};
  double t_max = 1e6;
  int max_steps = 2'000'000;
  double h0 = 0.0;  ///< initial step; 0 picks one from the local scales
};

template <std::size_t N>
struct EventResult {
  double t = 0.0;
  State<N> y{};
  int steps = 0;
  int rejected = 0;
};

namespace detail {

// Dormand-Prince 5(4) tableau with the 4th-order continuous extension.
struct Dopri5 {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                          a76 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;
  static constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                          d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                          d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
};

template <std::size_t N>
struct DenseStep {
  std::array<State<N>, 5> r;

  State<N> operator()(double theta) const {
    State<N> out;
    const double t1 = 1.0 - theta;
    for (std::size_t i = 0; i < N; ++i)
      out[i] = r[0][i] + theta * (r[1][i] + t1 * (r[2][i] + theta * (r[3][i] + t1 * r[4][i])));
    return out;
  }
};

}  // namespace detail

/// Integrates y' = rhs(y) from y0 until g(y) first crosses from negative to
/// nonnegative; the crossing is located on the dense output. `observe` is
/// called with every accepted step's end state.
template <std::size_t N, class Rhs, class Event, class Observe>
EventResult<N> integrate_to_event(Rhs&& rhs, const State<N>& y0, Event&& g, Observe&& observe,
                                  const OdeOptions<N>& opt) {
  using T = detail::Dopri5;
  auto axpy = [](State<N> y, double h, std::initializer_list<std::pair<double, const State<N>*>> terms) {
    for (const auto& [c, k] : terms)
      if (c != 0.0)
        for (std::size_t i = 0; i < N; ++i) y[i] += h * c * (*k)[i];
    return y;
  };
  auto scaled_norm = [&](const State<N>& v, const State<N>& ya, const State<N>& yb) {
    double s = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sc = opt.atol[i] + opt.rtol * std::max(std::abs(ya[i]), std::abs(yb[i]));
      s += (v[i] / sc) * (v[i] / sc);
    }
    return std::sqrt(s / N);
  };

  State<N> y = y0;
  State<N> k1 = rhs(y);
  double t = 0.0;
  double h = opt.h0;
  if (!(h > 0.0)) {
    const double d0 = scaled_norm(y, y, y);
    const double d1 = scaled_norm(k1, y, y);
    h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h = std::min(h, 1e-2 * opt.t_max);
  }
  double g_prev = g(y);
  EventResult<N> res;

  while (res.steps + res.rejected < opt.max_steps) {
    if (t >= opt.t_max) break;
    const State<N> k2 = rhs(axpy(y, h, {{T::a21, &k1}}));
    const State<N> k3 = rhs(axpy(y, h, {{T::a31, &k1}, {T::a32, &k2}}));
    const State<N> k4 = rhs(axpy(y, h, {{T::a41, &k1}, {T::a42, &k2}, {T::a43, &k3}}));
    const State<N> k5 = rhs(axpy(y, h, {{T::a51, &k1}, {T::a52, &k2}, {T::a53, &k3}, {T::a54, &k4}}));
    const State<N> k6 =
        rhs(axpy(y, h, {{T::a61, &k1}, {T::a62, &k2}, {T::a63, &k3}, {T::a64, &k4}, {T::a65, &k5}}));
    const State<N> y1 =
        axpy(y, h, {{T::a71, &k1}, {T::a73, &k3}, {T::a74, &k4}, {T::a75, &k5}, {T::a76, &k6}});
    const State<N> k7 = rhs(y1);
    State<N> e{};
    for (std::size_t i = 0; i < N; ++i)
      e[i] = h * (T::e1 * k1[i] + T::e3 * k3[i] + T::e4 * k4[i] + T::e5 * k5[i] + T::e6 * k6[i] + T::e7 * k7[i]);
    const double err = scaled_norm(e, y, y1);
    if (!std::isfinite(err) || err > 1.0) {
      ++res.rejected;
      const double fac = std::isfinite(err) ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.2;
      h *= fac;
      if (h < 1e-14 * std::max(1.0, t)) throw Error(ErrorKind::EventNotFound, "step size underflow");
      continue;
    }
    ++res.steps;

    const double g1 = g(y1);
    if (g_prev < 0.0 && g1 >= 0.0) {
      detail::DenseStep<N> dense;
      for (std::size_t i = 0; i < N; ++i) {
        const double ydiff = y1[i] - y[i];
        const double bspl = h * k1[i] - ydiff;
        dense.r[0][i] = y[i];
        dense.r[1][i] = ydiff;
        dense.r[2][i] = bspl;
        dense.r[3][i] = ydiff - h * k7[i] - bspl;
        dense.r[4][i] = h * (T::d1 * k1[i] + T::d3 * k3[i] + T::d4 * k4[i] + T::d5 * k5[i] + T::d6 * k6[i] +
                             T::d7 * k7[i]);
      }
      const double theta = g1 == 0.0 ? 1.0 : bisect([&](double th) { return g(dense(th)); }, 0.0, 1.0, 1e-16);
      res.t = t + theta * h;
      res.y = dense(theta);
      observe(res.y);
      return res;
    }
    observe(y1);
    g_prev = g1;
    t += h;
    y = y1;
    k1 = k7;
    const double fac = err > 0.0 ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0) : 5.0;
    h *= fac;
  }
  throw Error(ErrorKind::EventNotFound, "no event within the time budget");
}

}  // namespace periodfn
