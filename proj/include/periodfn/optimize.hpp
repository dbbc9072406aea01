#pragma once

#include <cmath>
#include <limits>

namespace periodfn {

struct MinimizeResult {
  double x = 0.0;
  double fx = 0.0;
  int evaluations = 0;
};

/// Brent's minimizer on [a, b]: golden-section steps with parabolic
/// interpolation when it is safe. Converges to |x - x*| <~ 2 (rel |x| + abs_tol).
template <class F>
MinimizeResult brent_minimize(F&& f, double a, double b, double abs_tol = 1e-12, int max_iterations = 500) {
  constexpr double kGolden = 0.3819660112501051;
  const double rel = std::sqrt(std::numeric_limits<double>::epsilon());
  MinimizeResult res;
  double x = a + kGolden * (b - a);
  double w = x, v = x;
  double fx = f(x);
  ++res.evaluations;
  double fw = fx, fv = fx;
  double d = 0.0, e = 0.0;
  for (int it = 0; it < max_iterations; ++it) {
    const double m = 0.5 * (a + b);
    const double tol = rel * std::abs(x) + abs_tol;
    const double t2 = 2.0 * tol;
    if (std::abs(x - m) <= t2 - 0.5 * (b - a)) break;
    double p = 0.0, q = 0.0, r = 0.0;
    if (std::abs(e) > tol) {
      r = (x - w) * (fx - fv);
      q = (x - v) * (fx - fw);
      p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p; else q = -q;
      r = e;
      e = d;
    }
    if (std::abs(p) < std::abs(0.5 * q * r) && p > q * (a - x) && p < q * (b - x)) {
      d = p / q;
      const double u = x + d;
      if (u - a < t2 || b - u < t2) d = x < m ? tol : -tol;
    } else {
      e = (x < m ? b : a) - x;
      d = kGolden * e;
    }
    const double u = x + (std::abs(d) >= tol ? d : (d > 0.0 ? tol : -tol));
    const double fu = f(u);
    ++res.evaluations;
    if (fu <= fx) {
      if (u < x) b = x; else a = x;
      v = w; fv = fw;
      w = x; fw = fx;
      x = u; fx = fu;
    } else {
      if (u < x) a = u; else b = u;
      if (fu <= fw || w == x) {
        v = w; fv = fw;
        w = u; fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u; fv = fu;
      }
    }
  }
  res.x = x;
  res.fx = fx;
  return res;
}

/// Plain golden-section search for a minimum on [a, b].
template <class F>
MinimizeResult golden_section_minimize(F&& f, double a, double b, double abs_tol = 1e-12, int max_iterations = 300) {
  constexpr double kInvPhi = 0.6180339887498949;
  MinimizeResult res;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  res.evaluations = 2;
  for (int it = 0; it < max_iterations && b - a > abs_tol; ++it) {
    if (fc <= fd) {
      b = d; d = c; fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
    ++res.evaluations;
  }
  if (fc <= fd) { res.x = c; res.fx = fc; } else { res.x = d; res.fx = fd; }
  return res;
}

}  // namespace periodfn
