#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "periodfn/error.hpp"
#include "periodfn/polynomial.hpp"

namespace periodfn {

struct RootOptions {
  double abs_tol = 0.0;      ///< absolute tolerance on the abscissa
  double rel_tol = 4.0 * std::numeric_limits<double>::epsilon();
  int max_iterations = 200;
};

/// Hybrid Newton/bisection on a bracket [lo, hi] with f(lo) and f(hi) of
/// opposite sign (or one of them zero). `fdf` returns {f(x), f'(x)}. A Newton
/// step that leaves the current bracket or fails to halve it is replaced by a
/// bisection step, so convergence is never slower than bisection.
template <class FDF>
double newton_bisect(FDF&& fdf, double lo, double hi, double guess, const RootOptions& opt = {}) {
  if (lo > hi) std::swap(lo, hi);
  auto [flo, dlo] = fdf(lo);
  if (flo == 0.0) return lo;
  auto [fhi, dhi] = fdf(hi);
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) throw Error(ErrorKind::NoBracket, "newton_bisect: endpoints do not bracket a root");
  const bool rising = fhi > 0.0;

  double x = (guess > lo && guess < hi) ? guess : 0.5 * (lo + hi);
  double dx_old = hi - lo;
  for (int it = 0; it < opt.max_iterations; ++it) {
    auto [f, df] = fdf(x);
    if (f == 0.0) return x;
    if ((f > 0.0) == rising) hi = x; else lo = x;

    double x_new = x - f / df;
    const bool newton_ok = std::isfinite(x_new) && x_new > lo && x_new < hi &&
                           std::abs(x_new - x) < 0.5 * std::abs(dx_old);
    if (!newton_ok) x_new = 0.5 * (lo + hi);
    dx_old = x_new - x;

    const double tol = opt.abs_tol + opt.rel_tol * std::abs(x_new);
    if (std::abs(dx_old) <= tol || hi - lo <= tol) return x_new;
    x = x_new;
  }
  return x;
}

/// Plain bisection for a sign change of f on [lo, hi].
template <class F>
double bisect(F&& f, double lo, double hi, double abs_tol = 0.0, int max_iterations = 400) {
  double flo = f(lo);
  if (flo == 0.0) return lo;
  double fhi = f(hi);
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) throw Error(ErrorKind::NoBracket, "bisect: endpoints do not bracket a root");
  for (int it = 0; it < max_iterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi || hi - lo <= abs_tol) return mid;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) { lo = mid; flo = fm; } else { hi = mid; }
  }
  return 0.5 * (lo + hi);
}

/// Real-root isolation for low-degree polynomials with Sturm sequences.
class SturmSequence {
 public:
  explicit SturmSequence(const Polynomial& p) {
    Polynomial p0 = p.chopped(1e-15);
    chain_.push_back(p0);
    if (p0.degree() == 0) return;
    chain_.push_back(p0.derivative());
    while (chain_.back().degree() > 0) {
      const auto& a = chain_[chain_.size() - 2];
      const auto& b = chain_.back();
      auto rem = divmod(a, b).second;
      // Remainders below the working precision of the dividend are exact zeros.
      double scale = 0.0;
      for (double v : a.coefficients()) scale = std::max(scale, std::abs(v));
      double rmax = 0.0;
      for (double v : rem.coefficients()) rmax = std::max(rmax, std::abs(v));
      if (rem.is_zero() || rmax <= 1e-11 * scale) break;
      chain_.push_back((-1.0) * rem.chopped(1e-13));
    }
  }

  int sign_changes(double x) const {
    int changes = 0;
    int prev = 0;
    for (const auto& q : chain_) {
      const double v = q(x);
      const int s = (v > 0.0) - (v < 0.0);
      if (s == 0) continue;
      if (prev != 0 && s != prev) ++changes;
      prev = s;
    }
    return changes;
  }

  /// Number of distinct real roots in (a, b].
  int count(double a, double b) const { return sign_changes(a) - sign_changes(b); }

  const Polynomial& polynomial() const { return chain_.front(); }

 private:
  std::vector<Polynomial> chain_;
};

namespace detail {

inline double polish_polynomial_root(const Polynomial& p, double lo, double hi) {
  auto fdf = [&](double x) { return p.value_and_slope(x); };
  return newton_bisect(fdf, lo, hi, 0.5 * (lo + hi));
}

inline double cauchy_bound(const Polynomial& p) {
  double m = 0.0;
  const double lead = std::abs(p.leading());
  for (std::size_t i = 0; i < p.degree(); ++i) m = std::max(m, std::abs(p.coefficient(i)) / lead);
  return 1.0 + m;
}

// Root of even multiplicity inside (lo, hi): p does not change sign, p' does.
inline std::optional<double> touching_root(const Polynomial& p, double lo, double hi);

inline void isolate(const Polynomial& p, const SturmSequence& s, double lo, double hi, int n,
                    std::vector<double>& out, int depth) {
  if (n <= 0) return;
  const double width = hi - lo;
  if (n == 1 || depth > 200 || width <= 1e-15 * std::max(1.0, std::abs(lo) + std::abs(hi))) {
    const double plo = p(lo);
    const double phi = p(hi);
    if (phi == 0.0) { out.push_back(hi); return; }
    if ((plo > 0.0) != (phi > 0.0) && plo != 0.0) {
      out.push_back(polish_polynomial_root(p, lo, hi));
      return;
    }
    if (auto r = touching_root(p, lo, hi)) out.push_back(*r);
    return;
  }
  double mid = lo + 0.5 * width;
  if (p(mid) == 0.0) mid = lo + 0.5000000001 * width;
  const int left = s.count(lo, mid);
  isolate(p, s, lo, mid, left, out, depth + 1);
  isolate(p, s, mid, hi, n - left, out, depth + 1);
}

}  // namespace detail

/// Distinct real roots of p in the half-open interval (lo, hi], ascending.
/// Roots of even multiplicity are located through the derivative.
inline std::vector<double> real_roots(const Polynomial& p, double lo, double hi) {
  std::vector<double> out;
  Polynomial q = p.chopped(1e-15);
  if (q.degree() == 0) return out;
  if (q.degree() == 1) {
    const double r = -q.coefficient(0) / q.coefficient(1);
    if (r > lo && r <= hi) out.push_back(r);
    return out;
  }
  SturmSequence s(q);
  const int n = s.count(lo, hi);
  detail::isolate(q, s, lo, hi, n, out, 0);
  std::sort(out.begin(), out.end());
  return out;
}

/// All distinct real roots of p, ascending.
inline std::vector<double> real_roots(const Polynomial& p) {
  Polynomial q = p.chopped(1e-15);
  if (q.degree() == 0) return {};
  const double b = detail::cauchy_bound(q);
  return real_roots(q, -b, b);
}

inline std::optional<double> detail::touching_root(const Polynomial& p, double lo, double hi) {
  const Polynomial dp = p.derivative();
  if (dp.degree() == 0) return std::nullopt;
  std::optional<double> best;
  double best_val = std::numeric_limits<double>::infinity();
  for (double c : real_roots(dp, lo, hi)) {
    const double v = std::abs(p(c));
    if (v < best_val) { best_val = v; best = c; }
  }
  if (best && best_val <= 1e-9 * std::max(1.0, p.magnitude(*best))) return best;
  return std::nullopt;
}

}  // namespace periodfn
