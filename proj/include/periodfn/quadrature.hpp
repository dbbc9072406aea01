#pragma once

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>
#include <queue>
#include <vector>

#include "periodfn/error.hpp"

namespace periodfn {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
  bool converged = false;
};

struct QuadratureOptions {
  double abs_tol = 1e-10;
  double rel_tol = 0.0;
  int max_panels = 4096;
};

namespace detail {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

// Newton iteration on P_n from the Chebyshev-like initial guesses.
inline GaussRule make_gauss_legendre(int n) {
  GaussRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) <= 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  return r;
}

inline const GaussRule& gauss16() {
  static const GaussRule rule = make_gauss_legendre(16);
  return rule;
}

}  // namespace detail

/// Composite 16-point Gauss-Legendre with greedy bisection of the panel with the
/// largest estimated error. A panel's error is |Q - (Q_left + Q_right)| and the
/// children's sum is taken as its value.
template <class F>
QuadratureResult adaptive_gauss_legendre(F&& f, double a, double b, const QuadratureOptions& opt = {}) {
  const auto& rule = detail::gauss16();
  QuadratureResult res;
  auto gl = [&](double lo, double hi) {
    const double c = 0.5 * (lo + hi);
    const double h = 0.5 * (hi - lo);
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * f(c + h * rule.nodes[i]);
    res.evaluations += static_cast<int>(rule.nodes.size());
    return s * h;
  };
  struct Panel {
    double lo, hi, whole, left, right, err;
    bool operator<(const Panel& o) const { return err < o.err; }
  };
  auto make = [&](double lo, double hi, double whole) {
    const double mid = 0.5 * (lo + hi);
    Panel p{lo, hi, whole, gl(lo, mid), gl(mid, hi), 0.0};
    p.err = std::abs(p.whole - (p.left + p.right));
    return p;
  };

  std::priority_queue<Panel> heap;
  constexpr int kInitial = 8;
  for (int i = 0; i < kInitial; ++i) {
    const double lo = a + (b - a) * i / kInitial;
    const double hi = i + 1 == kInitial ? b : a + (b - a) * (i + 1) / kInitial;
    heap.push(make(lo, hi, gl(lo, hi)));
  }
  constexpr double kFloor = 50.0 * std::numeric_limits<double>::epsilon();
  auto panel_err = [&](const Panel& p) { return std::max(p.err, kFloor * std::abs(p.left + p.right)); };
  double total = 0.0, err = 0.0;
  {
    auto copy = heap;
    for (; !copy.empty(); copy.pop()) {
      total += copy.top().left + copy.top().right;
      err += panel_err(copy.top());
    }
  }
  for (;;) {
    res.value = total;
    res.error = err;
    const double target = std::max(opt.abs_tol, opt.rel_tol * std::abs(total));
    if (err <= std::max(target, kFloor * std::abs(total))) {
      res.converged = true;
      return res;
    }
    if (static_cast<int>(heap.size()) >= opt.max_panels) return res;
    const Panel worst = heap.top();
    if (worst.err <= kFloor * std::abs(worst.left + worst.right)) {
      res.converged = true;
      return res;
    }
    heap.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    const Panel l = make(worst.lo, mid, worst.left);
    const Panel r = make(mid, worst.hi, worst.right);
    total += (l.left + l.right + r.left + r.right) - (worst.left + worst.right);
    err += panel_err(l) + panel_err(r) - panel_err(worst);
    err = std::max(err, 0.0);
    heap.push(l);
    heap.push(r);
  }
}

/// tanh-sinh quadrature on [a, b]. The integrand receives (x, x - a, b - x) with the
/// endpoint distances computed without cancellation, so integrable endpoint
/// singularities can be evaluated in terms of the distance.
template <class F>
QuadratureResult tanh_sinh(F&& f, double a, double b, const QuadratureOptions& opt = {}, int max_level = 10) {
  QuadratureResult res;
  const double hw = 0.5 * (b - a);
  constexpr double kHalfPi = 0.5 * std::numbers::pi;
  constexpr double kTMax = 4.0;

  auto term = [&](double t) -> double {
    const double v = kHalfPi * std::sinh(t);
    const double ch = std::cosh(v);
    const double w = kHalfPi * std::cosh(t) / (ch * ch);
    double da, db;  // hw (1 + tanh v), hw (1 - tanh v)
    if (v >= 0.0) {
      db = hw * 2.0 / (std::exp(2.0 * v) + 1.0);
      da = 2.0 * hw - db;
    } else {
      da = hw * 2.0 / (std::exp(-2.0 * v) + 1.0);
      db = 2.0 * hw - da;
    }
    if (!(da > 0.0) || !(db > 0.0)) return 0.0;
    const double x = v >= 0.0 ? b - db : a + da;
    ++res.evaluations;
    return hw * w * f(x, da, db);
  };

  double h = 0.5;
  double sum = term(0.0);
  for (double t = h; t <= kTMax; t += h) sum += term(t) + term(-t);
  double estimate = h * sum;
  for (int level = 1; level <= max_level; ++level) {
    h *= 0.5;
    double add = 0.0;
    for (double t = h; t <= kTMax; t += 2.0 * h) add += term(t) + term(-t);
    sum += add;
    const double next = h * sum;
    res.error = std::abs(next - estimate);
    res.value = next;
    estimate = next;
    const double target = std::max(opt.abs_tol, opt.rel_tol * std::abs(next));
    if (level >= 3 && res.error <= target) {
      res.converged = true;
      return res;
    }
  }
  return res;
}

}  // namespace periodfn
