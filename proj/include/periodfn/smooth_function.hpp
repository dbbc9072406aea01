#pragma once

#include <array>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "periodfn/error.hpp"
#include "periodfn/polynomial.hpp"

namespace periodfn {

/// Value and derivatives of orders 1..3 at one point.
struct Jet {
  double v = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;

  double operator[](int order) const {
    switch (order) {
      case 0: return v;
      case 1: return d1;
      case 2: return d2;
      default: return d3;
    }
  }
};

enum class Family {
  Polynomial,
  TrigCos,
  Cosh,
  SqrtRelativistic,
  LogPotential,
  PowerLaw,
  TranslatedSum,
};

inline std::string_view to_string(Family f) {
  switch (f) {
    case Family::Polynomial: return "polynomial";
    case Family::TrigCos: return "trig-cos";
    case Family::Cosh: return "cosh";
    case Family::SqrtRelativistic: return "sqrt-relativistic";
    case Family::LogPotential: return "log-potential";
    case Family::PowerLaw: return "power-law";
    case Family::TranslatedSum: return "translated-sum";
  }
  return "unknown";
}

/// Open interval (lo, hi); infinite ends allowed.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double x) const { return x > lo && x < hi; }
  bool bounded_below() const { return std::isfinite(lo); }
  bool bounded_above() const { return std::isfinite(hi); }
};

namespace detail {

// R_m(t) = phi_m(1+t) - phi_m(1) - phi_m'(1) t for the wall potential
// phi_m(s) = -s^(1-m)/(1-m) (m != 1), phi_1(s) = -ln s. Nonnegative and
// O(t^2); the series branch keeps full relative accuracy near t = 0.
inline double wall_remainder(double m, double t) {
  const double p = 1.0 - m;
  if (std::abs(t) < 0.25) {
    // -sum_{j>=2} binom(p, j)/p t^j, with binom(p, j)/p = prod_{i=1}^{j-1}(p - i) / j!
    double d = (p - 1.0) / 2.0;
    double tj = t * t;
    double sum = 0.0;
    for (int j = 2; j < 60; ++j) {
      const double term = d * tj;
      sum += term;
      if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
      d *= (p - j) / (j + 1.0);
      tj *= t;
    }
    return -sum;
  }
  if (p == 0.0) return t - std::log1p(t);
  return -(std::expm1(p * std::log1p(t)) - p * t) / p;
}

// Jet of s^(1-m) R_m(x/s) in x: the wall term anchored at distance s from the wall.
inline Jet wall_term(double m, double s, double x) {
  const double t = x / s;
  const double u = 1.0 + t;  // (s + x)/s
  Jet j;
  j.v = std::pow(s, 1.0 - m) * wall_remainder(m, t);
  j.d1 = -std::pow(s, -m) * std::expm1(-m * std::log1p(t));
  j.d2 = m * std::pow(s, -m - 1.0) * std::pow(u, -m - 1.0);
  j.d3 = -m * (m + 1.0) * std::pow(s, -m - 2.0) * std::pow(u, -m - 2.0);
  return j;
}

inline double wall_edge_limit(double m, double s) {
  // t -> -1: finite only for m < 1.
  if (m < 1.0) return std::pow(s, 1.0 - m) * m / (1.0 - m);
  return std::numeric_limits<double>::infinity();
}

}  // namespace detail

/// A one-variable function from a closed family, with analytic derivatives of
/// orders 0..3. Immutable; cheap to copy.
class SmoothFunction {
 public:
  struct PolynomialParams {
    Polynomial p;
    Polynomial d1, d2, d3;
  };
  struct ScaledParams {  // amplitude * shape(frequency * x)
    double amplitude = 1.0;
    double frequency = 1.0;
  };
  /// F(x) = a [phi_m(u0+x) - phi_m(u0) - phi_m'(u0) x] + b [phi_n(k-x) - phi_n(k) + phi_n'(k) x]
  /// on (-u0, k): the translated two-wall potential V(u0+x) - V(u0) with V'(u0) = 0.
  struct WallParams {
    double a = 1.0, m = 1.0;
    double b = 1.0, n = 1.0;
    double u0 = 1.0, k = 1.0;
  };
  struct Component {
    double weight = 1.0;
    double shift = 0.0;
    std::shared_ptr<const SmoothFunction> f;
  };
  /// sum_i w_i [f_i(x + s_i) - f_i(s_i)]
  struct SumParams {
    std::vector<Component> parts;
  };

  static SmoothFunction polynomial(const Polynomial& p) {
    PolynomialParams pp{p, p.derivative(), p.derivative().derivative(), p.derivative().derivative().derivative()};
    bool even = true;
    for (std::size_t i = 1; i <= p.degree(); i += 2) even = even && p.coefficient(i) == 0.0;
    return SmoothFunction(Family::Polynomial, std::move(pp), even, Interval{});
  }
  static SmoothFunction polynomial(std::vector<double> coeffs) { return polynomial(Polynomial(std::move(coeffs))); }
  static SmoothFunction polynomial(std::initializer_list<double> coeffs) { return polynomial(Polynomial(coeffs)); }

  /// amplitude * (1 - cos(frequency x))
  static SmoothFunction trig_cos(double amplitude = 1.0, double frequency = 1.0) {
    return SmoothFunction(Family::TrigCos, ScaledParams{amplitude, frequency}, true, Interval{});
  }
  /// amplitude * (cosh(frequency x) - 1)
  static SmoothFunction cosh(double amplitude = 1.0, double frequency = 1.0) {
    return SmoothFunction(Family::Cosh, ScaledParams{amplitude, frequency}, true, Interval{});
  }
  /// amplitude * (sqrt(1 + (frequency x)^2) - 1)
  static SmoothFunction sqrt_relativistic(double amplitude = 1.0, double frequency = 1.0) {
    return SmoothFunction(Family::SqrtRelativistic, ScaledParams{amplitude, frequency}, true, Interval{});
  }
  /// Logarithmic walls (exponents m = n = 1).
  static SmoothFunction log_potential(double a, double b, double u0, double k) {
    return wall(Family::LogPotential, WallParams{a, 1.0, b, 1.0, u0, k});
  }
  static SmoothFunction power_law(double a, double m, double b, double n, double u0, double k) {
    return wall(Family::PowerLaw, WallParams{a, m, b, n, u0, k});
  }
  static SmoothFunction translated_sum(std::vector<Component> parts) {
    Interval dom;
    for (const auto& c : parts) {
      const Interval d = c.f->domain();
      dom.lo = std::max(dom.lo, d.lo - c.shift);
      dom.hi = std::min(dom.hi, d.hi - c.shift);
    }
    return SmoothFunction(Family::TranslatedSum, SumParams{std::move(parts)}, false, dom);
  }

  /// Same function with an overridden evenness declaration.
  SmoothFunction declared(bool even) const {
    SmoothFunction copy(*this);
    copy.even_ = even;
    return copy;
  }

  Family family() const { return family_; }
  bool declared_even() const { return even_; }
  const Interval& domain() const { return domain_; }
  const auto& params() const { return params_; }

  bool admissible(double x) const { return domain_.contains(x); }

  Jet jet(double x) const {
    if (!admissible(x)) throw Error(ErrorKind::DomainViolation, "evaluation outside the admissible interval");
    return std::visit([&](const auto& p) { return eval(p, x); }, params_);
  }

  double operator()(double x) const { return jet(x).v; }
  double derivative(double x, int order) const { return jet(x)[order]; }

  /// Limit of the value at the domain end on the given side (sign of `side`):
  /// +inf when the function diverges or the domain is unbounded there.
  double edge_limit(int side) const {
    if (const auto* w = std::get_if<WallParams>(&params_)) {
      if (side < 0) {
        const double left = w->a * detail::wall_edge_limit(w->m, w->u0);
        return left + w->b * detail::wall_term(w->n, w->k, w->u0).v;
      }
      const double right = w->b * detail::wall_edge_limit(w->n, w->k);
      return right + w->a * detail::wall_term(w->m, w->u0, w->k).v;
    }
    return std::numeric_limits<double>::infinity();
  }

  const Polynomial* as_polynomial() const {
    if (const auto* p = std::get_if<PolynomialParams>(&params_)) return &p->p;
    return nullptr;
  }

 private:
  using Params = std::variant<PolynomialParams, ScaledParams, WallParams, SumParams>;

  SmoothFunction(Family fam, Params params, bool even, Interval dom)
      : family_(fam), params_(std::move(params)), even_(even), domain_(dom) {}

  static SmoothFunction wall(Family fam, WallParams w) {
    if (!(w.a > 0 && w.b > 0 && w.m > 0 && w.n > 0 && w.u0 > 0 && w.k > 0))
      throw Error(ErrorKind::InvalidGeometry, "wall potential needs positive a, b, m, n, u0, k");
    const bool even = w.a == w.b && w.m == w.n && w.u0 == w.k;
    return SmoothFunction(fam, w, even, Interval{-w.u0, w.k});
  }

  static Jet eval(const PolynomialParams& p, double x) {
    return {p.p(x), p.d1(x), p.d2(x), p.d3(x)};
  }

  Jet eval(const ScaledParams& s, double x) const {
    const double A = s.amplitude;
    const double k = s.frequency;
    const double kx = k * x;
    switch (family_) {
      case Family::TrigCos: {
        const double sh = std::sin(0.5 * kx);
        const double sn = std::sin(kx);
        const double cs = std::cos(kx);
        return {2.0 * A * sh * sh, A * k * sn, A * k * k * cs, -A * k * k * k * sn};
      }
      case Family::Cosh: {
        const double sh = std::sinh(0.5 * kx);
        const double sn = std::sinh(kx);
        const double cs = std::cosh(kx);
        return {2.0 * A * sh * sh, A * k * sn, A * k * k * cs, A * k * k * k * sn};
      }
      default: {  // SqrtRelativistic
        const double s2 = 1.0 + kx * kx;
        const double sq = std::sqrt(s2);
        return {A * kx * kx / (sq + 1.0), A * k * kx / sq, A * k * k / (s2 * sq),
                -3.0 * A * k * k * k * kx / (s2 * s2 * sq)};
      }
    }
  }

  static Jet eval(const WallParams& w, double x) {
    const Jet left = detail::wall_term(w.m, w.u0, x);
    const Jet right = detail::wall_term(w.n, w.k, -x);
    return {w.a * left.v + w.b * right.v, w.a * left.d1 - w.b * right.d1, w.a * left.d2 + w.b * right.d2,
            w.a * left.d3 - w.b * right.d3};
  }

  static Jet eval(const SumParams& s, double x) {
    Jet acc;
    for (const auto& c : s.parts) {
      const Jet j = c.f->jet(x + c.shift);
      const double base = (*c.f)(c.shift);
      acc.v += c.weight * (j.v - base);
      acc.d1 += c.weight * j.d1;
      acc.d2 += c.weight * j.d2;
      acc.d3 += c.weight * j.d3;
    }
    return acc;
  }

  Family family_;
  Params params_;
  bool even_;
  Interval domain_;
};

}  // namespace periodfn
