#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "periodfn/criterion.hpp"
#include "periodfn/error.hpp"
#include "periodfn/hamiltonian.hpp"
#include "periodfn/optimize.hpp"
#include "periodfn/polyfamily.hpp"
#include "periodfn/roots.hpp"

namespace periodfn {

/// Parameters of a two-wall potential V(u) = a phi_m(u) + b phi_n(L - gamma - u).
struct OhpParams {
  double a = 1.0, b = 1.0;
  double L = 3.0, gamma = 1.0;
  double m = 1.0, n = 1.0;
  double u0 = 0.0, k = 0.0;  ///< filled in by ohp_build
};

struct ExampleSystem {
  ExampleSystem(std::string n, SeparableHamiltonian h) : name(std::move(n)), H(std::move(h)) {}

  std::string name;
  SeparableHamiltonian H;
  FamilyVerdict expected = FamilyVerdict::OutsideTheorem;
  double e_hi = 0.0;     ///< expected monotone on (0, e_hi); may be +inf
  double check_e = 0.0;  ///< finite energy used for certificates and derivative checks
  std::function<double(double, double)> closed_form_M;
  std::string note;
  std::optional<OhpParams> ohp;
  std::optional<FamilyParams> family;

  /// Certificate sign matching the expected monotonicity.
  Verdict expected_sign() const {
    return expected == FamilyVerdict::Decreasing ? Verdict::NonPositive : Verdict::NonNegative;
  }
};

namespace detail {

inline SmoothFunction half_square() { return SmoothFunction::polynomial({0.0, 0.0, 0.5}); }

inline void require_valid(const ExampleSystem& s) {
  const ValidationReport r = validate_center(s.H);
  if (!r.passed) {
    std::string failed;
    for (const auto& c : r.checks)
      if (!c.passed) failed += (failed.empty() ? "" : ", ") + c.name;
    throw Error(ErrorKind::InvalidGeometry, s.name + " fails the center hypotheses: " + failed);
  }
}

inline double ohp_dV(const OhpParams& p, double u) {
  return -p.a * std::pow(u, -p.m) + p.b * std::pow(p.L - p.gamma - u, -p.n);
}

// M = N(x) y^4 / 2 whenever G = y^2 / 2.
inline std::function<double(double, double)> potential_M(const SmoothFunction& F) {
  return [F](double x, double y) { return chicone_N(F, x) * std::pow(y, 4) / 2.0; };
}

inline ExampleSystem family_example(std::string name, FamilyParams p, std::string note) {
  const FamilyClassification c = classify(p);
  ExampleSystem s{std::move(name), family_hamiltonian(p)};
  s.family = p;
  if (c.monotone()) {
    s.expected = c.verdict;
    s.e_hi = c.e0;
  } else if (c.remark) {
    s.expected = c.remark->verdict;
    s.e_hi = c.remark->e_hi;
  }
  // M vanishes along the sigma root at the remark bound, so the check stays inside it.
  s.check_e = c.monotone() ? s.e_hi : 0.9 * s.e_hi;
  const ABPQ q = abpq(p);
  s.closed_form_M = [q](double x, double y) { return family_M(q, x, y); };
  s.note = std::move(note);
  return s;
}

}  // namespace detail

/// Zeros x_- < 0 < x_+ of N nearest the origin, where N turns positive.
struct OhpZeros {
  double x_minus = 0.0;
  double x_plus = 0.0;
  double x0 = 0.0;  ///< the one of smaller magnitude
};

inline OhpZeros ohp_zeros(const ExampleSystem& sys) {
  if (!sys.ohp) throw Error(ErrorKind::InvalidGeometry, "not a two-wall system");
  const OhpParams& p = *sys.ohp;
  const SmoothFunction& F = sys.H.F();
  const double eps = 1e-9 * std::min(p.u0, p.k);
  auto N = [&](double x) { return chicone_N(F, x); };

  auto find = [&](int side) {
    const double d = (side < 0 ? p.u0 : p.k) - eps;
    std::vector<double> s;
    for (int i = 1; i <= 4000; ++i) s.push_back(i / 4000.0);
    for (int j = 1; j <= 9 * 8; ++j) s.push_back(1.0 - std::pow(10.0, -j / 8.0));
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    double prev = 1e-3 * d;
    if (!(N(side * prev) < 0.0))
      throw Error(ErrorKind::NoSignChange, "N is not negative next to the origin");
    for (double t : s) {
      const double cur = std::min(t * d, d);
      if (cur <= prev) continue;
      if (N(side * cur) > 0.0) return side * bisect([&](double r) { return N(side * r); }, prev, cur, 1e-15 * d);
      prev = cur;
    }
    throw Error(ErrorKind::NoSignChange, std::string("N stays nonpositive up to the ") +
                                             (side < 0 ? "left" : "right") + " wall (checked to within " +
                                             std::to_string(eps) + ")");
  };
  OhpZeros z;
  z.x_minus = find(-1);
  z.x_plus = find(+1);
  z.x0 = std::abs(z.x_minus) < z.x_plus ? z.x_minus : z.x_plus;
  const double r = std::abs(z.x0);
  for (int i = 1; i < 1000; ++i) {
    const double x = -r + 2.0 * r * i / 1000.0;
    if (x == 0.0) continue;
    if (N(x) > 0.0) throw Error(ErrorKind::NoSignChange, "N turns positive inside (-|x0|, |x0|)");
  }
  return z;
}

/// Signed abscissa x0 bounding the certified interval (0, F(x0)).
inline double ohp_x0(const ExampleSystem& sys) { return ohp_zeros(sys).x0; }

inline ExampleSystem ohp_build(double a, double b, double L, double gamma, double m = 1.0, double n = 1.0) {
  if (!(a > 0 && b > 0 && L > 0 && gamma > 0 && m > 0 && n > 0))
    throw Error(ErrorKind::InvalidGeometry, "a, b, L, gamma, m, n must be positive");
  if (!(gamma < L)) throw Error(ErrorKind::InvalidGeometry, "gamma must be smaller than L");
  OhpParams p{a, b, L, gamma, m, n};
  const double span = L - gamma;
  if (m == 1.0 && n == 1.0) {
    p.u0 = a * span / (a + b);
  } else {
    p.u0 = bisect([&](double u) { return detail::ohp_dV(p, u); }, 1e-15 * span, span * (1.0 - 1e-15), 1e-16 * span);
  }
  p.k = span - p.u0;
  const bool log_walls = m == 1.0 && n == 1.0;
  SmoothFunction F = log_walls ? SmoothFunction::log_potential(a, b, p.u0, p.k)
                               : SmoothFunction::power_law(a, m, b, n, p.u0, p.k);
  ExampleSystem s{log_walls ? "ohp" : "ohp-generalized", SeparableHamiltonian(F, detail::half_square())};
  s.ohp = p;
  s.closed_form_M = detail::potential_M(F);
  s.expected = FamilyVerdict::Decreasing;
  const double x0 = ohp_x0(s);
  s.e_hi = F(x0);
  s.check_e = s.e_hi;
  s.note = "two-wall slug potential; decreasing on (0, F(x0))";
  detail::require_valid(s);
  return s;
}

struct SinhBound {
  double argmin = 0.0;
  double bound = 0.0;
};

/// S(a) = a + (a^2 + 2)/(a - 2) on a > 2; the bound is min S - 2.
inline SinhBound sinh_certified_bound_detail() {
  auto S = [](double a) { return a + (a * a + 2.0) / (a - 2.0); };
  const MinimizeResult g = golden_section_minimize(S, 2.0 + 1e-6, 20.0, 1e-10);
  // Function values only pin the argmin to ~sqrt(eps); finish on S'(a) = 2 - 6/(a-2)^2.
  auto dS = [](double a) { return 2.0 - 6.0 / ((a - 2.0) * (a - 2.0)); };
  const double w = 1e-4 * g.x;
  const double x = bisect(dS, g.x - w, g.x + w, 1e-15);
  return {x, S(x) - 2.0};
}

inline double sinh_certified_bound() { return sinh_certified_bound_detail().bound; }

/// Registered example names, in listing order.
inline std::vector<std::string> example_names() {
  return {"linear",   "relativistic", "pendulum",   "pendulum-pair", "sinh",
          "ohp",      "ohp-asymmetric", "ohp-generalized", "cubic-quartic-k2", "case-g-ab2"};
}

inline ExampleSystem builtin(std::string_view name) {
  ExampleSystem s{std::string(name), SeparableHamiltonian(detail::half_square(), detail::half_square())};
  if (name == "linear") {
    s.expected = FamilyVerdict::Constant;
    s.e_hi = kInf;
    s.check_e = 10.0;
    s.closed_form_M = [](double, double) { return 0.0; };
    s.note = "harmonic oscillator; isochronous";
  } else if (name == "relativistic") {
    s.H = SeparableHamiltonian(detail::half_square(), SmoothFunction::sqrt_relativistic());
    s.expected = FamilyVerdict::Increasing;
    s.e_hi = kInf;
    s.check_e = 50.0;
    s.closed_form_M = [](double x, double y) { return std::pow(x, 4) / 2.0 * relativistic_margin(y).closed; };
    s.note = "relativistic oscillator; increasing on the whole annulus";
  } else if (name == "pendulum") {
    s.H = SeparableHamiltonian(SmoothFunction::trig_cos(), detail::half_square());
    s.expected = FamilyVerdict::Increasing;
    s.e_hi = 2.0;
    s.check_e = 2.0;
    s.closed_form_M = [](double x, double y) {
      const double c = std::cos(x);
      return (1.0 - c) * (1.0 - c) * (2.0 - c) * std::pow(y, 4) / 2.0;
    };
    s.note = "mathematical pendulum; increasing up to the separatrix";
  } else if (name == "pendulum-pair") {
    s.H = SeparableHamiltonian(SmoothFunction::trig_cos(), SmoothFunction::trig_cos());
    s.expected = FamilyVerdict::Increasing;
    s.e_hi = 2.0;
    s.check_e = 2.0;
    s.closed_form_M = [](double x, double y) {
      const double sx = std::sin(0.5 * x), sy = std::sin(0.5 * y);
      return 4.0 * (1.0 - std::cos(y)) * std::pow(sx, 4) * sy * sy *
             (5.0 + std::cos(2.0 * x) - 2.0 * (std::cos(x) - 2.0) * std::cos(y));
    };
    s.note = "coupled pendulum potentials; increasing on (0, 2)";
  } else if (name == "sinh") {
    s.H = SeparableHamiltonian(SmoothFunction::cosh(), SmoothFunction::cosh());
    s.expected = FamilyVerdict::Decreasing;
    s.e_hi = 4.0 + 4.0 * std::sqrt(3.0);
    s.check_e = s.e_hi;
    s.closed_form_M = [](double x, double y) {
      const double a = std::cosh(x), b = std::cosh(y);
      const double am = 2.0 * std::pow(std::sinh(0.5 * x), 2), bm = 2.0 * std::pow(std::sinh(0.5 * y), 2);
      return -am * am * bm * bm * (a * a - a * b + 2.0 * b + 2.0);
    };
    s.note = "hyperbolic potentials; decreasing on (0, 4 + 4 sqrt 3)";
  } else if (name == "ohp") {
    s = ohp_build(1.0, 1.0, 3.0, 1.0);
  } else if (name == "ohp-asymmetric") {
    s = ohp_build(1.0, 2.0, 4.0, 1.0);
    s.name = "ohp-asymmetric";
  } else if (name == "ohp-generalized") {
    s = ohp_build(1.0, 1.0, 3.0, 1.0, 3.0, 2.0);
  } else if (name == "cubic-quartic-k2") {
    s = detail::family_example("cubic-quartic-k2", {1.0, 0.0, 2.0},
                               "cubic potential with quartic kinetic term; decreasing near the center, "
                               "period minimum near E = 0.0427");
  } else if (name == "case-g-ab2") {
    s = detail::family_example("case-g-ab2", {2.0, 2.0, 3.0}, "quartic family above the tangency threshold");
  } else {
    throw Error(ErrorKind::UnknownExample, "unknown example: " + std::string(name));
  }
  detail::require_valid(s);
  return s;
}

inline std::vector<ExampleSystem> list_examples() {
  std::vector<ExampleSystem> out;
  for (const auto& n : example_names()) out.push_back(builtin(n));
  return out;
}

}  // namespace periodfn
