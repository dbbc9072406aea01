#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "periodfn/error.hpp"
#include "periodfn/hamiltonian.hpp"
#include "periodfn/optimize.hpp"
#include "periodfn/polynomial.hpp"
#include "periodfn/roots.hpp"

namespace periodfn {

/// H = x^2/2 + a x^3/3 + b x^4/4 + y^2/2 + c y^4/4.
struct FamilyParams {
  double a = 0.0, b = 0.0, c = 0.0;
};

/// Raw system x1' = x2 (b1 + b2 x2^2), x2' = -x1 (a1 + a2 x1 + a3 x1^2).
struct NormalizationInput {
  double a1 = 1.0, a2 = 0.0, a3 = 0.0, b1 = 1.0, b2 = 0.0;
};

inline FamilyParams normalize(const NormalizationInput& n) {
  if (!(n.a1 > 0.0) || !(n.b1 > 0.0)) throw Error(ErrorKind::NonPositiveLinearPart, "a1 and b1 must be positive");
  return {n.a2 / n.a1, n.a3 / n.a1, n.a1 * n.b2 / (n.b1 * n.b1)};
}

inline SmoothFunction family_F(const FamilyParams& p) {
  return SmoothFunction::polynomial({0.0, 0.0, 0.5, p.a / 3.0, p.b / 4.0});
}
inline SmoothFunction family_G(const FamilyParams& p) {
  return SmoothFunction::polynomial({0.0, 0.0, 0.5, 0.0, p.c / 4.0});
}
inline SeparableHamiltonian family_hamiltonian(const FamilyParams& p) {
  return SeparableHamiltonian(family_F(p), family_G(p));
}

/// The raw Hamiltonian a1 x^2/2 + a2 x^3/3 + a3 x^4/4 + b1 y^2/2 + b2 y^4/4. Its
/// energy E corresponds to E / a1 in the normalized system, and its periods are
/// the normalized ones divided by sqrt(a1 b1).
inline SeparableHamiltonian raw_hamiltonian(const NormalizationInput& n) {
  return SeparableHamiltonian(SmoothFunction::polynomial({0.0, 0.0, 0.5 * n.a1, n.a2 / 3.0, n.a3 / 4.0}),
                              SmoothFunction::polynomial({0.0, 0.0, 0.5 * n.b1, 0.0, n.b2 / 4.0}));
}

struct ABPQ {
  Polynomial A;
  Polynomial B;
  Polynomial B1, B2, B3;  ///< B = B1 * B2^2 * B3
  Polynomial P;
  Polynomial Q;
};

inline ABPQ abpq(const FamilyParams& p) {
  const double a = p.a, b = p.b, c = p.c;
  ABPQ r;
  r.A = Polynomial({10 * a * a - 9 * b, a * (30 * b + 4 * a * a), b * (36 * b + 16 * a * a), 24 * a * b * b,
                    9 * b * b * b});
  r.B1 = Polynomial({6.0, 4 * a, 3 * b});
  r.B2 = Polynomial({1.0, a, b});
  r.B3 = Polynomial({1.0, 2 * a, 3 * b});
  r.B = r.B1 * r.B2 * r.B2 * r.B3;
  const Polynomial u({1.0, 0.0, c});
  r.P = u * u * Polynomial({2.0, 0.0, c});
  r.Q = c * Polynomial({3.0, 0.0, c});
  return r;
}

/// (x^4 y^4 / 24) (A(x) P(y) - B(x) Q(y)).
inline double family_M(const ABPQ& q, double x, double y) {
  const double x2 = x * x, y2 = y * y;
  return x2 * x2 * y2 * y2 / 24.0 * (q.A(x) * q.P(y) - q.B(x) * q.Q(y));
}

struct FamilyGeometry {
  double delta = 0.0;
  std::vector<double> p_roots;  ///< real roots of 1 + a x + b x^2, ascending
  std::optional<double> x0;     ///< root of p bounding the annulus
  std::optional<double> r0;     ///< F(r0) = F(x0) on the other side of 0
  double e0 = kInf;             ///< F(x0), or +inf for a global center
  double lo = -kInf, hi = kInf;  ///< annulus interval on the x axis
};

inline FamilyGeometry geometry(const FamilyParams& p) {
  FamilyGeometry g;
  g.delta = p.a * p.a - 4.0 * p.b;
  if (p.b == 0.0) {
    if (p.a != 0.0) g.p_roots = {-1.0 / p.a};
  } else if (g.delta >= 0.0) {
    const double sq = std::sqrt(g.delta);
    // Cancellation-free pair of roots.
    const double q = -0.5 * (p.a + std::copysign(sq, p.a == 0.0 ? 1.0 : p.a));
    double r1 = q / p.b, r2 = 1.0 / q;
    if (r1 > r2) std::swap(r1, r2);
    g.p_roots = {r1, r2};
    if (g.delta == 0.0) g.p_roots = {-p.a / (2.0 * p.b)};
  }
  const SmoothFunction F = family_F(p);
  std::optional<double> left, right;
  for (double r : g.p_roots) {
    if (r < 0.0 && (!left || r > *left)) left = r;
    if (r > 0.0 && (!right || r < *right)) right = r;
  }
  if (left && right) {
    const double fl = F(*left), fr = F(*right);
    g.x0 = fr < fl ? right : left;
  } else if (left) {
    g.x0 = left;
  } else if (right) {
    g.x0 = right;
  }
  if (g.x0) {
    g.e0 = F(*g.x0);
    g.r0 = conjugate_point(F, *g.x0);
    g.lo = std::min(*g.x0, *g.r0);
    g.hi = std::max(*g.x0, *g.r0);
  }
  return g;
}

/// f(x) = A(x) / B(x).
inline double family_f(const ABPQ& q, double x) { return q.A(x) / q.B(x); }

struct Extremum {
  double x = 0.0;
  double value = 0.0;
  bool at_boundary = false;
};

enum class ExtremumKind { Min, Max };

/// Extremum of A/B over [lo, hi] restricted to B > 0, by a dense scan and a
/// Brent polish. Infinite ends are handled through a rational change of variable.
inline Extremum f_extremum(const FamilyParams& p, double lo, double hi, ExtremumKind kind, int scan = 10000) {
  const ABPQ q = abpq(p);
  const double sgn = kind == ExtremumKind::Min ? 1.0 : -1.0;
  const double s = 1.0 / std::sqrt(std::max({std::abs(p.b), p.a * p.a, 1e-300, 1.0}));
  // x(t) for t in [0, 1].
  auto map = [&](double t) {
    if (std::isfinite(lo) && std::isfinite(hi)) return t >= 1.0 ? hi : lo + (hi - lo) * t;
    if (std::isfinite(lo)) return t >= 1.0 ? kInf : lo + s * t / (1.0 - t);
    if (std::isfinite(hi)) return t <= 0.0 ? -kInf : hi - s * (1.0 - t) / t;
    const double u = 2.0 * t - 1.0;
    return std::abs(u) >= 1.0 ? std::copysign(kInf, u) : s * u / (1.0 - u * u);
  };
  auto obj = [&](double x) {
    if (!std::isfinite(x)) return kInf;
    const double bx = q.B(x);
    if (!(bx > 0.0)) return kInf;
    return sgn * q.A(x) / bx;
  };
  int best = -1;
  double best_v = kInf;
  for (int i = 0; i <= scan; ++i) {
    const double v = obj(map(static_cast<double>(i) / scan));
    if (v < best_v) {
      best_v = v;
      best = i;
    }
  }
  if (best < 0) throw Error(ErrorKind::ExtremumAtBoundary, "A/B has no admissible sample on the interval");
  const double t0 = static_cast<double>(std::max(best - 1, 0)) / scan;
  const double t1 = static_cast<double>(std::min(best + 1, scan)) / scan;
  double a = map(t0), b = map(t1);
  if (!std::isfinite(a)) a = map(t0 + 0.5 / scan);
  if (!std::isfinite(b)) b = map(t1 - 0.5 / scan);
  const auto r = brent_minimize(obj, a, b, 1e-13);
  Extremum e;
  e.x = r.fx <= best_v ? r.x : map(static_cast<double>(best) / scan);
  e.value = sgn * std::min(r.fx, best_v);
  const double width = std::isfinite(hi - lo) ? hi - lo : 1.0;
  e.at_boundary = (std::isfinite(lo) && std::abs(e.x - lo) <= 1e-9 * width) ||
                  (std::isfinite(hi) && std::abs(e.x - hi) <= 1e-9 * width);
  return e;
}

enum class Regime { A, B, C, D, E, F, G };

inline Regime base_regime(const FamilyParams& p) {
  if (p.a == 0.0 && p.b == 0.0) return p.c == 0.0 ? Regime::A : Regime::B;
  if (p.b == 0.0) return Regime::C;
  if (p.a * p.a - 4.0 * p.b >= 0.0) return Regime::D;
  if (p.a == 0.0) return Regime::E;
  return p.c == 0.0 ? Regime::F : Regime::G;
}

namespace detail {

inline bool near(double u, double v, double rel = 1e-12) {
  return std::abs(u - v) <= rel * std::max({std::abs(u), std::abs(v), 1e-300});
}

// Real roots of A nearest 0 on each side.
inline std::pair<std::optional<double>, std::optional<double>> nearest_roots(const Polynomial& poly) {
  std::optional<double> left, right;
  for (double r : real_roots(poly)) {
    if (r < 0.0 && (!left || r > *left)) left = r;
    if (r > 0.0 && (!right || r < *right)) right = r;
  }
  return {left, right};
}

}  // namespace detail

struct Thresholds {
  std::optional<double> c0;
  std::optional<double> c1;
  std::optional<double> r;       ///< point where c0 is evaluated
  bool r_at_boundary = false;
  bool sign_condition_ok = true;  ///< A >= 0 where B <= 0 (C, D) or B(x0) > 0 (G.i)
};

/// c0 and c1 = 2 A(0) / (3 B(0)) for the cases that define them (C, D, G.i).
inline Thresholds thresholds(const FamilyParams& p, const FamilyGeometry& g) {
  const ABPQ q = abpq(p);
  Thresholds t;
  t.c1 = 2.0 * q.A(0.0) / (3.0 * q.B(0.0));
  const Regime reg = base_regime(p);
  if (reg == Regime::C) {
    if (!g.r0) throw Error(ErrorKind::CaseMismatch, "case C needs a bounded annulus");
    t.r = *g.r0;
    t.r_at_boundary = true;
    t.c0 = 2.0 * q.A(*t.r) / (3.0 * q.B(*t.r));
  } else if (reg == Regime::D) {
    if (!g.x0) throw Error(ErrorKind::CaseMismatch, "case D needs a bounded annulus");
    const Extremum m = f_extremum(p, g.lo, g.hi, ExtremumKind::Min);
    t.r = m.x;
    t.r_at_boundary = m.at_boundary;
    t.c0 = 2.0 * m.value / 3.0;
  } else if (reg == Regime::G && p.b <= p.a * p.a / 3.0 * (1.0 + 1e-12)) {
    const auto [l, r] = detail::nearest_roots(q.A);
    const std::optional<double> x1 = p.a > 0.0 ? l : r;
    if (!x1) throw Error(ErrorKind::CaseMismatch, "A has no real root on the expected side");
    const double x0 = conjugate_point(family_F(p), *x1);
    t.r = x0;
    t.c0 = 2.0 * q.A(x0) / (3.0 * q.B(x0));
    t.sign_condition_ok = q.B(x0) > 0.0;
  } else {
    throw Error(ErrorKind::CaseMismatch, "thresholds are defined for cases C, D and G.i only");
  }
  if (reg == Regime::C || reg == Regime::D) {
    // Where B <= 0 the proof needs A >= 0 instead of the c0 bound.
    constexpr int kScan = 4000;
    for (int i = 0; i <= kScan; ++i) {
      const double x = g.lo + (g.hi - g.lo) * i / kScan;
      if (q.B(x) <= 0.0 && q.A(x) < -1e-12 * q.A.magnitude(x)) t.sign_condition_ok = false;
    }
  }
  return t;
}

struct SigmaRoot {
  double x_c = 0.0;
  double energy = 0.0;  ///< F(x_c)
};

/// Root of sigma = 2A - 3cB nearest 0 inside [lo, hi] (ends included),
/// choosing between the two sides the one with the smaller F.
inline SigmaRoot sigma_root(const FamilyParams& p, double lo, double hi) {
  const ABPQ q = abpq(p);
  const Polynomial sigma = 2.0 * q.A - (3.0 * p.c) * q.B;
  const SmoothFunction F = family_F(p);
  const double pad = 1e-9 * std::max(1.0, hi - lo);
  std::optional<double> left, right;
  auto consider = [&](double r) {
    if (r < lo - pad || r > hi + pad) return;
    r = std::clamp(r, lo, hi);
    if (r < 0.0 && (!left || r > *left)) left = r;
    if (r > 0.0 && (!right || r < *right)) right = r;
  };
  if (!sigma.is_zero()) {
    for (double r : real_roots(sigma, lo - pad, hi + pad)) consider(r);
    // Roots sitting exactly at an end are not bracketed by Sturm counts on (lo, hi].
    for (double end : {lo, hi})
      if (std::abs(sigma(end)) <= 1e-12 * sigma.magnitude(end)) consider(end);
  }
  if (!left && !right) throw Error(ErrorKind::NoRootInAnnulus, "sigma has no root in the annulus");
  double x;
  if (left && right) x = F(*right) < F(*left) ? *right : *left;
  else x = left ? *left : *right;
  return {x, F(x)};
}

struct Tangency {
  double c0 = 0.0;
  double x_m = 0.0;
  double f_max = 0.0;
  double e0 = 0.0;  ///< F(x_m)
  double y_m = 0.0;  ///< at c0
};

namespace detail {

// y^2 at G(y) = E for G = y^2/2 + c y^4/4.
inline double y_squared_at(double c, double E) { return 4.0 * E / (1.0 + std::sqrt(1.0 + 4.0 * c * E)); }

inline double q_over_p(double c, double w) {
  const double u = 1.0 + c * w;
  return c * (3.0 + c * w) / (u * u * (2.0 + c * w));
}

}  // namespace detail

/// c0 solving A(x_m)/B(x_m) = Q(y_m)/P(y_m) with G(y_m) = F(x_m), for the
/// tangency cases (a = 0 with b > 0, or b > a^2/3). `a`, `b` are taken from p.
inline Tangency tangency_c0(const FamilyParams& p) {
  const ABPQ q = abpq(p);
  Extremum m;
  if (p.a == 0.0) {
    const auto [l, r] = detail::nearest_roots(q.A);
    if (!r) throw Error(ErrorKind::NoBracket, "A has no positive root");
    m = f_extremum(p, *r, kInf, ExtremumKind::Max);
  } else {
    m = f_extremum(p, -kInf, kInf, ExtremumKind::Max);
  }
  Tangency t;
  t.x_m = m.x;
  t.f_max = m.value;
  t.e0 = family_F(p)(m.x);
  if (!(t.f_max > 0.0)) throw Error(ErrorKind::NoBracket, "max of A/B is not positive");
  auto residual = [&](double c) { return detail::q_over_p(c, detail::y_squared_at(c, t.e0)) - t.f_max; };
  double hi = 1.0;
  while (residual(hi) <= 0.0) {
    hi *= 2.0;
    if (hi > 1e6) throw Error(ErrorKind::NoBracket, "tangency residual does not change sign up to c = 1e6");
  }
  t.c0 = bisect(residual, 0.0, hi, 1e-15);
  t.y_m = std::sqrt(detail::y_squared_at(t.c0, t.e0));
  return t;
}

enum class FamilyVerdict { Constant, Increasing, Decreasing, IndeterminateNearOrigin, OutsideTheorem };

inline std::string_view to_string(FamilyVerdict v) {
  switch (v) {
    case FamilyVerdict::Constant: return "constant";
    case FamilyVerdict::Increasing: return "increasing";
    case FamilyVerdict::Decreasing: return "decreasing";
    case FamilyVerdict::IndeterminateNearOrigin: return "indeterminate-near-origin";
    case FamilyVerdict::OutsideTheorem: return "outside-theorem";
  }
  return "outside-theorem";
}

/// Sign regime between thresholds: monotone on (0, F(x_c)) without a theorem-level guarantee.
struct RemarkRegime {
  FamilyVerdict verdict = FamilyVerdict::OutsideTheorem;
  double e_hi = 0.0;
  double x_c = 0.0;
};

struct FamilyClassification {
  FamilyParams params;
  std::string case_label = "unclassified";
  FamilyVerdict verdict = FamilyVerdict::OutsideTheorem;
  double e0 = 0.0;  ///< certified interval is (0, e0); +inf for global statements
  std::optional<double> c0, c1;
  FamilyGeometry geometry;
  std::optional<double> x1;   ///< root of A bounding the interval (E, F, G.i)
  std::optional<double> x_m;  ///< maximum of A/B (E.ii, G.ii)
  std::optional<double> y_m;
  std::optional<RemarkRegime> remark;
  std::string note;

  bool monotone() const { return verdict == FamilyVerdict::Increasing || verdict == FamilyVerdict::Decreasing; }
};

namespace detail {

inline void apply_remark(FamilyClassification& out, const FamilyParams& p, double lo, double hi) {
  const double c1 = *out.c1;
  if (p.a != 0.0 && near(p.c, c1)) {
    out.verdict = FamilyVerdict::IndeterminateNearOrigin;
    out.note = "c = c1: the sign of M is not defined near the origin";
    return;
  }
  out.case_label = "unclassified";
  out.verdict = FamilyVerdict::OutsideTheorem;
  try {
    const SigmaRoot s = sigma_root(p, lo, hi);
    out.remark = RemarkRegime{p.c < c1 ? FamilyVerdict::Increasing : FamilyVerdict::Decreasing, s.energy, s.x_c};
    out.note = p.c < c1 ? "c0 < c < c1" : "c > c1";
  } catch (const Error&) {
    out.note = "c above c0; no sigma root in the annulus";
  }
}

// Tangency threshold, or an unclassified record when none exists.
inline std::optional<Tangency> try_tangency(const FamilyParams& p, FamilyClassification& out) {
  try {
    Tangency t = tangency_c0(p);
    out.c0 = t.c0;
    out.x_m = t.x_m;
    out.y_m = t.y_m;
    return t;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NoBracket) throw;
    out.note = std::string("no tangency threshold: ") + e.what();
    return std::nullopt;
  }
}

}  // namespace detail

/// Case analysis of the cubic-quartic family.
inline FamilyClassification classify(const FamilyParams& p) {
  FamilyClassification out;
  out.params = p;
  if (!std::isfinite(p.a) || !std::isfinite(p.b) || !std::isfinite(p.c)) {
    out.note = "non-finite parameters";
    return out;
  }
  if (p.c < 0.0) {
    out.note = "c < 0 is not covered";
    return out;
  }
  out.geometry = geometry(p);
  const FamilyGeometry& g = out.geometry;
  const ABPQ q = abpq(p);
  const SmoothFunction F = family_F(p);

  switch (base_regime(p)) {
    case Regime::A:
      out.case_label = "A";
      out.verdict = FamilyVerdict::Constant;
      out.e0 = kInf;
      return out;
    case Regime::B:
      out.case_label = "B";
      out.verdict = FamilyVerdict::Decreasing;
      out.e0 = kInf;
      return out;
    case Regime::C:
    case Regime::D: {
      const bool is_c = base_regime(p) == Regime::C;
      out.case_label = is_c ? "C" : "D";
      const Thresholds t = thresholds(p, g);
      out.c0 = t.c0;
      out.c1 = t.c1;
      if (!t.sign_condition_ok) {
        out.verdict = FamilyVerdict::OutsideTheorem;
        out.case_label = "unclassified";
        out.note = "A < 0 where B <= 0 inside the annulus";
        return out;
      }
      if (p.c <= *t.c0 || detail::near(p.c, *t.c0)) {
        out.verdict = FamilyVerdict::Increasing;
        out.e0 = g.e0;
        return out;
      }
      out.note = std::string("nearest case ") + out.case_label;
      detail::apply_remark(out, p, g.lo, g.hi);
      return out;
    }
    case Regime::E: {
      const auto [l, r] = detail::nearest_roots(q.A);
      out.x1 = r;
      if (p.c == 0.0) {
        out.case_label = "E.i";
        out.verdict = FamilyVerdict::Decreasing;
        out.e0 = F(*r);
        return out;
      }
      const std::optional<Tangency> found = detail::try_tangency(p, out);
      if (!found) return out;
      const Tangency& t = *found;
      if (p.c >= t.c0 || detail::near(p.c, t.c0)) {
        out.case_label = "E.ii";
        out.verdict = FamilyVerdict::Decreasing;
        out.e0 = t.e0;
      } else {
        out.note = "nearest case E.ii; c below the tangency threshold";
      }
      return out;
    }
    case Regime::F: {
      const double crit = 10.0 * p.a * p.a / 9.0;
      if (detail::near(p.b, crit)) {
        out.case_label = "F.critical";
        out.verdict = FamilyVerdict::IndeterminateNearOrigin;
        out.note = "b = 10 a^2 / 9: A(0) = 0 and A changes sign at the origin";
        return out;
      }
      const auto [l, r] = detail::nearest_roots(q.A);
      double e0 = kInf;
      if (l) e0 = std::min(e0, F(*l));
      if (r) e0 = std::min(e0, F(*r));
      if (l && r) out.x1 = F(*l) <= F(*r) ? l : r;
      else out.x1 = l ? l : r;
      out.case_label = p.b < crit ? "F.i" : "F.ii";
      out.verdict = p.b < crit ? FamilyVerdict::Increasing : FamilyVerdict::Decreasing;
      out.e0 = e0;
      return out;
    }
    case Regime::G: {
      if (p.b <= p.a * p.a / 3.0 || detail::near(p.b, p.a * p.a / 3.0)) {
        out.case_label = "G.i";
        const Thresholds t = thresholds(p, g);
        out.c0 = t.c0;
        out.c1 = t.c1;
        const auto [l, r] = detail::nearest_roots(q.A);
        out.x1 = p.a > 0.0 ? l : r;
        const double e0 = F(*out.x1);
        if (!t.sign_condition_ok) {
          out.verdict = FamilyVerdict::IndeterminateNearOrigin;
          out.note = "B(x0) <= 0: the threshold argument does not apply";
          return out;
        }
        if (p.c <= *t.c0 || detail::near(p.c, *t.c0)) {
          out.verdict = FamilyVerdict::Increasing;
          out.e0 = e0;
          return out;
        }
        out.note = "nearest case G.i";
        detail::apply_remark(out, p, std::min(*out.x1, *t.r), std::max(*out.x1, *t.r));
        return out;
      }
      const std::optional<Tangency> found = detail::try_tangency(p, out);
      if (!found) return out;
      const Tangency& t = *found;
      if (p.c >= t.c0 || detail::near(p.c, t.c0)) {
        out.case_label = "G.ii";
        out.verdict = FamilyVerdict::Decreasing;
        out.e0 = t.e0;
      } else {
        out.note = "nearest case G.ii; c below the tangency threshold";
      }
      return out;
    }
  }
  return out;
}

}  // namespace periodfn
