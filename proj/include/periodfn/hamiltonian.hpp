#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "periodfn/error.hpp"
#include "periodfn/roots.hpp"
#include "periodfn/smooth_function.hpp"

namespace periodfn {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// End of the interval on one side of 0 on which a potential is strictly monotone.
struct MonotoneEdge {
  enum class Kind { Critical, DomainEdge, Unbounded };
  Kind kind = Kind::Unbounded;
  double at = kInf;      ///< abscissa (signed); +-inf when unbounded
  double value = kInf;   ///< f(at), the edge limit, or +inf
};

struct AnnulusBound {
  enum class Boundary { CriticalPointOfF, CriticalPointOfG, DomainEdge, Unbounded };
  double e_star = kInf;
  Boundary boundary = Boundary::Unbounded;
  MonotoneEdge f_left, f_right, g_top;

  bool bounded() const { return std::isfinite(e_star); }
};

inline std::string_view to_string(AnnulusBound::Boundary b) {
  switch (b) {
    case AnnulusBound::Boundary::CriticalPointOfF: return "critical-point-of-F";
    case AnnulusBound::Boundary::CriticalPointOfG: return "critical-point-of-G";
    case AnnulusBound::Boundary::DomainEdge: return "domain-edge";
    case AnnulusBound::Boundary::Unbounded: return "unbounded";
  }
  return "unknown";
}

struct ScanOptions {
  double horizon = 1e6;      ///< scan stops here when no sign change of f' is found
  int points_per_decade = 64;
  double start = 1e-6;
};

/// Relative inset used when a scan or a bracket approaches an open domain end.
inline constexpr double kEdgeInset = 1e-9;

/// Nearest point on the side sign(side) of 0 where f stops increasing away from 0.
inline MonotoneEdge monotone_edge(const SmoothFunction& f, int side, const ScanOptions& opt = {}) {
  const double s = side < 0 ? -1.0 : 1.0;
  MonotoneEdge edge;
  const double dom_end = s > 0 ? f.domain().hi : f.domain().lo;

  if (const Polynomial* p = f.as_polynomial()) {
    const Polynomial dp = p->derivative();
    double best = kInf;
    if (dp.degree() > 0) {
      for (double r : real_roots(dp)) {
        const double u = s * r;
        if (u > 1e-12 && u < best) best = u;
      }
    } else if (dp.is_zero()) {
      best = 0.0;
    }
    if (std::isfinite(best)) {
      edge.kind = MonotoneEdge::Kind::Critical;
      edge.at = s * best;
      edge.value = (*p)(edge.at);
    } else {
      edge.at = s * kInf;
    }
    return edge;
  }

  const double limit = std::isfinite(dom_end) ? std::abs(dom_end) : opt.horizon;
  const double inset = std::isfinite(dom_end) ? kEdgeInset * limit : 0.0;
  const double top = limit - inset;
  const double step = std::pow(10.0, 1.0 / opt.points_per_decade);
  double prev = 0.0;
  for (double u = std::min(opt.start, 0.5 * top);; u = std::min(u * step, top)) {
    const double slope = s * f.derivative(s * u, 1);
    if (!(slope > 0.0)) {
      auto g = [&](double v) { return s * f.derivative(s * v, 1); };
      const double c = bisect(g, prev > 0.0 ? prev : 0.5 * u, u);
      edge.kind = MonotoneEdge::Kind::Critical;
      edge.at = s * c;
      edge.value = f(edge.at);
      return edge;
    }
    prev = u;
    if (u >= top) break;
  }
  if (std::isfinite(dom_end)) {
    edge.kind = MonotoneEdge::Kind::DomainEdge;
    edge.at = dom_end;
    edge.value = f.edge_limit(side);
  } else {
    edge.at = s * kInf;
  }
  return edge;
}

/// Solves f(x) = level on the side sign(side) of 0, inside the monotone range
/// bounded by `edge`. Requires 0 < level < edge.value.
inline double level_root(const SmoothFunction& f, double level, int side, const MonotoneEdge& edge,
                         std::optional<double> guess = std::nullopt) {
  const double s = side < 0 ? -1.0 : 1.0;
  auto fdf = [&](double u) {
    const Jet j = f.jet(s * u);
    return std::pair{j.v - level, s * j.d1};
  };
  double hi;
  if (edge.kind == MonotoneEdge::Kind::Critical) {
    hi = std::abs(edge.at);
  } else if (edge.kind == MonotoneEdge::Kind::DomainEdge) {
    const double end = std::abs(edge.at);
    double inset = kEdgeInset * end;
    hi = end - inset;
    while (f(s * hi) < level && inset > 1e-300) {
      inset *= 1e-3;
      hi = end - inset;
    }
  } else {
    const double f2 = f.derivative(0.0, 2);
    hi = std::sqrt(2.0 * level / f2);
    while (f(s * hi) < level) {
      hi *= 2.0;
      if (!std::isfinite(hi)) throw Error(ErrorKind::EnergyOutOfAnnulus, "level not attained");
    }
  }
  const double g0 = guess ? std::abs(*guess) : std::sqrt(2.0 * level / f.derivative(0.0, 2));
  return s * newton_bisect(fdf, 0.0, hi, g0);
}

/// H(x, y) = F(x) + G(y) with the center hypotheses checked at construction
/// time only as far as needed to cache the annulus geometry.
class SeparableHamiltonian {
 public:
  SeparableHamiltonian(SmoothFunction F, SmoothFunction G, double tol = 1e-10)
      : F_(std::move(F)), G_(std::move(G)), tol_(tol) {
    if (F_.admissible(0.0) && G_.admissible(0.0) && F_.derivative(0.0, 2) > 0.0 && G_.derivative(0.0, 2) > 0.0) {
      AnnulusBound b;
      b.f_left = monotone_edge(F_, -1);
      b.f_right = monotone_edge(F_, +1);
      b.g_top = monotone_edge(G_, +1);
      b.e_star = kInf;
      auto consider = [&](const MonotoneEdge& e, AnnulusBound::Boundary critical_tag) {
        if (e.kind == MonotoneEdge::Kind::Unbounded) return;
        const auto tag = e.kind == MonotoneEdge::Kind::Critical ? critical_tag : AnnulusBound::Boundary::DomainEdge;
        if (e.value < b.e_star || (b.boundary == AnnulusBound::Boundary::Unbounded && e.value == b.e_star)) {
          b.e_star = e.value;
          b.boundary = tag;
        }
      };
      consider(b.f_left, AnnulusBound::Boundary::CriticalPointOfF);
      consider(b.f_right, AnnulusBound::Boundary::CriticalPointOfF);
      consider(b.g_top, AnnulusBound::Boundary::CriticalPointOfG);
      annulus_ = b;
    }
  }

  const SmoothFunction& F() const { return F_; }
  const SmoothFunction& G() const { return G_; }
  double tolerance() const { return tol_; }

  double operator()(double x, double y) const { return F_(x) + G_(y); }

  /// Cached annulus geometry; empty when F''(0) or G''(0) is not positive.
  const std::optional<AnnulusBound>& annulus() const { return annulus_; }

  const AnnulusBound& require_annulus() const {
    if (!annulus_) throw Error(ErrorKind::EnergyOutOfAnnulus, "origin is not a nondegenerate center");
    return *annulus_;
  }

 private:
  SmoothFunction F_;
  SmoothFunction G_;
  double tol_;
  std::optional<AnnulusBound> annulus_;
};

struct HypothesisCheck {
  std::string name;
  bool passed = false;
  double residual = 0.0;
};

struct ValidationReport {
  std::vector<HypothesisCheck> checks;
  bool passed = false;
};

/// Checks F(0)=G(0)=F'(0)=G'(0)=0, F''(0)>0, G''(0)>0 and evenness of G.
inline ValidationReport validate_center(const SeparableHamiltonian& H) {
  ValidationReport rep;
  const double tol = H.tolerance();
  auto add = [&](std::string name, bool ok, double residual) {
    rep.checks.push_back({std::move(name), ok, residual});
  };
  if (!H.F().admissible(0.0) || !H.G().admissible(0.0)) {
    add("origin in domain", false, kInf);
    rep.passed = false;
    return rep;
  }
  const Jet f = H.F().jet(0.0);
  const Jet g = H.G().jet(0.0);
  add("F(0) = 0", std::abs(f.v) <= tol, std::abs(f.v));
  add("G(0) = 0", std::abs(g.v) <= tol, std::abs(g.v));
  add("F'(0) = 0", std::abs(f.d1) <= tol, std::abs(f.d1));
  add("G'(0) = 0", std::abs(g.d1) <= tol, std::abs(g.d1));
  add("F''(0) > 0", f.d2 > 0.0, f.d2);
  add("G''(0) > 0", g.d2 > 0.0, g.d2);

  // 64 symmetric probe pairs over the range relevant to the annulus.
  double span = 2.0;
  if (H.annulus() && std::isfinite(H.annulus()->g_top.at)) span = std::abs(H.annulus()->g_top.at);
  else if (g.d2 > 0.0) span = 4.0 / std::sqrt(g.d2);
  span = std::min({span, 0.999 * H.G().domain().hi, -0.999 * H.G().domain().lo});
  double worst = 0.0;
  for (int k = 1; k <= 64; ++k) {
    const double y = span * k / 64.0;
    const double a = H.G()(y);
    const double b = H.G()(-y);
    worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(a)));
  }
  const bool sampled_even = worst <= tol;
  add("G even (sampled)", sampled_even, worst);
  add("G even (declared)", H.G().declared_even() && sampled_even, H.G().declared_even() ? 0.0 : 1.0);

  rep.passed = std::all_of(rep.checks.begin(), rep.checks.end(), [](const auto& c) { return c.passed; });
  return rep;
}

struct TurningPoints {
  double energy = 0.0;
  double x_minus = 0.0;
  double x_plus = 0.0;
  double y_plus = 0.0;
};

inline AnnulusBound annulus_energy_bound(const SeparableHamiltonian& H) { return H.require_annulus(); }

inline void require_in_annulus(const SeparableHamiltonian& H, double E) {
  const auto& b = H.require_annulus();
  if (!(E > 0.0) || !(E < b.e_star))
    throw Error(ErrorKind::EnergyOutOfAnnulus, "energy " + std::to_string(E) + " outside (0, E*)");
}

inline TurningPoints turning_points(const SeparableHamiltonian& H, double E) {
  require_in_annulus(H, E);
  const auto& b = H.require_annulus();
  TurningPoints tp;
  tp.energy = E;
  tp.x_minus = level_root(H.F(), E, -1, b.f_left);
  tp.x_plus = level_root(H.F(), E, +1, b.f_right);
  tp.y_plus = level_root(H.G(), E, +1, b.g_top);
  return tp;
}

/// Extent of {F <= E} on one side, clamped to the monotone edge (used when E = E*).
inline double level_extent(const SmoothFunction& f, double E, int side, const MonotoneEdge& edge) {
  if (E >= edge.value) return edge.at;
  return level_root(f, E, side, edge);
}

/// The root r of F(r) = F(x0) on the opposite side of 0, nearest to 0.
inline double conjugate_point(const SmoothFunction& F, double x0) {
  if (x0 == 0.0) return 0.0;
  const int side = x0 > 0.0 ? -1 : +1;
  const double target = F(x0);
  const MonotoneEdge edge = monotone_edge(F, side);
  const double tol = 1e-12 * std::max(1.0, std::abs(target));
  if (!(target > 0.0)) throw Error(ErrorKind::NoConjugate, "F(x0) is not positive");
  if (edge.value < target - tol) throw Error(ErrorKind::NoConjugate, "F does not reattain F(x0) on the opposite side");
  if (std::abs(edge.value - target) <= tol && std::isfinite(edge.at)) return edge.at;
  return level_root(F, target, side, edge);
}

}  // namespace periodfn
