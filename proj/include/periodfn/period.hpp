#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "periodfn/error.hpp"
#include "periodfn/hamiltonian.hpp"
#include "periodfn/ode.hpp"
#include "periodfn/optimize.hpp"
#include "periodfn/parallel.hpp"
#include "periodfn/quadrature.hpp"
#include "periodfn/roots.hpp"

namespace periodfn {

enum class PeriodMethod { Theta, Raw, Ode };

inline std::string_view to_string(PeriodMethod m) {
  switch (m) {
    case PeriodMethod::Theta: return "theta-quadrature";
    case PeriodMethod::Raw: return "raw-quadrature";
    case PeriodMethod::Ode: return "ode-oracle";
  }
  return "unknown";
}

inline std::optional<PeriodMethod> parse_period_method(std::string_view s) {
  if (s == "theta-quadrature" || s == "theta") return PeriodMethod::Theta;
  if (s == "raw-quadrature" || s == "raw") return PeriodMethod::Raw;
  if (s == "ode-oracle" || s == "ode") return PeriodMethod::Ode;
  return std::nullopt;
}

struct PeriodSample {
  double energy = 0.0;
  double period = 0.0;
  PeriodMethod method = PeriodMethod::Theta;
  double error = 0.0;
  double drift = 0.0;  ///< relative Hamiltonian drift (ode-oracle only)
};

/// The reduced integrand of T(E) = 2 int_{-pi/2}^{pi/2} sqrt(z) / (h'(x) G'(y)) dtheta,
/// with h(x) = sign(x) sqrt(F(x)), h(x) = sqrt(E) sin(theta), z = E cos^2(theta), G(y) = z.
class ThetaIntegrand {
 public:
  ThetaIntegrand(const SeparableHamiltonian& H, double E)
      : F_(H.F()), G_(H.G()), E_(E), tp_(periodfn::turning_points(H, E)) {
    f2_ = F_.derivative(0.0, 2);
    g2_ = G_.derivative(0.0, 2);
    sqrt_e_ = std::sqrt(E);
  }

  const TurningPoints& turning_points() const { return tp_; }
  double energy() const { return E_; }

  /// Limit of sqrt(z)/G'(y) as z -> 0.
  double center_limit() const { return 1.0 / std::sqrt(2.0 * g2_); }

  /// h^{-1}(r) for r in [-sqrt(E), sqrt(E)].
  double x_of(double r) const {
    if (r == 0.0) return 0.0;
    if (r >= sqrt_e_) return tp_.x_plus;
    if (r <= -sqrt_e_) return tp_.x_minus;
    const double s = r > 0.0 ? 1.0 : -1.0;
    const double target = std::abs(r);
    auto fdf = [&](double u) {
      const Jet j = F_.jet(s * u);
      const double sf = std::sqrt(std::max(j.v, 0.0));
      return std::pair{sf - target, sf > 0.0 ? s * j.d1 / (2.0 * sf) : std::sqrt(0.5 * f2_)};
    };
    const double hi = s > 0.0 ? tp_.x_plus : -tp_.x_minus;
    return s * newton_bisect(fdf, 0.0, hi, std::min(target / std::sqrt(0.5 * f2_), 0.999 * hi));
  }

  /// Positive branch of G^{-1}(z) for z in [0, E].
  double y_of(double z) const {
    if (z <= 0.0) return 0.0;
    if (z >= E_) return tp_.y_plus;
    const double target = std::sqrt(z);
    auto fdf = [&](double u) {
      const Jet j = G_.jet(u);
      const double sg = std::sqrt(std::max(j.v, 0.0));
      return std::pair{sg - target, sg > 0.0 ? j.d1 / (2.0 * sg) : std::sqrt(0.5 * g2_)};
    };
    return newton_bisect(fdf, 0.0, tp_.y_plus, std::min(target / std::sqrt(0.5 * g2_), 0.999 * tp_.y_plus));
  }

  /// h'(x) = |F'(x)| / (2 sqrt(F(x))), continuous at 0.
  double h_prime(double x) const {
    if (x == 0.0) return std::sqrt(0.5 * f2_);
    const Jet j = F_.jet(x);
    return std::abs(j.d1) / (2.0 * std::sqrt(j.v));
  }

  /// sqrt(z)/G'(y(z)), continuous at z = 0.
  double g_factor(double z) const {
    const double y = y_of(z);
    if (y == 0.0) return center_limit();
    const Jet j = G_.jet(y);
    return std::sqrt(j.v) / j.d1;
  }

  double operator()(double theta) const {
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    const double x = x_of(sqrt_e_ * s);
    return g_factor(E_ * c * c) / h_prime(x);
  }

 private:
  SmoothFunction F_;
  SmoothFunction G_;
  double E_;
  TurningPoints tp_;
  double f2_ = 1.0, g2_ = 1.0;
  double sqrt_e_ = 0.0;
};

inline double theta_integrand(const SeparableHamiltonian& H, double E, double theta) {
  return ThetaIntegrand(H, E)(theta);
}

struct OracleOptions {
  double tol = 1e-11;
  enum class Half { Lower, Upper } half = Half::Lower;
  double t_max = 1e6;
};

/// Return time of the orbit through (x_+(E), 0), obtained by integrating
/// x' = G'(y), y' = -F'(x) over one half-plane and doubling.
inline PeriodSample return_time_oracle(const SeparableHamiltonian& H, double E, const OracleOptions& opt = {}) {
  const TurningPoints tp = turning_points(H, E);
  const bool lower = opt.half == OracleOptions::Half::Lower;
  const SmoothFunction& F = H.F();
  const SmoothFunction& G = H.G();
  auto rhs = [&](const State<2>& s) { return State<2>{G.derivative(s[1], 1), -F.derivative(s[0], 1)}; };
  auto event = [&](const State<2>& s) { return lower ? s[1] : -s[1]; };
  double drift = 0.0;
  auto observe = [&](const State<2>& s) { drift = std::max(drift, std::abs(H(s[0], s[1]) - E) / E); };

  OdeOptions<2> o;
  o.rtol = opt.tol;
  o.atol = {opt.tol * 0.5 * (tp.x_plus - tp.x_minus), opt.tol * tp.y_plus};
  o.t_max = opt.t_max;
  const State<2> start{lower ? tp.x_plus : tp.x_minus, 0.0};
  const auto r = integrate_to_event<2>(rhs, start, event, observe, o);
  if (drift > 100.0 * opt.tol)
    throw Error(ErrorKind::DriftExceeded, "relative energy drift " + std::to_string(drift));
  PeriodSample out;
  out.energy = E;
  out.period = 2.0 * r.t;
  out.method = PeriodMethod::Ode;
  out.drift = drift;
  out.error = out.period * std::max(opt.tol, drift);
  return out;
}

namespace detail {

inline PeriodSample theta_period(const SeparableHamiltonian& H, double E, const QuadratureOptions& opt) {
  const ThetaIntegrand g(H, E);
  QuadratureOptions half = opt;
  half.abs_tol *= 0.5;
  const auto q = adaptive_gauss_legendre(g, -0.5 * std::numbers::pi, 0.5 * std::numbers::pi, half);
  if (!q.converged)
    throw Error(ErrorKind::QuadratureFailure, "theta quadrature did not reach tolerance at E=" + std::to_string(E));
  return {E, 2.0 * q.value, PeriodMethod::Theta, 2.0 * q.error, 0.0};
}

// T = 2 int_{x-}^{x+} dx / G'(y(x)); E - F(x) is expanded about the nearer
// turning point when that point is very close, to keep z accurate.
inline PeriodSample raw_period(const SeparableHamiltonian& H, double E, const QuadratureOptions& opt) {
  const ThetaIntegrand inv(H, E);
  const TurningPoints& tp = inv.turning_points();
  const Jet jr = H.F().jet(tp.x_plus);
  const Jet jl = H.F().jet(tp.x_minus);
  const double width = tp.x_plus - tp.x_minus;
  const double near = 1e-4 * width;
  auto f = [&](double x, double da, double db) {
    double z;
    if (db < near && db <= da) {
      z = db * (jr.d1 - db * (0.5 * jr.d2 - db * jr.d3 / 6.0));
    } else if (da < near) {
      z = da * (-jl.d1 - da * (0.5 * jl.d2 + da * jl.d3 / 6.0));
    } else {
      z = E - H.F()(x);
    }
    const double y = inv.y_of(z);
    if (y <= 0.0) return 0.0;
    return 1.0 / H.G().derivative(y, 1);
  };
  QuadratureOptions half = opt;
  half.abs_tol *= 0.5;
  const auto q = tanh_sinh(f, tp.x_minus, tp.x_plus, half, 12);
  if (!q.converged)
    throw Error(ErrorKind::QuadratureFailure, "raw quadrature did not reach tolerance at E=" + std::to_string(E));
  return {E, 2.0 * q.value, PeriodMethod::Raw, 2.0 * q.error, 0.0};
}

}  // namespace detail

/// T(E) by the requested route. For the ode-oracle the quadrature tolerance is
/// not used; see return_time_oracle for its own options.
inline PeriodSample period(const SeparableHamiltonian& H, double E, PeriodMethod method = PeriodMethod::Theta,
                           const QuadratureOptions& opt = {}) {
  require_in_annulus(H, E);
  switch (method) {
    case PeriodMethod::Theta: return detail::theta_period(H, E, opt);
    case PeriodMethod::Raw: return detail::raw_period(H, E, opt);
    case PeriodMethod::Ode: return return_time_oracle(H, E);
  }
  return {};
}

struct DerivativeEstimate {
  double energy = 0.0;
  double value = 0.0;
  double error = 0.0;
  double step = 0.0;  ///< base finite-difference step
  int levels = 0;
};

/// dT/dE by central differences on the theta-quadrature period with four
/// levels of Richardson extrapolation (steps h, h/2, h/4, h/8).
inline DerivativeEstimate period_derivative(const SeparableHamiltonian& H, double E) {
  require_in_annulus(H, E);
  const double e_star = H.require_annulus().e_star;
  const double h0 = std::isfinite(e_star) ? std::min(0.1 * E, 0.1 * (e_star - E)) : 0.1 * E;
  QuadratureOptions q;
  q.abs_tol = 0.0;
  q.rel_tol = 1e-14;

  constexpr int kLevels = 4;
  std::array<std::array<double, kLevels>, kLevels> R{};
  double quad_err = 0.0;
  double h = h0;
  for (int i = 0; i < kLevels; ++i, h *= 0.5) {
    const auto tp = period(H, E + h, PeriodMethod::Theta, q);
    const auto tm = period(H, E - h, PeriodMethod::Theta, q);
    quad_err = std::max(quad_err, (tp.error + tm.error) / (2.0 * h));
    R[i][0] = (tp.period - tm.period) / (2.0 * h);
    double pow4 = 4.0;
    for (int j = 1; j <= i; ++j, pow4 *= 4.0) R[i][j] = R[i][j - 1] + (R[i][j - 1] - R[i - 1][j - 1]) / (pow4 - 1.0);
  }
  DerivativeEstimate d;
  d.energy = E;
  d.value = R[kLevels - 1][kLevels - 1];
  d.error = std::abs(R[kLevels - 1][kLevels - 1] - R[kLevels - 1][kLevels - 2]) + 4.0 * quad_err;
  d.step = h0;
  d.levels = kLevels;
  return d;
}

struct CurvePoint {
  double energy = 0.0;
  std::optional<PeriodSample> sample;
  std::optional<DerivativeEstimate> derivative;
  std::string failure;  ///< empty when both values were computed
};

struct PeriodCurve {
  PeriodMethod method = PeriodMethod::Theta;
  std::vector<CurvePoint> points;
  /// Sign of dT/dE per point: +1, -1, 0 (|dT/dE| within 3x its error), or nullopt for gaps.
  std::vector<std::optional<int>> signs;
  int sign_changes = 0;
  bool has_gaps = false;

  std::string sign_pattern() const {
    std::string s;
    for (const auto& v : signs) s += !v ? '?' : *v > 0 ? '+' : *v < 0 ? '-' : '0';
    return s;
  }
};

inline int derivative_sign(const DerivativeEstimate& d, double factor = 3.0) {
  if (std::abs(d.value) <= factor * d.error) return 0;
  return d.value > 0.0 ? 1 : -1;
}

struct CurveOptions {
  PeriodMethod method = PeriodMethod::Theta;
  bool derivative = true;
  QuadratureOptions quadrature{};
  int threads = 1;
};

inline PeriodCurve sample_period_curve(const SeparableHamiltonian& H, const std::vector<double>& grid,
                                       const CurveOptions& opt = {}) {
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw Error(ErrorKind::InvalidConfig, "energy grid must be strictly increasing");
  PeriodCurve curve;
  curve.method = opt.method;
  curve.points.resize(grid.size());
  detail::parallel_for(grid.size(), opt.threads, [&](std::size_t i) {
    CurvePoint& p = curve.points[i];
    p.energy = grid[i];
    try {
      p.sample = period(H, grid[i], opt.method, opt.quadrature);
      if (opt.derivative) p.derivative = period_derivative(H, grid[i]);
    } catch (const Error& e) {
      p.failure = e.what();
    }
  });
  int last = 0;
  for (const auto& p : curve.points) {
    if (!p.failure.empty() || !p.sample) curve.has_gaps = true;
    if (!p.derivative) {
      curve.signs.push_back(std::nullopt);
      continue;
    }
    const int s = derivative_sign(*p.derivative);
    curve.signs.push_back(s);
    if (s != 0) {
      if (last != 0 && s != last) ++curve.sign_changes;
      last = s;
    }
  }
  return curve;
}

struct PeriodExtremum {
  enum class Kind { Minimum, Maximum, None };
  Kind kind = Kind::None;
  std::optional<double> energy;
  double period = 0.0;
  bool flat = false;  ///< T constant to sampling precision on the bracket
};

inline std::string_view to_string(PeriodExtremum::Kind k) {
  switch (k) {
    case PeriodExtremum::Kind::Minimum: return "minimum";
    case PeriodExtremum::Kind::Maximum: return "maximum";
    case PeriodExtremum::Kind::None: return "none";
  }
  return "none";
}

/// Interior extremum of T on [E_lo, E_hi] located by a coarse scan followed by
/// Brent's method; none when the best sample sits at an end of the bracket.
inline PeriodExtremum locate_period_extremum(const SeparableHamiltonian& H, double e_lo, double e_hi,
                                             double abs_tol = 1e-9) {
  if (!(e_lo < e_hi) || !(e_lo > 0.0)) throw Error(ErrorKind::InvalidConfig, "need 0 < E_lo < E_hi");
  const double e_star = H.require_annulus().e_star;
  if (std::isfinite(e_star)) {
    e_hi = std::min(e_hi, e_star * (1.0 - 1e-6));
    if (!(e_lo < e_hi)) throw Error(ErrorKind::EnergyOutOfAnnulus, "bracket outside the annulus");
  }
  QuadratureOptions q;
  q.abs_tol = 0.0;
  q.rel_tol = 1e-13;
  auto T = [&](double E) {
    try {
      return period(H, E, PeriodMethod::Theta, q).period;
    } catch (const Error& e) {
      // The period diverges at a homoclinic boundary; treat failures there as +inf.
      if (e.kind() == ErrorKind::QuadratureFailure && std::isfinite(e_star) && E > 0.9 * e_star)
        return std::numeric_limits<double>::infinity();
      throw;
    }
  };
  constexpr int kScan = 16;
  std::array<double, kScan + 1> es{}, ts{};
  for (int i = 0; i <= kScan; ++i) {
    es[i] = i == kScan ? e_hi : e_lo + (e_hi - e_lo) * i / kScan;
    ts[i] = T(es[i]);
  }
  const auto [mn, mx] = std::minmax_element(ts.begin(), ts.end());
  PeriodExtremum res;
  if (std::isfinite(*mx) && *mx - *mn <= 1e-11 * std::abs(*mn)) {
    res.flat = true;
    return res;
  }
  auto refine = [&](int i, double sign) {
    auto obj = [&](double E) { return sign * T(E); };
    const auto r = brent_minimize(obj, es[i - 1], es[i + 1], abs_tol);
    res.energy = r.x;
    res.period = sign * r.fx;
  };
  const int imin = static_cast<int>(mn - ts.begin());
  const int imax = static_cast<int>(mx - ts.begin());
  if (imin > 0 && imin < kScan) {
    res.kind = PeriodExtremum::Kind::Minimum;
    refine(imin, 1.0);
  } else if (imax > 0 && imax < kScan) {
    res.kind = PeriodExtremum::Kind::Maximum;
    refine(imax, -1.0);
  }
  return res;
}

}  // namespace periodfn
