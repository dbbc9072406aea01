#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "periodfn/error.hpp"
#include "periodfn/hamiltonian.hpp"
#include "periodfn/parallel.hpp"

namespace periodfn {

/// N(x) = 6 F F''^2 - 3 F'^2 F'' - 2 F F' F'''.
inline double chicone_N(const SmoothFunction& F, double x) {
  const Jet f = F.jet(x);
  return 6.0 * f.v * f.d2 * f.d2 - 3.0 * f.d1 * f.d1 * f.d2 - 2.0 * f.v * f.d1 * f.d3;
}

/// M(x, y) = N(x) G G'^2 + F F'^2 F'' (G'^2 - 2 G G'') with its pieces.
struct CriterionValue {
  double x = 0.0, y = 0.0;
  double M = 0.0;
  double N = 0.0;        ///< first bracket: Chicone's N(x)
  double term2 = 0.0;    ///< second bracket: F F'^2 F''
  double g_weight1 = 0.0;  ///< G G'^2
  double g_weight2 = 0.0;  ///< G'^2 - 2 G G''
  double scale = 0.0;    ///< sum of the magnitudes of all monomials, for relative comparisons
};

inline CriterionValue criterion_M(const SmoothFunction& F, const SmoothFunction& G, double x, double y) {
  const Jet f = F.jet(x);
  const Jet g = G.jet(y);
  CriterionValue cv;
  cv.x = x;
  cv.y = y;
  const double n1 = 6.0 * f.v * f.d2 * f.d2;
  const double n2 = 3.0 * f.d1 * f.d1 * f.d2;
  const double n3 = 2.0 * f.v * f.d1 * f.d3;
  cv.N = n1 - n2 - n3;
  cv.term2 = f.v * f.d1 * f.d1 * f.d2;
  const double g1 = g.d1 * g.d1;
  const double g2 = 2.0 * g.v * g.d2;
  cv.g_weight1 = g.v * g1;
  cv.g_weight2 = g1 - g2;
  cv.M = cv.N * cv.g_weight1 + cv.term2 * cv.g_weight2;
  cv.scale = (std::abs(n1) + std::abs(n2) + std::abs(n3)) * std::abs(cv.g_weight1) +
             std::abs(cv.term2) * (std::abs(g1) + std::abs(g2));
  return cv;
}

inline CriterionValue criterion_M(const SeparableHamiltonian& H, double x, double y) {
  return criterion_M(H.F(), H.G(), x, y);
}

struct RelativisticMargin {
  double direct = 0.0;  ///< G'^2 - 2 G G'' from the derivatives of G = sqrt(1 + y^2) - 1
  double closed = 0.0;  ///< (s - 1)^2 (s + 2) / s^3 with s = sqrt(1 + y^2)
};

inline RelativisticMargin relativistic_margin(double y) {
  const double s2 = 1.0 + y * y;
  const double s = std::sqrt(s2);
  const double sm1 = y * y / (s + 1.0);
  const double g = sm1;
  const double g1 = y / s;
  const double g2 = 1.0 / (s2 * s);
  return {g1 * g1 - 2.0 * g * g2, sm1 * sm1 * (s + 2.0) / (s2 * s)};
}

enum class Verdict { NonNegative, NonPositive, Mixed, Indeterminate };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::NonNegative: return "NonNegative";
    case Verdict::NonPositive: return "NonPositive";
    case Verdict::Mixed: return "Mixed";
    case Verdict::Indeterminate: return "Indeterminate";
  }
  return "Indeterminate";
}

struct Witness {
  double x = 0.0, y = 0.0;
  double M = 0.0;
  double H = 0.0;
};

/// Sampled (not rigorous) sign verdict for M over {H <= E0} minus the axes.
struct SignCertificate {
  Verdict verdict = Verdict::Indeterminate;
  double e0 = 0.0;
  int resolution = 0;
  int depth = 0;
  bool open_region = false;     ///< E0 = E*: only H < E0 was sampled
  bool identically_zero = false;  ///< every retained sample was zero to the margin threshold
  std::optional<Witness> max_positive, min_negative;
  std::optional<Witness> lowest_positive, lowest_negative;  ///< smallest H of each sign
  double margin = std::numeric_limits<double>::infinity();
  long long positive = 0, negative = 0, zero = 0;
  long long weak = 0;  ///< signed samples with |M| under the margin threshold (counted in positive/negative)
  std::string reason;  ///< why the verdict is Indeterminate, if it is
  double x_minus = 0.0, x_plus = 0.0, y_plus = 0.0;

  long long samples() const { return positive + negative + zero; }
  /// The verdict establishes the requested sign (an identically zero M establishes both).
  bool certifies(Verdict sign) const {
    return verdict == sign || (identically_zero && (sign == Verdict::NonNegative || sign == Verdict::NonPositive));
  }
};

struct CertificateOptions {
  int resolution = 512;
  int depth = 4;
  int threads = 1;
  double zero_threshold = 1e-12;  ///< |M| <= threshold * scale is a weak sample and triggers refinement
  double axis_band = 1e-3;        ///< relative half-width of the excluded axis strips
  bool probe_origin = true;       ///< on Mixed, test shrinking energies for sign changes at the center
};

namespace detail {

struct CertTally {
  long long pos = 0, neg = 0, zero = 0, weak = 0;
  std::optional<Witness> max_pos, min_neg, low_pos, low_neg;
  double margin = std::numeric_limits<double>::infinity();

  void add(const Witness& w, int cls) {
    if (cls == 0) {
      ++zero;
      return;
    }
    margin = std::min(margin, std::abs(w.M));
    if (cls > 0) {
      ++pos;
      if (!max_pos || w.M > max_pos->M) max_pos = w;
      if (!low_pos || w.H < low_pos->H) low_pos = w;
    } else {
      ++neg;
      if (!min_neg || w.M < min_neg->M) min_neg = w;
      if (!low_neg || w.H < low_neg->H) low_neg = w;
    }
  }

  void merge(const CertTally& o) {
    pos += o.pos;
    neg += o.neg;
    zero += o.zero;
    weak += o.weak;
    margin = std::min(margin, o.margin);
    if (o.max_pos && (!max_pos || o.max_pos->M > max_pos->M)) max_pos = o.max_pos;
    if (o.min_neg && (!min_neg || o.min_neg->M < min_neg->M)) min_neg = o.min_neg;
    if (o.low_pos && (!low_pos || o.low_pos->H < low_pos->H)) low_pos = o.low_pos;
    if (o.low_neg && (!low_neg || o.low_neg->H < low_neg->H)) low_neg = o.low_neg;
  }
};

// Sample classes besides -1, 0, 1; weak samples are +-kWeak.
constexpr int kOutside = -2;
constexpr int kAxis = 2;
constexpr int kWeak = 3;
// |M| within this many ulps of its monomial scale is unresolvable.
constexpr double kNoiseUlps = 64.0;

struct CertGeometry {
  double x_lo, x_hi, y_hi;
  double e0;
  bool strict;
  double x_band, y_band;
};

class CertSampler {
 public:
  CertSampler(const SeparableHamiltonian& H, const CertGeometry& g, const CertificateOptions& opt)
      : H_(H), g_(g), opt_(opt) {}

  int sample(double x, double y, CertTally& tally) const {
    if (!H_.F().admissible(x) || !H_.G().admissible(y)) return kOutside;
    const double h = H_.F()(x) + H_.G()(y);
    if (g_.strict ? !(h < g_.e0) : !(h <= g_.e0)) return kOutside;
    if (std::abs(x) <= g_.x_band || std::abs(y) <= g_.y_band) return kAxis;
    const CriterionValue cv = criterion_M(H_.F(), H_.G(), x, y);
    const double a = std::abs(cv.M);
    if (a <= kNoiseUlps * std::numeric_limits<double>::epsilon() * cv.scale) {
      tally.add({x, y, cv.M, h}, 0);
      return 0;
    }
    const int sign = cv.M > 0.0 ? 1 : -1;
    const bool weak = a <= opt_.zero_threshold * cv.scale;
    tally.add({x, y, cv.M, h}, sign);
    if (weak) ++tally.weak;
    return weak ? kWeak * sign : sign;
  }

  static bool needs_refinement(int a, int b, int c, int d) {
    const int cs[4] = {a, b, c, d};
    bool pos = false, neg = false, zero = false, weak = false, in = false, out = false;
    for (int v : cs) {
      pos = pos || v == 1 || v == kWeak;
      neg = neg || v == -1 || v == -kWeak;
      zero = zero || v == 0;
      weak = weak || v == kWeak || v == -kWeak;
      (v == kOutside ? out : in) = true;
    }
    return weak || (zero && (pos || neg)) || (pos && neg) || (in && out);
  }

  // Corners: c00 at (x0, y0), c10 at (x1, y0), c01 at (x0, y1), c11 at (x1, y1).
  void refine(double x0, double x1, double y0, double y1, int c00, int c10, int c01, int c11, int level,
              CertTally& tally) const {
    if (level >= opt_.depth || !needs_refinement(c00, c10, c01, c11)) return;
    const double xm = 0.5 * (x0 + x1);
    const double ym = 0.5 * (y0 + y1);
    const int b = sample(xm, y0, tally);
    const int t = sample(xm, y1, tally);
    const int l = sample(x0, ym, tally);
    const int r = sample(x1, ym, tally);
    const int m = sample(xm, ym, tally);
    refine(x0, xm, y0, ym, c00, b, l, m, level + 1, tally);
    refine(xm, x1, y0, ym, b, c10, m, r, level + 1, tally);
    refine(x0, xm, ym, y1, l, m, c01, t, level + 1, tally);
    refine(xm, x1, ym, y1, m, r, t, c11, level + 1, tally);
  }

 private:
  const SeparableHamiltonian& H_;
  CertGeometry g_;
  const CertificateOptions& opt_;
};

// Inset a box edge that sits on an open domain end.
inline double inset_into(const SmoothFunction& f, double x) {
  if (f.admissible(x)) return x;
  return x * (1.0 - kEdgeInset);
}

}  // namespace detail

inline SignCertificate sign_certificate(const SeparableHamiltonian& H, double E0, const CertificateOptions& opt = {}) {
  const auto& b = H.require_annulus();
  if (!(E0 > 0.0) || E0 > b.e_star * (1.0 + 1e-12))
    throw Error(ErrorKind::EnergyOutOfAnnulus, "certificate energy outside (0, E*]");
  if (opt.resolution < 2 || opt.depth < 0) throw Error(ErrorKind::InvalidConfig, "resolution >= 2 and depth >= 0 required");

  SignCertificate cert;
  cert.e0 = E0;
  cert.resolution = opt.resolution;
  cert.depth = opt.depth;
  cert.open_region = E0 >= b.e_star;
  const double x_lo = detail::inset_into(H.F(), level_extent(H.F(), E0, -1, b.f_left));
  const double x_hi = detail::inset_into(H.F(), level_extent(H.F(), E0, +1, b.f_right));
  const double y_hi = detail::inset_into(H.G(), level_extent(H.G(), E0, +1, b.g_top));
  cert.x_minus = x_lo;
  cert.x_plus = x_hi;
  cert.y_plus = y_hi;
  const detail::CertGeometry geo{x_lo, x_hi, y_hi, E0, cert.open_region,
                                 opt.axis_band * (x_hi - x_lo), opt.axis_band * 2.0 * y_hi};
  const detail::CertSampler sampler(H, geo, opt);

  const int n = opt.resolution;
  auto xs = [&](int i) { return i == n ? x_hi : x_lo + (x_hi - x_lo) * i / n; };
  auto ys = [&](int j) { return j == n ? y_hi : -y_hi + 2.0 * y_hi * j / n; };

  // Node classes, one row per x index.
  std::vector<std::int8_t> cls(static_cast<std::size_t>(n + 1) * (n + 1));
  std::vector<detail::CertTally> node_tally(n + 1);
  detail::parallel_for(n + 1, opt.threads, [&](std::size_t i) {
    for (int j = 0; j <= n; ++j)
      cls[i * (n + 1) + j] = static_cast<std::int8_t>(sampler.sample(xs(static_cast<int>(i)), ys(j), node_tally[i]));
  });
  std::vector<detail::CertTally> cell_tally(n);
  detail::parallel_for(n, opt.threads, [&](std::size_t i) {
    for (int j = 0; j < n; ++j) {
      const auto at = [&](std::size_t a, int c) { return static_cast<int>(cls[a * (n + 1) + c]); };
      sampler.refine(xs(static_cast<int>(i)), xs(static_cast<int>(i) + 1), ys(j), ys(j + 1), at(i, j), at(i + 1, j),
                     at(i, j + 1), at(i + 1, j + 1), 0, cell_tally[i]);
    }
  });
  detail::CertTally total;
  for (const auto& t : node_tally) total.merge(t);
  for (const auto& t : cell_tally) total.merge(t);

  cert.positive = total.pos;
  cert.negative = total.neg;
  cert.zero = total.zero;
  cert.weak = total.weak;
  cert.max_positive = total.max_pos;
  cert.min_negative = total.min_neg;
  cert.lowest_positive = total.low_pos;
  cert.lowest_negative = total.low_neg;
  cert.margin = total.margin;

  if (cert.samples() == 0) {
    cert.verdict = Verdict::Indeterminate;
    cert.reason = "ResolutionTooCoarse: no off-axis samples inside the region";
  } else if (total.pos == 0 && total.neg == 0) {
    cert.identically_zero = true;
    cert.verdict = Verdict::NonNegative;
  } else if (total.pos > 0 && total.neg > 0) {
    cert.verdict = Verdict::Mixed;
  } else if (total.zero > 0) {
    cert.verdict = Verdict::Indeterminate;
    cert.reason = "ResolutionTooCoarse: unresolvable samples off the axes remain after refinement";
  } else {
    cert.verdict = total.pos > 0 ? Verdict::NonNegative : Verdict::NonPositive;
  }

  if (cert.verdict == Verdict::Mixed && opt.probe_origin) {
    CertificateOptions probe = opt;
    probe.resolution = std::min(opt.resolution, 128);
    probe.depth = std::min(opt.depth, 2);
    probe.probe_origin = false;
    bool mixed_everywhere = true;
    for (int k = 1; k <= 6 && mixed_everywhere; ++k) {
      const auto c = sign_certificate(H, E0 * std::pow(10.0, -k), probe);
      if (c.verdict != Verdict::Mixed) mixed_everywhere = c.verdict == Verdict::Indeterminate;
    }
    if (mixed_everywhere) {
      cert.verdict = Verdict::Indeterminate;
      cert.reason = "sign of M changes arbitrarily close to the center";
    }
  }
  return cert;
}

struct CertifiedEnergy {
  Verdict sign = Verdict::NonNegative;
  double e0 = 0.0;          ///< largest certified energy found
  double last_pass = 0.0;
  std::optional<double> first_fail;  ///< empty when the whole range up to E_hi passed
  std::optional<Witness> tangency;   ///< opposite-sign sample of lowest energy at first_fail
  bool reached_upper = false;
};

/// Bisection on E between a passing and a failing certificate to relative width 1e-3.
inline CertifiedEnergy max_certified_energy(const SeparableHamiltonian& H, Verdict sign, double E_hi,
                                            const CertificateOptions& opt = {}, double rel_width = 1e-3) {
  if (sign != Verdict::NonNegative && sign != Verdict::NonPositive)
    throw Error(ErrorKind::InvalidConfig, "requested sign must be NonNegative or NonPositive");
  const auto& b = H.require_annulus();
  const double top = std::min(E_hi, b.e_star);
  if (!(top > 0.0)) throw Error(ErrorKind::EnergyOutOfAnnulus, "upper energy must be positive");
  CertifiedEnergy out;
  out.sign = sign;
  auto opposite = [&](const SignCertificate& c) {
    return sign == Verdict::NonNegative ? c.lowest_negative : c.lowest_positive;
  };

  SignCertificate fail_cert = sign_certificate(H, top, opt);
  if (fail_cert.certifies(sign)) {
    out.e0 = out.last_pass = top;
    out.reached_upper = true;
    return out;
  }
  double fail = top;
  double pass = 0.0;
  for (int k = 1; k <= 8; ++k) {
    const double e = top * std::pow(10.0, -k);
    const auto c = sign_certificate(H, e, opt);
    if (c.certifies(sign)) {
      pass = e;
      break;
    }
    fail = e;
    fail_cert = c;
  }
  if (pass == 0.0) throw Error(ErrorKind::NoCertifiedRegion, "no certified energy down to 1e-8 of the upper bound");
  while ((fail - pass) > rel_width * fail) {
    const double mid = fail / pass > 2.0 ? std::sqrt(fail * pass) : 0.5 * (fail + pass);
    const auto c = sign_certificate(H, mid, opt);
    if (c.certifies(sign)) {
      pass = mid;
    } else {
      fail = mid;
      fail_cert = c;
    }
  }
  out.e0 = out.last_pass = pass;
  out.first_fail = fail;
  out.tangency = opposite(fail_cert);
  return out;
}

/// K(E0) = {F <= E0} = [x_-(E0), x_+(E0)].
inline std::pair<double, double> chicone_interval(const SmoothFunction& F, double E0) {
  const MonotoneEdge left = monotone_edge(F, -1);
  const MonotoneEdge right = monotone_edge(F, +1);
  const double bound = std::min(left.value, right.value);
  if (!(E0 > 0.0) || E0 > bound * (1.0 + 1e-12))
    throw Error(ErrorKind::EnergyOutOfAnnulus, "E0 outside (0, E*] of the potential");
  return {level_extent(F, E0, -1, left), level_extent(F, E0, +1, right)};
}

}  // namespace periodfn
