// Runs the ten acceptance criteria and prints one PASS/FAIL line for each.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "periodfn/periodfn.hpp"

using namespace periodfn;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

template <class... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

SmoothFunction half_square() { return SmoothFunction::polynomial({0.0, 0.0, 0.5}); }

Outcome isochronous_baseline() {
  const auto t0 = Clock::now();
  const auto H = family_hamiltonian({0, 0, 0});
  double worst = 0.0;
  for (double E : {0.01, 0.1, 1.0, 10.0}) worst = std::max(worst, std::abs(period(H, E).period - 2 * std::numbers::pi));
  const double t = seconds_since(t0);
  return {worst <= 1e-8 && t < 1.0, fmt("max |T - 2pi| = %.2e, %.3f s", worst, t)};
}

Outcome cross_method() {
  const auto t0 = Clock::now();
  std::vector<std::pair<std::string, SeparableHamiltonian>> systems;
  std::vector<double> tops;
  for (const auto& ex : list_examples()) {
    systems.emplace_back(ex.name, ex.H);
    const double es = ex.H.require_annulus().e_star;
    tops.push_back(std::isfinite(es) ? std::min(ex.check_e, 0.9 * es) : ex.check_e);
  }
  const FamilyParams points[] = {{0, 0, 0}, {0, 0, 1},       {1, 0, 0}, {1, 0, 2}, {2, 2, 3},
                                 {3, 3, 1}, {0, 2, 0}, {1, -1, 0.1}, {1, 2, 0}, {-1.5, 0.5, 0.7}};
  for (const auto& p : points) {
    const auto H = family_hamiltonian(p);
    const double es = H.require_annulus().e_star;
    systems.emplace_back(fmt("family(%g,%g,%g)", p.a, p.b, p.c), H);
    tops.push_back(std::isfinite(es) ? 0.9 * es : 1.0);
  }
  double worst = 0.0;
  std::string where;
  int count = 0;
  for (std::size_t i = 0; i < systems.size(); ++i) {
    for (double f : {0.01, 0.1, 0.3, 0.6, 1.0}) {
      const double E = f * tops[i];
      const double a = period(systems[i].second, E).period;
      const double b = return_time_oracle(systems[i].second, E).period;
      const double rel = std::abs(a - b) / a;
      ++count;
      if (rel > worst) {
        worst = rel;
        where = systems[i].first + fmt(" E=%g", E);
      }
    }
  }
  const double t = seconds_since(t0);
  return {worst <= 1e-6 && t < 60.0,
          fmt("%d comparisons on %zu systems, max rel %.2e (%s), %.1f s", count, systems.size(), worst, where.c_str(), t)};
}

Outcome chicone_reduction() {
  oracle::Rng rng(314);
  const SmoothFunction potentials[] = {
      SmoothFunction::polynomial({0.0, 0.0, 0.5, 1.0 / 3.0, -0.1}),
      SmoothFunction::trig_cos(),
      SmoothFunction::cosh(),
      SmoothFunction::log_potential(1.0, 2.0, 1.0, 2.0),
      SmoothFunction::power_law(1.0, 3.0, 1.0, 2.0, 0.9, 1.1),
  };
  double worst = 0.0;
  for (const auto& F : potentials) {
    const double lo = std::max(F.domain().lo * 0.99, -2.0), hi = std::min(F.domain().hi * 0.99, 2.0);
    for (int i = 0; i < 1000; ++i) {
      const double x = rng.uniform(lo, hi), y = rng.uniform(-2.0, 2.0);
      const double M = criterion_M(F, half_square(), x, y).M;
      worst = std::max(worst, std::abs(M - chicone_N(F, x) * std::pow(y, 4) / 2.0) / (1.0 + std::abs(M)));
    }
  }
  return {worst <= 1e-10, fmt("5 potentials x 1000 points, max deviation %.2e", worst)};
}

Outcome cubic_thresholds() {
  const FamilyParams p{1, 0, 0};
  const auto t = thresholds(p, geometry(p));
  const double e0 = std::abs(*t.c0 - 2.0 / 9.0) / (2.0 / 9.0);
  const double e1 = std::abs(*t.c1 - 10.0 / 9.0) / (10.0 / 9.0);
  const auto g = geometry({1, 0, 1});
  const auto s = sigma_root({1, 0, 1}, g.lo, g.hi);
  const bool ok = e0 <= 1e-14 && e1 <= 1e-14 && std::abs(s.x_c - 0.025147) <= 1e-4 && std::abs(s.energy - 0.000321) <= 1e-5;
  return {ok, fmt("c0 rel err %.1e, c1 rel err %.1e, x_c = %.6f, F(x_c) = %.7f", e0, e1, s.x_c, s.energy)};
}

Outcome period_minimum() {
  const auto r = locate_period_extremum(family_hamiltonian({1, 0, 2}), 0.007106, 1.0 / 6.0);
  const bool ok = r.kind == PeriodExtremum::Kind::Minimum && r.energy && std::abs(*r.energy - 0.0427) <= 0.002;
  return {ok, fmt("%s at E = %.5f", std::string(to_string(r.kind)).c_str(), r.energy.value_or(NAN))};
}

Outcome case_g_numbers() {
  const auto t = tangency_c0({2, 2, 0});
  const bool ab2 = std::abs(t.x_m + 0.0748706245) <= 1e-6 && std::abs(t.e0 - 0.0025387196) <= 1e-8 &&
                   std::abs(t.c0 - 2.8004647) <= 1e-5;
  const FamilyParams p{3, 3, 1};
  const auto c = classify(p);
  const auto th = thresholds(p, geometry(p));
  const double x1 = c.x1.value_or(NAN);
  const double residual = std::abs(abpq(p).A(x1));
  const bool ab3 = c.case_label == "G.i" && std::abs(x1 + 1.0 / 3.0) <= 1e-12 && residual <= 1e-12 && *th.c1 == 7.0 &&
                   std::abs(*th.c0 - 1.798) <= 1e-3 && std::abs(*th.r - 0.1958) <= 1e-3;
  return {ab2 && ab3, fmt("x_m = %.10f, F(x_m) = %.10f, c0 = %.7f; x1 = %.15f (|A| = %.1e), c1 = %g, c0 = %.4f, x0 = %.4f",
                          t.x_m, t.e0, t.c0, x1, residual, *th.c1, *th.c0, *th.r)};
}

Outcome sinh_bound() {
  const auto b = sinh_certified_bound_detail();
  const double want = 4 + 4 * std::sqrt(3.0);
  const SeparableHamiltonian H(SmoothFunction::cosh(), SmoothFunction::cosh());
  const auto r = max_certified_energy(H, Verdict::NonPositive, 20.0);
  const bool ok = std::abs(b.argmin - (2 + std::sqrt(3.0))) <= 1e-9 && std::abs(r.e0 - want) <= 0.05;
  return {ok, fmt("argmin err %.1e, bound %.12f, certified E0 = %.4f (target %.4f)", std::abs(b.argmin - 2 - std::sqrt(3.0)),
                  b.bound, r.e0, want)};
}

Outcome sweep_consistency() {
  oracle::Rng rng(20261019);
  int classified = 0, draws = 0, checks = 0, passed = 0, skipped = 0, errors = 0;
  while (classified < 200 && draws < 5000) {
    ++draws;
    FamilyParams p{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(0, 4)};
    switch (rng.next() % 6) {
      case 0: p.c = 0; break;
      case 1: p.a = 0; break;
      case 2: p.b = 0; break;
      default: break;
    }
    const auto c = classify(p);
    if (!c.monotone()) continue;
    ++classified;
    const auto H = family_hamiltonian(p);
    const double top = std::isfinite(c.e0) ? c.e0 : 1.0;
    const int want = c.verdict == FamilyVerdict::Increasing ? 1 : -1;
    for (int i = 0; i < 10; ++i) {
      const double E = top * std::pow(10.0, -3.0 + 3.0 * (i + 0.5) / 10.0);
      try {
        const int s = derivative_sign(period_derivative(H, E));
        if (s == 0) {
          ++skipped;
          continue;
        }
        ++checks;
        passed += s == want;
      } catch (const Error&) {
        ++errors;
      }
    }
  }
  const double rate = checks ? static_cast<double>(passed) / checks : 0.0;
  return {classified == 200 && rate >= 0.98 && errors == 0,
          fmt("%d verdicts from %d draws; %d/%d checks pass (%.2f%%), %d flat skipped, %d errors", classified, draws, passed,
              checks, 100 * rate, skipped, errors)};
}

Outcome increasing_examples() {
  const SeparableHamiltonian pair(SmoothFunction::trig_cos(), SmoothFunction::trig_cos());
  const SeparableHamiltonian rel(half_square(), SmoothFunction::sqrt_relativistic());
  const auto cp = sign_certificate(pair, 2.0);
  const auto cr = sign_certificate(rel, 50.0);
  int positive = 0;
  for (const auto& [H, top] : {std::pair{&pair, 2.0}, std::pair{&rel, 50.0}})
    for (int i = 0; i < 10; ++i)
      positive += derivative_sign(period_derivative(*H, top * std::pow(10.0, -3.0 + 3.0 * (i + 0.5) / 10.0))) == 1;
  const bool ok = cp.verdict == Verdict::NonNegative && cr.verdict == Verdict::NonNegative && positive == 20;
  return {ok, fmt("pendulum pair %s, relativistic %s, %d/20 positive derivatives", std::string(to_string(cp.verdict)).c_str(),
                  std::string(to_string(cr.verdict)).c_str(), positive)};
}

Outcome indeterminate_boundary() {
  const FamilyParams p{1, 10.0 / 9.0, 0};
  const auto c = classify(p);
  const auto H = family_hamiltonian(p);
  std::string verdicts;
  bool one_signed = false;
  for (double E : {1e-8, 1e-6, 1e-4, 1e-3, 1e-2, 0.1, 1.0, 10.0}) {
    const auto cert = sign_certificate(H, E);
    one_signed = one_signed || cert.certifies(Verdict::NonNegative) || cert.certifies(Verdict::NonPositive);
    verdicts += std::string(verdicts.empty() ? "" : " ") + std::string(to_string(cert.verdict));
  }
  return {c.verdict == FamilyVerdict::IndeterminateNearOrigin && !one_signed,
          "classify: " + std::string(to_string(c.verdict)) + "; certificates: " + verdicts};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"isochronous baseline", isochronous_baseline},
      {"cross-method period agreement", cross_method},
      {"potential-case reduction of M", chicone_reduction},
      {"cubic potential thresholds", cubic_thresholds},
      {"period minimum location", period_minimum},
      {"quartic case numbers", case_g_numbers},
      {"hyperbolic bound", sinh_bound},
      {"sign-to-dynamics sweep", sweep_consistency},
      {"pendulum pair and relativistic verdicts", increasing_examples},
      {"critical parameter stays indeterminate", indeterminate_boundary},
  };
  const auto start = Clock::now();
  int failures = 0;
  int index = 0;
  for (const auto& [name, fn] : criteria) {
    ++index;
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s %2d %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed in %.1f s\n", index - failures, index, seconds_since(start));
  return failures == 0 ? 0 : 1;
}
