#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <memory>
#include <string>

#include "oracles.hpp"
#include "periodfn/hamiltonian.hpp"

using namespace periodfn;

namespace {

SmoothFunction half_square() { return SmoothFunction::polynomial({0.0, 0.0, 0.5}); }
SmoothFunction cubic_F() { return SmoothFunction::polynomial({0.0, 0.0, 0.5, 1.0 / 3.0}); }
SmoothFunction quartic_G() { return SmoothFunction::polynomial({0.0, 0.0, 0.5, 0.0, 0.25}); }

const HypothesisCheck& check(const ValidationReport& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return c;
  throw std::runtime_error("missing check " + name);
}

}  // namespace

TEST(ValidateCenter, LinearCenterPassesWithZeroResiduals) {
  const auto rep = validate_center(SeparableHamiltonian(half_square(), half_square()));
  EXPECT_TRUE(rep.passed);
  for (const auto& c : rep.checks)
    if (c.name.find("= 0") != std::string::npos) {
      EXPECT_EQ(c.residual, 0.0) << c.name;
    }
}

TEST(ValidateCenter, QuarticKineticFamilyPasses) {
  EXPECT_TRUE(validate_center(SeparableHamiltonian(cubic_F(), quartic_G())).passed);
}

TEST(ValidateCenter, OddCubicFailsCurvatureAndEvenness) {
  const auto rep = validate_center(SeparableHamiltonian(half_square(), SmoothFunction::polynomial({0.0, 0.0, 0.0, 1.0})));
  EXPECT_FALSE(rep.passed);
  EXPECT_FALSE(check(rep, "G''(0) > 0").passed);
  EXPECT_FALSE(check(rep, "G even (sampled)").passed);
  EXPECT_TRUE(check(rep, "F''(0) > 0").passed);
}

TEST(ValidateCenter, DeclaredFlagMustMatchSamples) {
  const auto lying = SmoothFunction::polynomial({0.0, 0.0, 0.5, 0.1}).declared(true);
  EXPECT_FALSE(validate_center(SeparableHamiltonian(half_square(), lying)).passed);
  const auto shy = half_square().declared(false);
  EXPECT_FALSE(validate_center(SeparableHamiltonian(half_square(), shy)).passed);
}

TEST(TurningPoints, ClosedForms) {
  const SeparableHamiltonian lin(half_square(), half_square());
  const auto tp = turning_points(lin, 2.0);
  EXPECT_NEAR(tp.x_plus, 2.0, 1e-12);
  EXPECT_NEAR(tp.x_minus, -2.0, 1e-12);

  const SeparableHamiltonian quartic(half_square(), quartic_G());
  EXPECT_NEAR(turning_points(quartic, 0.75).y_plus, 1.0, 1e-12);

  const SeparableHamiltonian cubic(cubic_F(), half_square());
  const auto c = turning_points(cubic, 1.0 / 6.0 * (1.0 - 1e-12));
  EXPECT_NEAR(c.x_minus, -1.0, 2e-6);
  EXPECT_NEAR(c.x_plus, 0.5, 1e-9);
}

TEST(TurningPoints, OutsideAnnulusThrows) {
  const SeparableHamiltonian cubic(cubic_F(), half_square());
  for (double E : {0.0, -1.0, cubic.require_annulus().e_star, 1.0}) {
    try {
      turning_points(cubic, E);
      ADD_FAILURE() << "E = " << E;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::EnergyOutOfAnnulus);
    }
  }
}

TEST(TurningPoints, ResidualsSignsAndMonotonicity) {
  oracle::Rng rng(11);
  const SeparableHamiltonian systems[] = {
      SeparableHamiltonian(cubic_F(), quartic_G()),
      SeparableHamiltonian(SmoothFunction::trig_cos(), SmoothFunction::trig_cos()),
      SeparableHamiltonian(SmoothFunction::log_potential(1.0, 2.0, 1.0, 2.0), half_square()),
      SeparableHamiltonian(SmoothFunction::cosh(), SmoothFunction::sqrt_relativistic()),
  };
  for (const auto& H : systems) {
    const double top = std::min(H.require_annulus().e_star, 20.0);
    double prev_plus = 0.0, prev_minus = 0.0;
    for (int i = 1; i <= 40; ++i) {
      const double E = top * i / 41.0;
      const auto tp = turning_points(H, E);
      EXPECT_LT(tp.x_minus, 0.0);
      EXPECT_GT(tp.x_plus, 0.0);
      EXPECT_GT(tp.y_plus, 0.0);
      // A root located to a few ulps leaves a residual proportional to |x F'(x)|.
      auto bound = [&](const SmoothFunction& f, double x) {
        return 1e-12 * std::max(1.0, E) + 16 * std::numeric_limits<double>::epsilon() * std::abs(x * f.derivative(x, 1));
      };
      EXPECT_LE(std::abs(H.F()(tp.x_plus) - E), bound(H.F(), tp.x_plus));
      EXPECT_LE(std::abs(H.F()(tp.x_minus) - E), bound(H.F(), tp.x_minus)) << to_string(H.F().family()) << " " << E;
      EXPECT_LE(std::abs(H.G()(tp.y_plus) - E), bound(H.G(), tp.y_plus));
      EXPECT_GT(tp.x_plus, prev_plus);
      EXPECT_LT(tp.x_minus, prev_minus);
      prev_plus = tp.x_plus;
      prev_minus = tp.x_minus;
    }
  }
}

TEST(AnnulusBound, CriticalUnboundedAndDomainEdge) {
  const auto cubic = annulus_energy_bound(SeparableHamiltonian(cubic_F(), half_square()));
  EXPECT_NEAR(cubic.e_star, 1.0 / 6.0, 1e-15);
  EXPECT_EQ(cubic.boundary, AnnulusBound::Boundary::CriticalPointOfF);

  const auto global = annulus_energy_bound(SeparableHamiltonian(half_square(), quartic_G()));
  EXPECT_FALSE(global.bounded());
  EXPECT_EQ(global.boundary, AnnulusBound::Boundary::Unbounded);

  const auto pend = annulus_energy_bound(SeparableHamiltonian(SmoothFunction::trig_cos(), SmoothFunction::trig_cos()));
  EXPECT_NEAR(pend.e_star, 2.0, 1e-12);
  EXPECT_EQ(pend.boundary, AnnulusBound::Boundary::CriticalPointOfF);

  const auto g_side = annulus_energy_bound(SeparableHamiltonian(half_square(), SmoothFunction::trig_cos()));
  EXPECT_NEAR(g_side.e_star, 2.0, 1e-12);
  EXPECT_EQ(g_side.boundary, AnnulusBound::Boundary::CriticalPointOfG);

  // u0 = 1, k = 1: V(u) = -ln u - ln(2 - u) + const blows up at both ends.
  const auto wall = annulus_energy_bound(SeparableHamiltonian(SmoothFunction::log_potential(1.0, 1.0, 1.0, 1.0), half_square()));
  EXPECT_EQ(wall.boundary, AnnulusBound::Boundary::DomainEdge);
  EXPECT_FALSE(wall.bounded());
}

TEST(ConjugatePoint, Anchors) {
  EXPECT_NEAR(conjugate_point(cubic_F(), -1.0), 0.5, 1e-12);
  EXPECT_NEAR(conjugate_point(half_square(), 3.0), -3.0, 1e-12);
  const auto F = SmoothFunction::polynomial({0.0, 0.0, 0.5, 1.0, 0.75});
  EXPECT_NEAR(conjugate_point(F, -1.0 / 3.0), 0.1958, 1e-3);
}

TEST(ConjugatePoint, MissingConjugateThrows) {
  try {
    conjugate_point(cubic_F(), 2.0);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NoConjugate);
  }
}

TEST(ConjugatePoint, InvolutionOnEvenPotentials) {
  oracle::Rng rng(5);
  for (const auto& F : {half_square(), SmoothFunction::cosh(), SmoothFunction::polynomial({0.0, 0.0, 0.5, 0.0, 0.3})}) {
    for (int i = 0; i < 50; ++i) {
      const double x = rng.uniform(-3.0, 3.0);
      EXPECT_NEAR(conjugate_point(F, conjugate_point(F, x)), x, 1e-10 * std::max(1.0, std::abs(x)));
    }
  }
}

TEST(SmoothFunction, AnalyticDerivativesMatchFiniteDifferences) {
  auto sub = std::make_shared<const SmoothFunction>(SmoothFunction::trig_cos(2.0, 0.5));
  auto lin = std::make_shared<const SmoothFunction>(SmoothFunction::polynomial({0.0, 0.0, 1.0, 0.2}));
  const SmoothFunction fns[] = {
      SmoothFunction::polynomial({0.0, 0.0, 0.5, -0.4, 0.25}),
      SmoothFunction::trig_cos(1.5, 0.7),
      SmoothFunction::cosh(0.8, 1.3),
      SmoothFunction::sqrt_relativistic(1.2, 0.9),
      SmoothFunction::log_potential(1.0, 2.0, 1.0, 2.0),
      SmoothFunction::power_law(1.0, 3.0, 1.0, 2.0, 0.9, 1.1),
      SmoothFunction::translated_sum({{1.0, 0.3, sub}, {0.5, -0.2, lin}}),
  };
  oracle::Rng rng(3);
  for (const auto& f : fns) {
    const double lo = std::max(f.domain().lo, -2.0), hi = std::min(f.domain().hi, 2.0);
    for (int i = 0; i < 40; ++i) {
      const double x = lo + (hi - lo) * rng.uniform(0.1, 0.9);
      auto value = [&](double u) { return f(u); };
      for (int order = 1; order <= 3; ++order) {
        const double fd = oracle::extrapolated_difference(value, x, order, 1e-3 * std::max(1.0, std::abs(x)));
        const double an = f.derivative(x, order);
        EXPECT_LE(std::abs(fd - an), (order == 3 ? 1e-5 : 1e-6) * std::max(1.0, std::abs(an)))
            << to_string(f.family()) << " order " << order << " at " << x;
      }
    }
  }
}

TEST(SmoothFunction, RestrictedDomainRejectsOutsidePoints) {
  const auto f = SmoothFunction::log_potential(1.0, 1.0, 1.0, 1.0);
  EXPECT_THROW(f(1.5), Error);
  EXPECT_THROW(f(-1.0), Error);
  EXPECT_NO_THROW(f(0.99));
}
