#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "oracles.hpp"
#include "periodfn/criterion.hpp"
#include "periodfn/period.hpp"
#include "periodfn/polyfamily.hpp"

using namespace periodfn;

TEST(Normalize, RatioFormulas) {
  const auto id = normalize({1, 0, 0, 1, 0});
  EXPECT_EQ(id.a, 0.0);
  EXPECT_EQ(id.b, 0.0);
  EXPECT_EQ(id.c, 0.0);
  for (double k : {0.5, 2.0, 7.0}) {
    const auto f = normalize({k, k, 0, 1, 1});
    EXPECT_DOUBLE_EQ(f.a, 1.0);
    EXPECT_DOUBLE_EQ(f.b, 0.0);
    EXPECT_DOUBLE_EQ(f.c, k);
  }
  const auto d = normalize({2, 4, 6, 1, 0.5});
  EXPECT_DOUBLE_EQ(d.a, 2.0);
  EXPECT_DOUBLE_EQ(d.b, 3.0);
  EXPECT_DOUBLE_EQ(d.c, 1.0);
}

TEST(Normalize, RejectsNonPositiveLinearPart) {
  for (NormalizationInput n : {NormalizationInput{0, 1, 1, 1, 1}, NormalizationInput{1, 1, 1, -2, 1}}) {
    try {
      normalize(n);
      ADD_FAILURE();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::NonPositiveLinearPart);
    }
  }
}

TEST(Normalize, RawPeriodsScaleWithTimeChange) {
  const NormalizationInput raws[] = {{2.0, 1.0, 0.5, 3.0, 0.7}, {0.5, -0.3, 0.0, 1.5, 0.0}, {4.0, 0.0, 1.0, 0.25, 2.0}};
  for (const auto& n : raws) {
    const auto Hn = family_hamiltonian(normalize(n));
    const auto Hr = raw_hamiltonian(n);
    for (double E_raw : {1e-3 * n.a1, 2e-2 * n.a1}) {
      const double t_raw = return_time_oracle(Hr, E_raw).period;
      const double t_norm = return_time_oracle(Hn, E_raw / n.a1).period;
      EXPECT_LE(oracle::relative(t_raw, t_norm / std::sqrt(n.a1 * n.b1)), 1e-5);
    }
  }
}

TEST(Abpq, PrintedSpecialCases) {
  const auto c = abpq({1, 0, 0});
  for (double x : {-0.7, 0.0, 0.4, 2.0}) {
    EXPECT_DOUBLE_EQ(c.A(x), 10 + 4 * x);
    EXPECT_NEAR(c.B(x), (6 + 4 * x) * (1 + x) * (1 + x) * (1 + 2 * x), 1e-12 * c.B.magnitude(x));
  }
  const auto e = abpq({0, 1, 0});
  for (double x : {-1.0, 0.3, 1.5}) EXPECT_NEAR(e.A(x), 9 * (std::pow(x, 4) + 4 * x * x - 1), 1e-12);
  EXPECT_NEAR(abpq({3, 3, 0}).A(-1.0 / 3.0), 0.0, 1e-12);
}

TEST(Abpq, ValuesAtZero) {
  oracle::Rng rng(2);
  for (int i = 0; i < 20; ++i) {
    const FamilyParams p{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(0, 4)};
    const auto q = abpq(p);
    EXPECT_NEAR(q.A(0.0), 10 * p.a * p.a - 9 * p.b, 1e-12);
    EXPECT_EQ(q.B(0.0), 6.0);
    EXPECT_EQ(q.P(0.0), 2.0);
    EXPECT_DOUBLE_EQ(q.Q(0.0), 3 * p.c);
  }
}

TEST(Abpq, CaseBReducesToMinusSixQ) {
  for (double c : {0.5, 1.0, 3.0}) {
    const auto q = abpq({0, 0, c});
    EXPECT_TRUE(q.A.is_zero());
    for (double x : {-2.0, 0.0, 1.0}) EXPECT_EQ(q.B(x), 6.0);
    for (double y : {0.0, 0.5, 3.0}) {
      const double np = q.A(0.3) * q.P(y) - q.B(0.3) * q.Q(y);
      EXPECT_DOUBLE_EQ(np, -6.0 * q.Q(y));
      EXPECT_LT(np, 0.0);
    }
  }
}

TEST(Abpq, FactoredFormMatchesCriterion) {
  oracle::Rng rng(31);
  for (int draw = 0; draw < 10; ++draw) {
    const FamilyParams p{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(0, 4)};
    const auto q = abpq(p);
    const auto H = family_hamiltonian(p);
    for (int i = 0; i < 1000; ++i) {
      const double x = rng.uniform(-1, 1), y = rng.uniform(-1, 1);
      const auto cv = criterion_M(H, x, y);
      EXPECT_LE(std::abs(family_M(q, x, y) - cv.M), 1e-10 * std::abs(cv.M) + 1e-13 * cv.scale);
    }
  }
}

TEST(Geometry, BoundaryRootAndConjugate) {
  const auto g = geometry({1, 0, 0});
  ASSERT_TRUE(g.x0 && g.r0);
  EXPECT_DOUBLE_EQ(*g.x0, -1.0);
  EXPECT_NEAR(*g.r0, 0.5, 1e-12);
  EXPECT_NEAR(g.e0, 1.0 / 6.0, 1e-15);

  // p = 1 - x^2 has roots at -1 and 1 with equal F; the tie goes to the negative one.
  const auto d = geometry({0, -1, 0});
  ASSERT_TRUE(d.x0);
  EXPECT_DOUBLE_EQ(*d.x0, -1.0);
  EXPECT_NEAR(*d.r0, 1.0, 1e-9);

  const auto glob = geometry({2, 2, 0});
  EXPECT_LT(glob.delta, 0.0);
  EXPECT_FALSE(glob.x0.has_value());
  EXPECT_FALSE(std::isfinite(glob.e0));

  oracle::Rng rng(9);
  for (int i = 0; i < 100; ++i) {
    const FamilyParams p{rng.uniform(-3, 3), rng.uniform(-3, 0.5), 0.0};
    const auto gg = geometry(p);
    if (!gg.x0) continue;
    EXPECT_NEAR(1 + p.a * *gg.x0 + p.b * *gg.x0 * *gg.x0, 0.0, 1e-12);
    EXPECT_LT(*gg.x0 * *gg.r0, 0.0);
    const auto F = family_F(p);
    EXPECT_NEAR(F(*gg.r0), F(*gg.x0), 1e-12 * std::max(1.0, gg.e0));
  }
}

TEST(Thresholds, CubicPotential) {
  const FamilyParams p{1, 0, 0};
  const auto t = thresholds(p, geometry(p));
  EXPECT_LE(oracle::relative(*t.c0, 2.0 / 9.0), 1e-14);
  EXPECT_LE(oracle::relative(*t.c1, 10.0 / 9.0), 1e-14);
  EXPECT_TRUE(t.r_at_boundary);
}

TEST(Thresholds, QuarticCaseGi) {
  const FamilyParams p{3, 3, 1};
  const auto t = thresholds(p, geometry(p));
  EXPECT_NEAR(*t.c0, 1.798, 1e-3);
  EXPECT_DOUBLE_EQ(*t.c1, 7.0);
  EXPECT_NEAR(*t.r, 0.1958, 1e-3);
  EXPECT_TRUE(t.sign_condition_ok);
}

TEST(Thresholds, SymmetricWellHasEqualThresholds) {
  const FamilyParams p{0, -1, 0};
  const auto t = thresholds(p, geometry(p));
  EXPECT_NEAR(*t.c0, *t.c1, 1e-12);
}

TEST(Thresholds, WrongCaseThrows) {
  const FamilyParams p{0, 0, 1};
  try {
    thresholds(p, geometry(p));
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CaseMismatch);
  }
}

TEST(SigmaRoot, RemarkNumbers) {
  const auto g = geometry({1, 0, 0});
  const auto k1 = sigma_root({1, 0, 1}, g.lo, g.hi);
  EXPECT_NEAR(k1.x_c, 0.025147, 1e-4);
  EXPECT_NEAR(k1.energy, 0.000321, 1e-5);
  const auto k2 = sigma_root({1, 0, 2}, g.lo, g.hi);
  EXPECT_NEAR(k2.x_c, -0.12449, 1e-4);
  EXPECT_NEAR(k2.energy, 0.007106, 1e-5);
  const auto k0 = sigma_root({1, 0, 2.0 / 9.0}, g.lo, g.hi);
  EXPECT_NEAR(k0.x_c, 0.5, 1e-9);
}

TEST(SigmaRoot, NoRootThrows) {
  try {
    sigma_root({1, 0, 0.1}, -0.5, 0.4);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NoRootInAnnulus);
  }
}

TEST(FExtremum, CubicMinimumSitsAtConjugatePoint) {
  const auto m = f_extremum({1, 0, 0}, -1.0, 0.5, ExtremumKind::Min);
  EXPECT_NEAR(m.x, 0.5, 1e-9);
  EXPECT_TRUE(m.at_boundary);
}

TEST(FExtremum, InteriorMaxima) {
  const auto g = f_extremum({2, 2, 0}, -kInf, kInf, ExtremumKind::Max);
  EXPECT_NEAR(g.x, -0.0748706245, 1e-6);
  EXPECT_FALSE(g.at_boundary);
  const double x0 = std::sqrt((std::sqrt(5.0) - 2.0) / 2.0);
  const auto e = f_extremum({0, 2, 0}, x0, kInf, ExtremumKind::Max);
  EXPECT_GT(e.x, x0);
  EXPECT_GT(e.value, 0.0);
  EXPECT_FALSE(e.at_boundary);
  const auto q = abpq({0, 2, 0});
  for (double x : {e.x * 0.9, e.x * 1.1, e.x * 3}) EXPECT_LE(q.A(x) / q.B(x), e.value);
}

TEST(Tangency, CaseGAnchors) {
  const auto t = tangency_c0({2, 2, 0});
  EXPECT_NEAR(t.c0, 2.8004647, 1e-5);
  EXPECT_NEAR(t.e0, 0.0025387196, 1e-8);
  EXPECT_NEAR(t.x_m, -0.0748706245, 1e-6);
}

TEST(Tangency, ThresholdCertifiesAboveAndFailsWellBelow) {
  for (FamilyParams base : {FamilyParams{0, 2, 0}, FamilyParams{2, 2, 0}}) {
    const auto t = tangency_c0(base);
    EXPECT_GT(t.c0, 0.0);
    CertificateOptions opt;
    opt.resolution = 256;
    const auto above = sign_certificate(family_hamiltonian({base.a, base.b, t.c0 * 1.01}), t.e0, opt);
    EXPECT_EQ(above.verdict, Verdict::NonPositive);
    const auto far = sign_certificate(family_hamiltonian({base.a, base.b, t.c0 * 0.5}), t.e0, opt);
    EXPECT_NE(far.verdict, Verdict::NonPositive);
  }
  // The bound is sharp when the tangency point sits on the level set F(x_m).
  const auto t = tangency_c0({2, 2, 0});
  CertificateOptions opt;
  opt.resolution = 256;
  EXPECT_EQ(sign_certificate(family_hamiltonian({2, 2, t.c0 * 0.95}), t.e0, opt).verdict, Verdict::Mixed);
}

TEST(Classify, TheoremAnchors) {
  const auto a = classify({0, 0, 0});
  EXPECT_EQ(a.case_label, "A");
  EXPECT_EQ(a.verdict, FamilyVerdict::Constant);

  const auto c = classify({1, 0, 2.0 / 9.0});
  EXPECT_EQ(c.case_label, "C");
  EXPECT_EQ(c.verdict, FamilyVerdict::Increasing);
  EXPECT_NEAR(c.e0, 1.0 / 6.0, 1e-15);

  const auto g = classify({2, 2, 3});
  EXPECT_EQ(g.case_label, "G.ii");
  EXPECT_EQ(g.verdict, FamilyVerdict::Decreasing);
  EXPECT_NEAR(g.e0, 0.0025387196, 1e-8);
  EXPECT_NEAR(*g.c0, 2.8004647, 1e-5);
}

TEST(Classify, BoundaryAndExcludedParameters) {
  const auto f = classify({1, 10.0 / 9.0, 0});
  EXPECT_EQ(f.case_label, "F.critical");
  EXPECT_EQ(f.verdict, FamilyVerdict::IndeterminateNearOrigin);
  EXPECT_EQ(classify({1, 0, 10.0 / 9.0}).verdict, FamilyVerdict::IndeterminateNearOrigin);
  const auto neg = classify({1, 0, -1});
  EXPECT_EQ(neg.verdict, FamilyVerdict::OutsideTheorem);
  EXPECT_EQ(neg.case_label, "unclassified");
}

TEST(Classify, QuarticWellRootComesFromA) {
  for (double b : {1.0, 2.0, 5.0}) {
    const auto r = classify({0, b, 0});
    EXPECT_EQ(r.case_label, "E.i");
    const double x0 = std::sqrt((std::sqrt(5.0) - 2.0) / b);
    EXPECT_NEAR(*r.x1, x0, 1e-12);
    EXPECT_NEAR(r.e0, x0 * x0 / 2 + b * std::pow(x0, 4) / 4, 1e-12);
  }
}

TEST(Classify, RemarkRegimes) {
  const auto mid = classify({1, 0, 1});
  EXPECT_EQ(mid.verdict, FamilyVerdict::OutsideTheorem);
  ASSERT_TRUE(mid.remark.has_value());
  EXPECT_EQ(mid.remark->verdict, FamilyVerdict::Increasing);
  EXPECT_NEAR(mid.remark->e_hi, 0.000321, 1e-5);
  const auto high = classify({1, 0, 2});
  ASSERT_TRUE(high.remark.has_value());
  EXPECT_EQ(high.remark->verdict, FamilyVerdict::Decreasing);
  EXPECT_NEAR(high.remark->e_hi, 0.007106, 1e-5);
}

TEST(Classify, JustAboveThresholdTheCertificateIsMixed) {
  CertificateOptions opt;
  opt.resolution = 256;
  const double c0 = 2.0 / 9.0;
  EXPECT_EQ(classify({1, 0, c0 * (1 - 1e-3)}).verdict, FamilyVerdict::Increasing);
  EXPECT_EQ(sign_certificate(family_hamiltonian({1, 0, c0 * (1 - 1e-3)}), 1.0 / 6.0, opt).verdict,
            Verdict::NonNegative);
  EXPECT_EQ(sign_certificate(family_hamiltonian({1, 0, c0 * 1.05}), 1.0 / 6.0, opt).verdict, Verdict::Mixed);
}

TEST(Classify, VerdictsMatchPeriodDerivative) {
  struct Witness {
    FamilyParams p;
    std::string label;
  };
  const Witness cases[] = {
      {{0, 0, 1}, "B"},       {{1, 0, 0.1}, "C"},   {{1, 0, 2.0 / 9.0}, "C"}, {{1, -1, 0.1}, "D"},
      {{0, 2, 0}, "E.i"},     {{0, 2, 5}, "E.ii"},  {{1, 0.5, 0}, "F.i"},     {{1, 2, 0}, "F.ii"},
      {{3, 3, 1}, "G.i"},     {{2, 2, 3}, "G.ii"},
  };
  for (const auto& w : cases) {
    const auto r = classify(w.p);
    ASSERT_EQ(r.case_label, w.label) << w.p.a << "," << w.p.b << "," << w.p.c << " " << r.note;
    ASSERT_TRUE(r.monotone());
    const int want = r.verdict == FamilyVerdict::Increasing ? 1 : -1;
    const double top = std::isfinite(r.e0) ? r.e0 : 1.0;
    const auto H = family_hamiltonian(w.p);
    int checked = 0;
    for (int i = 0; i < 10; ++i) {
      const double E = top * std::pow(10.0, -3.0 + 3.0 * (i + 0.5) / 10.0);
      const int s = derivative_sign(period_derivative(H, E));
      if (s == 0) continue;
      ++checked;
      EXPECT_EQ(s, want) << w.label << " E = " << E;
    }
    EXPECT_GE(checked, 5) << w.label;
  }
}

TEST(Classify, RandomSweepNeverThrows) {
  oracle::Rng rng(99);
  for (int i = 0; i < 300; ++i) {
    const FamilyParams p{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-0.5, 4)};
    FamilyClassification r;
    ASSERT_NO_THROW(r = classify(p)) << p.a << "," << p.b << "," << p.c;
    if (r.monotone()) {
      EXPECT_GT(r.e0, 0.0);
    }
    if (r.case_label == "C" || r.case_label == "D" || r.case_label == "G.i") {
      EXPECT_TRUE(r.c0 && r.c1);
    }
  }
}
