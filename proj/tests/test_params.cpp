#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"
#include "thetagw/errors.hpp"
#include "thetagw/params.hpp"
#include "thetagw/params_json.hpp"
#include "thetagw/pgf.hpp"

namespace thetagw {
namespace {

using testing::make;

TEST(Classify, SubcriticalCase1) {
  const ThetaParams p = make(1.0, 2.0, 1.0, std::nullopt);
  EXPECT_EQ(p.case_id(), CaseId::Case1);
  EXPECT_EQ(p.q(), 1.0);
  ASSERT_TRUE(p.d().has_value());
  EXPECT_DOUBLE_EQ(*p.d(), 1.0);
  EXPECT_EQ(p.tag().criticality, Criticality::Subcritical);
}

TEST(Classify, PureDeath) {
  const ThetaParams p = make(-1.0, 0.5, std::nullopt, 1.0);
  EXPECT_EQ(p.case_id(), CaseId::Case6);
  EXPECT_EQ(p.tag().criticality, Criticality::PureDeath);
  EXPECT_TRUE(p.regular());
}

TEST(Classify, Case7FillsC) {
  const ThetaParams p = make(0.5, 0.5, std::nullopt, 1.0, 2.0);
  EXPECT_EQ(p.case_id(), CaseId::Case7);
  EXPECT_EQ(p.tag().criticality, Criticality::Subcritical);
  EXPECT_NEAR(p.c(), 0.5, 1e-15);
  EXPECT_FALSE(p.d().has_value());
}

TEST(Classify, EveryDeskSetLandsInItsCase) {
  const auto sets = desk_parameter_sets();
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const ThetaParams p = validate_classify(sets[i].raw);
    EXPECT_EQ(case_number(p.case_id()), static_cast<int>(i) + 1) << sets[i].label;
    EXPECT_EQ(case_name(p.case_id()), sets[i].label);
    EXPECT_EQ(case_from_name(sets[i].label), p.case_id());
  }
}

TEST(Classify, CFromQMatchesQFromC) {
  const ThetaParams from_q = make(0.5, 0.5, std::nullopt, 0.3);
  const ThetaParams from_c = make(0.5, 0.5, from_q.c(), std::nullopt);
  EXPECT_NEAR(from_c.q(), 0.3, 1e-12);
  // (1 - q)^(-theta) (1 - a)
  EXPECT_NEAR(from_q.c(), 0.5 / std::sqrt(0.7), 1e-15);
}

TEST(Classify, Rejections) {
  EXPECT_THROW(make(1.5, 0.5, std::nullopt, 0.5), DomainError);
  EXPECT_THROW(make(0.5, -1.0, std::nullopt, 0.5), DomainError);
  EXPECT_THROW(make(0.5, 0.5, std::nullopt, 0.5, 0.9), DomainError);
  EXPECT_THROW(make(0.5, 0.5, std::nullopt, 1.2), DomainError);
  EXPECT_THROW((void)validate_classify(RawParams{0.5, 0.5, std::nullopt, std::nullopt, 1.0}), DomainError);
  EXPECT_THROW(make(-0.5, 2.0, 1.0, std::nullopt), UnclassifiableError);
  EXPECT_THROW(make(0.5, 2.0, 1.0, std::nullopt, 2.0), UnclassifiableError);
  EXPECT_THROW(make(0.5, 1.0, 0.0, std::nullopt), InconsistentParams);
  EXPECT_THROW(make(0.5, 2.0, 1.0, 0.5), InconsistentParams);
  EXPECT_THROW(make(-1.0, 0.5, std::nullopt, 0.5, 2.0), UnclassifiableError);
  EXPECT_THROW(make(0.5, 0.5, 1.0, 0.5), InconsistentParams);
  EXPECT_THROW(make(0.0, 0.5, 0.5, std::nullopt), DomainError);
  // Not admitted: a < 1, A = 1, q = 1 away from theta = -1.
  EXPECT_THROW(make(0.5, 0.5, std::nullopt, 1.0), UnclassifiableError);
}

TEST(Classify, TinyThetaIsFlagged) {
  EXPECT_TRUE(make(1e-10, 0.5, std::nullopt, 0.3).ill_conditioned());
  EXPECT_FALSE(make(0.5, 0.5, std::nullopt, 0.3).ill_conditioned());
}

TEST(Summary, Case1) {
  const ScalarSummary s = scalar_summary(make(1.0, 2.0, 1.0, std::nullopt));
  EXPECT_DOUBLE_EQ(s.mean_m.value(), 0.5);
  EXPECT_DOUBLE_EQ(s.f2_at_1.value(), 0.5);
  EXPECT_DOUBLE_EQ(s.gamma, 0.5);
  EXPECT_EQ(s.p_inf, 0.0);
}

TEST(Summary, Case6) {
  const ScalarSummary s = scalar_summary(make(-1.0, 0.5, std::nullopt, 0.3));
  EXPECT_NEAR(s.p_inf, 0.35, 1e-15);
  EXPECT_NEAR(s.f_at_1, 0.65, 1e-15);
  EXPECT_DOUBLE_EQ(s.mean_m.value(), 0.5);
  EXPECT_DOUBLE_EQ(s.f2_at_1.value(), 0.0);
}

TEST(Summary, Case3) {
  const ScalarSummary s = scalar_summary(make(1.0, 0.5, std::nullopt, 0.5));
  EXPECT_DOUBLE_EQ(s.gamma, 0.5);
  EXPECT_DOUBLE_EQ(s.mean_m.value(), 2.0);
}

TEST(Summary, InfiniteMeans) {
  EXPECT_TRUE(scalar_summary(make(0.0, 0.5, std::nullopt, 0.25)).mean_m.is_infinite());
  EXPECT_TRUE(scalar_summary(make(-0.5, 0.5, std::nullopt, 0.2)).mean_m.is_infinite());
}

// Derivatives against central differences of the pgf itself.
TEST(Summary, MomentsMatchFiniteDifferences) {
  testing::ParamSampler ps(11);
  for (CaseId id : {CaseId::Case1, CaseId::Case2, CaseId::Case3, CaseId::Case6, CaseId::Case7,
                    CaseId::Case8, CaseId::Case9}) {
    for (int rep = 0; rep < 20; ++rep) {
      const ThetaParams p = ps.draw(id);
      const ScalarSummary s = scalar_summary(p);
      const double h = 1e-5;
      const double q = p.q();
      if (q > 2 * h && q < 1.0 - 2 * h) {
        const double fd = (eval_f(p, q + h) - eval_f(p, q - h)) / (2 * h);
        EXPECT_NEAR(s.gamma, fd, 1e-6 * std::max(1.0, std::abs(fd))) << case_name(id);
      }
      EXPECT_NEAR(s.f_at_1, eval_f(p, 1.0), 1e-14);
      if (s.mean_m.is_finite() && p.big_a() > 1.0 + 1e-3) {
        const double fd = (eval_f(p, 1.0 + h) - eval_f(p, 1.0 - h)) / (2 * h);
        EXPECT_NEAR(s.mean_m.value(), fd, 1e-6 * std::max(1.0, fd)) << case_name(id);
      }
    }
  }
}

TEST(Summary, SecondMomentOutsideUnitScale) {
  testing::ParamSampler ps(13);
  for (CaseId id : {CaseId::Case7, CaseId::Case8, CaseId::Case9}) {
    for (int rep = 0; rep < 20; ++rep) {
      const ThetaParams p = ps.draw(id);
      const ScalarSummary s = scalar_summary(p);
      const double h = 1e-4;
      const double fd = (eval_f(p, 1.0 + h) - 2 * eval_f(p, 1.0) + eval_f(p, 1.0 - h)) / (h * h);
      ASSERT_TRUE(s.f2_at_1.is_finite());
      EXPECT_NEAR(s.f2_at_1.value(), fd, 1e-5 * std::max(1.0, fd)) << case_name(id);
    }
  }
}

TEST(Summary, GammaIsAExceptCase1) {
  testing::ParamSampler ps(12);
  for (CaseId id : testing::kAllCases) {
    const ThetaParams p = ps.draw(id);
    const double g = scalar_summary(p).gamma;
    if (id == CaseId::Case1) {
      EXPECT_NEAR(g, std::pow(p.a(), -1.0 / p.theta()), 1e-14);
    } else {
      EXPECT_DOUBLE_EQ(g, p.a());
    }
  }
}

TEST(FixedPoint, QSolvesFOverRandomDraws) {
  testing::ParamSampler ps(1234);
  for (int i = 0; i < 1000; ++i) {
    const CaseId id = testing::kAllCases[i % 9];
    const ThetaParams p = ps.draw(id);
    EXPECT_NEAR(eval_f(p, p.q()), p.q(), 1e-12) << case_name(id);
    // q is the smallest root: f(s) > s strictly below q.
    if (p.q() > 1e-3) {
      const double s = 0.5 * p.q();
      EXPECT_GT(eval_f(p, s), s) << case_name(id);
    }
  }
}

TEST(Dual, MapsOuterCasesOntoInner) {
  const ThetaParams d7 = dual_transform(make(0.5, 0.5, std::nullopt, 1.0, 2.0));
  EXPECT_EQ(d7.case_id(), CaseId::Case3);
  EXPECT_NEAR(d7.q(), 0.5, 1e-15);
  EXPECT_EQ(d7.theta(), 0.5);

  const ThetaParams d8 = dual_transform(make(0.0, 0.5, std::nullopt, 0.0, 2.0));
  EXPECT_EQ(d8.case_id(), CaseId::Case4);
  EXPECT_EQ(d8.q(), 0.0);

  const ThetaParams d9 = dual_transform(make(-0.5, 0.5, std::nullopt, 1.0, 2.0));
  EXPECT_EQ(d9.case_id(), CaseId::Case5);
  EXPECT_NEAR(d9.q(), 0.5, 1e-15);

  EXPECT_THROW((void)dual_transform(make(0.5, 0.5, std::nullopt, 0.3)), DomainError);
}

TEST(Dual, RoundTripAndScaling) {
  testing::ParamSampler ps(5);
  for (CaseId id : {CaseId::Case7, CaseId::Case8, CaseId::Case9}) {
    for (int rep = 0; rep < 30; ++rep) {
      const ThetaParams p = ps.draw(id);
      const ThetaParams d = dual_transform(p);
      const ThetaParams back = undual_transform(d, p.big_a());
      EXPECT_EQ(back.case_id(), p.case_id());
      EXPECT_NEAR(back.q(), p.q(), 1e-12);
      EXPECT_NEAR(back.c(), p.c(), 1e-12 * std::max(1.0, p.c()));
      const double A = p.big_a();
      for (double s : {0.0, 0.2, 0.4}) {
        EXPECT_NEAR(eval_f(d, s), eval_f(p, s * A) / A, 1e-13);
      }
    }
  }
}

TEST(LinearFractional, Examples) {
  const ThetaParams crit = from_linear_fractional(1.0 / 3.0, 2.0 / 3.0);
  EXPECT_EQ(crit.case_id(), CaseId::Case2);
  EXPECT_EQ(crit.a(), 1.0);
  EXPECT_NEAR(crit.c(), 0.5, 1e-15);

  const ThetaParams sub = from_linear_fractional(0.5, 0.75);
  EXPECT_EQ(sub.case_id(), CaseId::Case1);
  EXPECT_NEAR(sub.a(), 1.5, 1e-15);
  EXPECT_NEAR(sub.c(), 0.5, 1e-15);
  EXPECT_NEAR(*sub.d(), 1.0, 1e-14);

  EXPECT_THROW((void)from_linear_fractional(0.0, 1.0), InconsistentParams);
  EXPECT_THROW((void)from_linear_fractional(1.0 / 3.0, 1.0), InconsistentParams);
  EXPECT_THROW((void)from_linear_fractional(1.0, 0.5), DomainError);
}

TEST(LinearFractional, PgfMatchesGeometricSum) {
  const double p0 = 0.2;
  const double pp = 0.4;
  const ThetaParams p = from_linear_fractional(p0, pp);
  for (double s : {0.0, 0.3, 0.9}) {
    // p0 + (1 - p0) p s / (1 - (1 - p) s)
    const double expect = p0 + (1 - p0) * pp * s / (1 - (1 - pp) * s);
    EXPECT_NEAR(eval_f(p, s), expect, 1e-15);
  }
}

TEST(Json, RoundTrip) {
  for (const ThetaParams& p : testing::desk_params()) {
    const std::string text = params_to_json(p).dump();
    const ThetaParams back = params_from_json_string(text);
    EXPECT_EQ(back.case_id(), p.case_id());
    EXPECT_EQ(back.theta(), p.theta());
    EXPECT_EQ(back.a(), p.a());
    EXPECT_NEAR(back.q(), p.q(), 1e-15);
    EXPECT_NEAR(back.c(), p.c(), 1e-15 * std::max(1.0, p.c()));
  }
}

TEST(Json, MalformedInput) {
  EXPECT_THROW((void)params_from_json_string("{\"theta\": 1"), DomainError);
  EXPECT_THROW((void)params_from_json_string("{\"a\": 1, \"c\": 1}"), DomainError);
  EXPECT_THROW((void)params_from_json_string("{\"theta\": \"x\", \"a\": 1, \"c\": 1}"), DomainError);
}

}  // namespace
}  // namespace thetagw
