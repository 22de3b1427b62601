#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "support.hpp"
#include "thetagw/absorption.hpp"
#include "thetagw/errors.hpp"
#include "thetagw/pgf.hpp"

namespace thetagw {
namespace {

using testing::make;

TEST(Tails, Examples) {
  EXPECT_NEAR(AbsorptionTails(make(1.0, 1.0, 1.0, std::nullopt)).t0_tail(3), 0.25, 1e-15);
  EXPECT_NEAR(AbsorptionTails(make(1.0, 0.5, std::nullopt, 0.5)).t0_tail(1), 1.0 / 6.0, 1e-15);
  const AbsorptionTails de(make(-1.0, 0.5, std::nullopt, 0.3));
  EXPECT_NEAR(de.t_tail(2), 0.25, 1e-15);
  EXPECT_NEAR(de.t0_tail(2), 0.075, 1e-15);
  EXPECT_NEAR(de.t1_tail(2), 0.175, 1e-15);
}

TEST(Tails, MatchIteratesEverywhere) {
  testing::ParamSampler ps(31);
  for (CaseId id : testing::kAllCases) {
    for (int rep = 0; rep < 10; ++rep) {
      const ThetaParams p = ps.draw(id);
      const AbsorptionTails t(p);
      // Independent of the tail formulas: literal composition.
      const double lim1 = p.regular() ? 1.0 : p.q();
      for (int n = 0; n <= 50; ++n) {
        const double x0 = p.q() - compose_iterate(p, n, 0.0);
        const double x1 = compose_iterate(p, n, 1.0) - lim1;
        ASSERT_NEAR(t.t0_tail(n), x0, 1e-10) << case_name(id) << " n=" << n;
        ASSERT_NEAR(t.t1_tail(n), x1, 1e-10) << case_name(id) << " n=" << n;
        ASSERT_NEAR(t.t_tail(n), x0 + x1, 1e-10) << case_name(id) << " n=" << n;
      }
    }
  }
}

TEST(Tails, SurvivalIsMonotone) {
  for (const ThetaParams& p : testing::desk_params()) {
    const AbsorptionTails t(p);
    EXPECT_NEAR(t.survival_t(0), 1.0, 1e-15);
    for (int n = 0; n < 100; ++n) {
      EXPECT_LE(t.survival_t0(n + 1), t.survival_t0(n) + 1e-15);
      EXPECT_LE(t.survival_t(n + 1), t.survival_t(n) + 1e-15);
    }
  }
}

TEST(Tails, CriticalClosedFormAllThetas) {
  for (double theta : {0.2, 0.5, 1.0}) {
    const AbsorptionTails t(make(theta, 1.0, 2.0, std::nullopt));
    for (int n = 0; n < 40; ++n) EXPECT_NEAR(t.t0_tail(n), std::pow(1 + 2.0 * n, -1 / theta), 1e-15);
  }
}

TEST(SumTail, Oracles) {
  EXPECT_NEAR(sum_tail([](int n) { return std::pow(0.5, n); }).value(), 2.0, 1e-10);
  EXPECT_TRUE(sum_tail([](int n) { return 1.0 / (n + 1); }).is_infinite());
  EXPECT_TRUE(sum_tail([](int n) { return std::pow(n + 1.0, -0.6); }).is_infinite());
  EXPECT_NEAR(sum_tail([](int n) { return 1.0 / ((n + 1.0) * (n + 1.0)); }).value(),
              std::numbers::pi * std::numbers::pi / 6, 1e-7);
  EXPECT_NEAR(sum_tail([](int) { return 0.0; }).value(), 0.0, 0.0);
}

TEST(Expected, DeathExplosionIsExact) {
  for (double a : {0.25, 0.5, 0.9}) {
    const ExpectedAbsorption e = expected_absorption(make(-1.0, a, std::nullopt, 0.3));
    ASSERT_TRUE(e.t);
    EXPECT_EQ(e.t->value(), 1.0 / (1.0 - a));
  }
  const ExpectedAbsorption pd = expected_absorption(make(-1.0, 0.5, std::nullopt, 1.0));
  EXPECT_FALSE(pd.t1_given_finite.has_value());
  EXPECT_EQ(pd.t0_given_finite->value(), 2.0);
}

TEST(Expected, CriticalDivergesForThetaOne) {
  const ExpectedAbsorption e = expected_absorption(make(1.0, 1.0, 1.0, std::nullopt));
  ASSERT_TRUE(e.t0_given_finite);
  EXPECT_TRUE(e.t0_given_finite->is_infinite());
}

TEST(Expected, CriticalFiniteForSmallTheta) {
  // sum (1 + n)^(-2)
  const ExpectedAbsorption e = expected_absorption(make(0.5, 1.0, 1.0, std::nullopt));
  EXPECT_NEAR(e.t0_given_finite->value(), std::numbers::pi * std::numbers::pi / 6, 1e-7);
}

TEST(Expected, SubcriticalAgainstDirectIteration) {
  const ThetaParams p = make(1.0, 2.0, 1.0, std::nullopt);
  double direct = 0.0;
  double fn = 0.0;
  for (int n = 0; n <= 200; ++n) {
    direct += 1.0 - fn;
    fn = eval_f(p, fn);
  }
  EXPECT_NEAR(expected_absorption(p).t0_given_finite->value(), direct, 1e-8);
}

TEST(Expected, NonRegularAgainstDirectIteration) {
  const ThetaParams p = make(-0.5, 0.5, std::nullopt, 0.2);
  double s0 = 0.0, s1 = 0.0;
  for (int n = 0; n <= 400; ++n) {
    s0 += p.q() - compose_iterate(p, n, 0.0);
    s1 += compose_iterate(p, n, 1.0) - p.q();
  }
  const ExpectedAbsorption e = expected_absorption(p);
  EXPECT_NEAR(e.t0_given_finite->value(), s0 / p.q(), 1e-8);
  EXPECT_NEAR(e.t1_given_finite->value(), s1 / (1 - p.q()), 1e-8);
  EXPECT_NEAR(e.t->value(), s0 + s1, 1e-8);
}

TEST(ConditionalT1, Examples) {
  EXPECT_EQ(conditional_t1_cdf(make(-0.5, 0.5, std::nullopt, 0.0), 0), 0.0);
  EXPECT_NEAR(conditional_t1_cdf(make(-1.0, 0.5, std::nullopt, 0.3), 2), 0.75, 1e-15);
  EXPECT_THROW((void)conditional_t1_cdf(make(1.0, 0.5, std::nullopt, 0.5), 2), DomainError);
}

TEST(Gumbel, LimitScalars) {
  EXPECT_NEAR(gumbel_w(ExtendedReal::finite(std::log(2.0))), 0.5, 1e-15);
  EXPECT_EQ(gumbel_w(ExtendedReal::infinity()), 1.0);
  EXPECT_NEAR(gumbel_mean(0.5, 0.5), (std::log(0.5) - std::numbers::egamma) / std::log(0.5), 1e-15);
  EXPECT_NEAR(gumbel_mean(0.5, 0.5), 1.8327, 1e-4);
}

TEST(Gumbel, ThetaPathLimit) {
  const ThetaParams p = make(-0.01, 0.5, std::nullopt, 0.0);
  const GumbelLimit g = gumbel_limit(p);
  EXPECT_TRUE(g.r.is_infinite());
  EXPECT_NEAR(gumbel_eval(p, 0.0).limit, std::exp(-1.0), 1e-15);
  EXPECT_NEAR(gumbel_eval(p, 60.0).limit, 1.0, 1e-15);
}

TEST(Gumbel, DeviationShrinksAlongThetaPath) {
  double prev = 1.0;
  for (double theta : {-0.1, -0.01, -0.001}) {
    const double d = gumbel_sup_deviation(make(theta, 0.5, std::nullopt, 0.0), -5.0, 5.0);
    EXPECT_LE(d, prev) << theta;
    prev = d;
  }
  EXPECT_LT(prev, 0.02);
}

TEST(Gumbel, DeviationShrinksAlongScalePath) {
  double prev = 1.0;
  for (double eps : {1e-2, 1e-4, 1e-8}) {
    const double d = gumbel_sup_deviation(make(0.0, 0.5, std::nullopt, 0.0, 1.0 + eps), -5.0, 5.0);
    EXPECT_LE(d, prev) << eps;
    prev = d;
  }
}

TEST(Gumbel, ExactSideIsTheConditionalCdf) {
  const ThetaParams p = make(-0.1, 0.5, std::nullopt, 0.0);
  const GumbelPoint pt = gumbel_eval(p, 0.3);
  EXPECT_NEAR(pt.exact_floor, conditional_t1_cdf(p, pt.n_floor), 1e-15);
  EXPECT_NEAR(pt.exact_ceil, conditional_t1_cdf(p, pt.n_ceil), 1e-15);
}

TEST(Gumbel, Regimes) {
  EXPECT_THROW((void)gumbel_limit(make(0.5, 0.5, std::nullopt, 0.3)), DomainError);
  EXPECT_THROW((void)gumbel_limit(make(0.5, 0.5, std::nullopt, 0.3, 1.5)), RegimeError);
  EXPECT_THROW((void)gumbel_limit(make(-0.5, 0.5, std::nullopt, 0.3, 2.5)), RegimeError);
}

}  // namespace
}  // namespace thetagw
