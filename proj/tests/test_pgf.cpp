#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "support.hpp"
#include "thetagw/errors.hpp"
#include "thetagw/pgf.hpp"
#include "thetagw/series.hpp"

namespace thetagw {
namespace {

using testing::make;

TEST(EvalF, Examples) {
  EXPECT_NEAR(eval_f(make(1.0, 2.0, 1.0, std::nullopt), 0.0), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(eval_f(make(1.0, 0.5, std::nullopt, 0.5), 0.5), 0.5, 1e-15);
  EXPECT_NEAR(eval_f(make(-1.0, 0.5, std::nullopt, 0.3), 1.0), 0.65, 1e-15);
}

TEST(EvalF, DomainChecks) {
  const ThetaParams p = make(1.0, 0.5, std::nullopt, 0.5);
  EXPECT_THROW((void)eval_f(p, -0.1), DomainError);
  EXPECT_THROW((void)eval_f(p, 1.1), DomainError);
  const ThetaParams outer = make(0.5, 0.5, std::nullopt, 1.0, 2.0);
  EXPECT_NO_THROW((void)eval_f(outer, 1.9));
  EXPECT_NEAR(eval_f(outer, 2.0), 2.0, 1e-15);
}

TEST(EvalF, ClampNearA) {
  const ThetaParams p = make(0.5, 0.5, std::nullopt, 0.3);
  const PgfValue v = eval_fn_detail(p, 1.0, 1.0 - 1e-16);
  EXPECT_TRUE(v.clamped);
  EXPECT_DOUBLE_EQ(v.value, eval_f(p, 1.0));
  EXPECT_FALSE(eval_fn_detail(p, 1.0, 0.5).clamped);
}

TEST(EvalFn, Examples) {
  const ThetaParams crit = make(1.0, 1.0, 1.0, std::nullopt);
  EXPECT_NEAR(eval_fn(crit, 3, 0.0), 0.75, 1e-15);
  EXPECT_NEAR(compose_iterate(crit, 3, 0.0), 0.75, 1e-12);
  for (const ThetaParams& p : testing::desk_params()) {
    EXPECT_DOUBLE_EQ(eval_fn(p, 0, 0.37), 0.37);
    EXPECT_EQ(compose_iterate(p, 1, 0.37), eval_f(p, 0.37));
  }
  EXPECT_NEAR(eval_fn(make(-1.0, 0.5, std::nullopt, 0.3), 2, 1.0), 0.475, 1e-15);
  EXPECT_EQ(compose_iterate(make(0.0, 0.5, std::nullopt, 0.0), 2, 0.0), 0.0);
}

// Critical case: 1 - f_n(0) = (1 + c n)^(-1/theta).
TEST(EvalFn, CriticalClosedForm) {
  for (double theta : {0.25, 0.5, 1.0}) {
    const ThetaParams p = make(theta, 1.0, 0.7, std::nullopt);
    for (int n = 0; n <= 30; ++n) {
      EXPECT_NEAR(1.0 - eval_fn(p, n, 0.0), std::pow(1.0 + 0.7 * n, -1.0 / theta), 1e-14);
    }
  }
}

TEST(EvalFn, IterateMatchesComposition) {
  testing::ParamSampler ps(77);
  for (CaseId id : testing::kAllCases) {
    for (int rep = 0; rep < 10; ++rep) {
      const ThetaParams p = ps.draw(id);
      double worst = 0.0;
      for (int n = 0; n <= 20; ++n) {
        for (double s : testing::unit_grid(std::min(1.0, p.big_a()), 50)) {
          worst = std::max(worst, std::abs(eval_fn(p, n, s) - compose_iterate(p, n, s)));
        }
      }
      EXPECT_LT(worst, 1e-10) << case_name(id);
    }
  }
}

TEST(EvalFn, RealIndexSemigroup) {
  testing::ParamSampler ps(78);
  for (CaseId id : testing::kAllCases) {
    const ThetaParams p = ps.draw(id);
    for (double s : {0.0, 0.4, 0.8}) {
      for (double t : {0.25, 0.8, 1.7}) {
        for (double u : {0.1, 1.3}) {
          EXPECT_NEAR(eval_fn(p, t + u, s), eval_fn(p, t, eval_fn(p, u, s)), 1e-12) << case_name(id);
        }
      }
    }
  }
}

TEST(EvalFn, IteratesConvergeToQ) {
  for (const ThetaParams& p : testing::desk_params()) {
    if (p.case_id() == CaseId::Case2) continue;
    EXPECT_NEAR(eval_fn(p, 200, 0.0), p.q(), 1e-6) << case_name(p.case_id());
  }
}

TEST(EvalFn, DerivativeMatchesFiniteDifference) {
  for (const ThetaParams& p : testing::desk_params()) {
    for (double t : {1.0, 2.5}) {
      for (double s : {0.2, 0.5, 0.7}) {
        const double h = 1e-6;
        const double fd = (eval_fn(p, t, s + h) - eval_fn(p, t, s - h)) / (2 * h);
        EXPECT_NEAR(eval_fn_derivative(p, t, s), fd, 1e-6 * std::max(1.0, std::abs(fd)))
            << case_name(p.case_id());
      }
    }
  }
}

TEST(EvalFn, CompositionRejectsOutsideDomain) {
  const ThetaParams p = make(1.0, 0.5, std::nullopt, 0.5);
  EXPECT_THROW((void)compose_iterate(p, 2, 1.5), DomainError);
}

TEST(EvalFn, ExprAgreesWithEvaluator) {
  for (const ThetaParams& p : testing::desk_params()) {
    const Expr e = fn_expr(p, 2.0, Expr::var());
    for (double s : {0.0, 0.3, 0.6}) EXPECT_NEAR(e.eval(s), eval_fn(p, 2.0, s), 1e-14);
  }
}

TEST(Series, Examples) {
  const Expr s = Expr::var();
  const auto sqrt_law = series_coeffs(1.0 - pow(1.0 - s, 0.5), 2).coeffs;
  ASSERT_EQ(sqrt_law.size(), 3u);
  EXPECT_NEAR(sqrt_law[0], 0.0, 1e-16);
  EXPECT_NEAR(sqrt_law[1], 0.5, 1e-16);
  EXPECT_NEAR(sqrt_law[2], 0.125, 1e-16);

  const auto ident = series_coeffs(s, 3).coeffs;
  EXPECT_EQ(ident, (std::vector<double>{0, 1, 0, 0}));

  const auto geo = series_coeffs(pow(1.0 - 0.5 * s, -1.0) - 1.0, 3).coeffs;
  EXPECT_NEAR(geo[0], 0.0, 1e-16);
  EXPECT_NEAR(geo[1], 0.5, 1e-16);
  EXPECT_NEAR(geo[2], 0.25, 1e-16);
  EXPECT_NEAR(geo[3], 0.125, 1e-16);
}

// Generalized binomial coefficients C(alpha, k) (-1)^k by the product formula.
TEST(Series, PowerAgainstBinomial) {
  const Expr s = Expr::var();
  for (double alpha : {-2.5, -0.3, 0.7, 3.0}) {
    const auto c = series_coeffs(pow(1.0 - 0.6 * s, alpha), 30).coeffs;
    double term = 1.0;
    for (int k = 0; k <= 30; ++k) {
      EXPECT_NEAR(c[k], term, 1e-13 * std::max(1.0, std::abs(term))) << alpha << " " << k;
      term *= (alpha - k) / (k + 1) * -0.6;
    }
  }
}

TEST(Series, LogAndExp) {
  const Expr s = Expr::var();
  const auto l = series_coeffs(log(1.0 - s), 10).coeffs;
  for (int k = 1; k <= 10; ++k) EXPECT_NEAR(l[k], -1.0 / k, 1e-15);
  const auto e = series_coeffs(exp(2.0 * s), 10).coeffs;
  double fact = 1.0;
  for (int k = 0; k <= 10; ++k) {
    if (k > 0) fact *= k;
    EXPECT_NEAR(e[k], std::pow(2.0, k) / fact, 1e-14);
  }
}

TEST(Series, UnsupportedForms) {
  const Expr s = Expr::var();
  EXPECT_THROW((void)series_coeffs(pow(s, 0.5), 3), UnsupportedForm);
  EXPECT_THROW((void)series_coeffs(log(s), 3), UnsupportedForm);
  EXPECT_NO_THROW((void)series_coeffs(pow(s, 2.0), 3));
}

TEST(Series, CompensatedSum) {
  std::vector<double> xs{1e16, 1.0, -1e16, 1.0};
  EXPECT_EQ(compensated_sum(xs), 2.0);
}

}  // namespace
}  // namespace thetagw
