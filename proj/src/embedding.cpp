#include "thetagw/embedding.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>

#include "thetagw/errors.hpp"
#include "thetagw/pgf.hpp"

namespace thetagw {

Embedding build_embedding(const ThetaParams& p) {
  const double th = p.theta();
  const double a = p.a();
  const double q = p.q();
  const double A = p.big_a();
  const Expr s = Expr::var();

  Embedding e{p, p.tag(), 0.0, ExtendedReal::finite(0.0), s};
  switch (p.case_id()) {
    case CaseId::Case1:
    case CaseId::Case2: {
      double mu = 1.0;
      if (p.case_id() == CaseId::Case1) {
        const double d = *p.d();
        mu = (1.0 + th) * d / ((1.0 + th) * d + 1.0);
        e.lambda = ((1.0 + 1.0 / th) * d + 1.0 / th) * std::log(a);
      } else {
        e.lambda = (1.0 + 1.0 / th) * p.c();
      }
      if (!(mu > 0.0 && mu <= 1.0 + 1.0 / th)) {
        throw DomainError("embedding offspring mean outside (0, 1 + 1/theta]");
      }
      e.mu = ExtendedReal::finite(mu);
      e.h = 1.0 - mu * (1.0 - s) + (mu / (1.0 + th)) * pow(1.0 - s, 1.0 + th);
      break;
    }
    case CaseId::Case6:
      e.lambda = std::log(1.0 / a);
      e.mu = ExtendedReal::finite(0.0);
      e.h = Expr::constant(q);
      break;
    case CaseId::Case4:
    case CaseId::Case8: {
      const double denom = 1.0 + std::log(A) - std::log(A - q);
      e.lambda = denom * std::log(1.0 / a);
      e.h = s + (A - s) * (log(A - s) - std::log(A - q)) * (1.0 / denom);
      if (A == 1.0) {
        e.mu = ExtendedReal::infinity();
      } else {
        e.mu = ExtendedReal::finite(1.0 + (std::log(A - q) - std::log(A - 1.0) - 1.0) / denom);
      }
      break;
    }
    default: {
      const double aq = std::pow(A - q, th);
      const double denom = (1.0 + th) * std::pow(A, th) - aq;
      e.lambda = ((1.0 + 1.0 / th) * std::pow(A, th) / aq - 1.0 / th) * std::log(1.0 / a);
      e.h = s + (pow(A - s, 1.0 + th) - aq * (A - s)) * (1.0 / denom);
      if (A == 1.0 && th < 0.0) {
        e.mu = ExtendedReal::infinity();
      } else {
        e.mu = ExtendedReal::finite(1.0 + (aq - (1.0 + th) * std::pow(A - 1.0, th)) / denom);
      }
      break;
    }
  }
  if (!(e.lambda > 0.0)) throw NumericError("embedding rate is not positive");
  return e;
}

double h_eval(const Embedding& e, double s) {
  const double A = e.params.big_a();
  // (A - s) log(A - s) has limit 0 at s = A.
  if (s == A && e.params.theta() == 0.0) return A;
  return e.h.eval(s);
}

SeriesTruncation h_coeffs(const Embedding& e, std::size_t K) {
  SeriesTruncation out = series_coeffs(e.h, K);
  double total = 0.0;
  for (double& v : out.coeffs) {
    if (v < 0.0 && v > -1e-12) v = 0.0;
    total += v;
  }
  out.tail_mass_bound = std::max(0.0, h_eval(e, 1.0) - total);
  return out;
}

double semigroup_F(const Embedding& /*e*/, const ThetaParams& p, double t, double s) {
  return eval_fn(p, t, s);
}

double semigroup_F_ode(const Embedding& e, double t, double s) {
  if (t < 0.0) throw DomainError("semigroup time must be >= 0");
  if (t == 0.0) return s;
  namespace ode = boost::numeric::odeint;
  using State = std::array<double, 1>;
  State x{s};
  auto rhs = [&e](const State& y, State& dy, double) {
    dy[0] = e.lambda * (h_eval(e, y[0]) - y[0]);
  };
  auto stepper = ode::make_controlled(1e-15, 1e-15, ode::runge_kutta_dopri5<State>());
  ode::integrate_adaptive(stepper, rhs, x, 0.0, t, t / 64.0);
  return x[0];
}

double integral_residual(const Embedding& e, const ThetaParams& p, double t, double s) {
  if (t == 0.0) return 0.0;
  const double q = p.q();
  const double target = eval_fn(p, t, s);
  const double lo = std::min(s, target);
  const double hi = std::max(s, target);
  if (s == q || (lo <= q && q <= hi)) {
    throw SingularPath("integration path from s to F_t(s) contains the fixed point q");
  }
  auto integrand = [&e](double x) { return 1.0 / (h_eval(e, x) - x); };
  double err = 0.0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, lo, hi, 20, 1e-13,
                                                                    &err);
  const double signed_value = target >= s ? value : -value;
  return signed_value - e.lambda * t;
}

}  // namespace thetagw
