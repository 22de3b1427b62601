#include "thetagw/qprocess.hpp"

#include <cmath>

#include "thetagw/errors.hpp"
#include "thetagw/pgf.hpp"

namespace thetagw {

namespace {

void require_positive_q(const ThetaParams& p) {
  if (p.q() == 0.0) throw DomainError("q = 0: conditioning on extinction is degenerate");
}

LimitLaw law_from(LimitKind kind, const Expr& g, int K) {
  if (K < 1) throw DomainError("limit law needs K >= 1");
  std::vector<double> c = series_coeffs(g, static_cast<std::size_t>(K)).coeffs;
  LimitLaw law{kind, {}, 0.0};
  law.probabilities.assign(c.begin() + 1, c.end());
  for (double& v : law.probabilities) {
    if (v < 0.0 && v > -1e-12) v = 0.0;
  }
  law.tail_mass_bound = std::max(0.0, 1.0 - compensated_sum(law.probabilities));
  return law;
}

}  // namespace

QFunction::QFunction(ThetaParams p) : p_(std::move(p)), gamma_(scalar_summary(p_).gamma) {}

double QFunction::eval(double s) const {
  const double th = p_.theta();
  const double A = p_.big_a();
  switch (p_.case_id()) {
    case CaseId::Case1:
      return std::pow(std::pow(1.0 - s, -th) + *p_.d(), -1.0 / th);
    case CaseId::Case2:
      return 0.0;
    default:
      if (th == 0.0) return std::log((A - s) / (A - p_.q()));
      return std::pow(A - s, -th) - std::pow(A - p_.q(), -th);
  }
}

double QFunction::derivative(double s) const {
  const double th = p_.theta();
  const double A = p_.big_a();
  switch (p_.case_id()) {
    case CaseId::Case1: {
      if (s == 1.0) return -1.0;
      const double x = std::pow(1.0 - s, -th);
      return -std::pow(1.0 - s, -th - 1.0) * std::pow(x + *p_.d(), -1.0 / th - 1.0);
    }
    case CaseId::Case2:
      return 0.0;
    default:
      if (th == 0.0) return -1.0 / (A - s);
      return th * std::pow(A - s, -th - 1.0);
  }
}

double QFunction::normalizer() const {
  if (trivial()) throw TrivialLaw("Q vanishes identically in the critical case");
  return 1.0 / derivative(p_.q());
}

Expr QFunction::expr(const Expr& x) const {
  const double th = p_.theta();
  const double A = p_.big_a();
  switch (p_.case_id()) {
    case CaseId::Case1:
      return pow(pow(1.0 - x, -th) + *p_.d(), -1.0 / th);
    case CaseId::Case2:
      return Expr::constant(0.0);
    default:
      if (th == 0.0) return log((A - x) * (1.0 / (A - p_.q())));
      return pow(A - x, -th) - std::pow(A - p_.q(), -th);
  }
}

QFunction q_function(const ThetaParams& p) { return QFunction(p); }

// ---------------------------------------------------------------------------

double q_transition_gf(const ThetaParams& p, int i, int n, double s) {
  require_positive_q(p);
  if (i < 1 || n < 0) throw DomainError("transition needs i >= 1 and n >= 0");
  const double q = p.q();
  const double ratio = eval_fn_derivative(p, n, s * q) / eval_fn_derivative(p, n, q);
  return s * ratio * std::pow(eval_fn(p, n, s * q) / q, i - 1);
}

Expr q_transition_expr(const ThetaParams& p, int i, int n, const Expr& x) {
  require_positive_q(p);
  if (i < 1 || n < 0) throw DomainError("transition needs i >= 1 and n >= 0");
  const double q = p.q();
  const Expr sq = q * x;
  const Expr first = x * fn_prime_expr(p, n, sq) * (1.0 / eval_fn_derivative(p, n, q));
  if (i == 1) return first;
  return first * pow(fn_expr(p, n, sq) * (1.0 / q), static_cast<double>(i - 1));
}

std::vector<std::vector<double>> q_transition_matrix(const ThetaParams& p, int n, int rows,
                                                     int cols) {
  std::vector<std::vector<double>> m(static_cast<std::size_t>(rows) + 1);
  for (int i = 1; i <= rows; ++i) {
    m[i] = series_coeffs(q_transition_expr(p, i, n, Expr::var()), static_cast<std::size_t>(cols))
               .coeffs;
  }
  return m;
}

// ---------------------------------------------------------------------------

Expr stationary_expr(const ThetaParams& p, const Expr& x) {
  if (p.case_id() == CaseId::Case2) throw TrivialLaw("Q vanishes identically in the critical case");
  require_positive_q(p);
  const double th = p.theta();
  if (p.case_id() == CaseId::Case1) {
    return x * pow(1.0 + *p.d() * pow(1.0 - x, th), -1.0 / th - 1.0);
  }
  const double A = p.big_a();
  const double q = p.q();
  return x * pow((A - q * x) * (1.0 / (A - q)), -1.0 - th);
}

Expr conditional_b_expr(const ThetaParams& p, const Expr& x) {
  if (p.case_id() == CaseId::Case2) throw TrivialLaw("Q vanishes identically in the critical case");
  require_positive_q(p);
  const QFunction Q(p);
  return 1.0 - Q.expr(p.q() * x) * (1.0 / Q.eval(0.0));
}

Expr critical_w_expr(const ThetaParams& p, const Expr& x) {
  if (p.case_id() != CaseId::Case2) throw DomainError("w law exists only in the critical case");
  const double th = p.theta();
  const double c = p.c();
  const double k = 1.0 - std::pow(1.0 + c, -1.0 / th);
  return (pow(1.0 - k * x, -th) - 1.0) * (1.0 / c);
}

LimitLaw stationary_law(const ThetaParams& p, int K) {
  return law_from(LimitKind::StationaryQ, stationary_expr(p, Expr::var()), K);
}

LimitLaw conditional_limit_b(const ThetaParams& p, int K) {
  return law_from(LimitKind::ConditionalB, conditional_b_expr(p, Expr::var()), K);
}

LimitLaw critical_limit_w(const ThetaParams& p, int K) {
  return law_from(LimitKind::CriticalW, critical_w_expr(p, Expr::var()), K);
}

}  // namespace thetagw
