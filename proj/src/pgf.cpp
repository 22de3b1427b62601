#include "thetagw/pgf.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "thetagw/errors.hpp"

namespace thetagw {

namespace {

constexpr double kClampTol = 1e-14;

// Iterate as the affine map x -> at x + ct acting on x = (A - s)^(-theta).
struct Affine {
  double at;
  double ct;
};

Affine affine_coeffs(const ThetaParams& p, double t) {
  const double lna = std::log(p.a());
  const double at = std::exp(t * lna);
  switch (p.case_id()) {
    case CaseId::Case1:
      return {at, *p.d() * std::expm1(t * lna)};
    case CaseId::Case2:
      return {1.0, p.c() * t};
    default:
      return {at, -std::expm1(t * lna) * std::exp(-p.theta() * std::log(p.big_a() - p.q()))};
  }
}

double checked_arg(const ThetaParams& p, double s, bool& clamped) {
  const double A = p.big_a();
  clamped = false;
  if (std::isnan(s) || s < 0.0) throw DomainError("pgf argument must be >= 0, got " + std::to_string(s));
  if (s > A) {
    if (s - A <= kClampTol * A) {
      clamped = true;
      return A;
    }
    throw DomainError("pgf argument exceeds A");
  }
  if (s != A && A - s <= kClampTol * A) {
    clamped = true;
    return A;
  }
  return s;
}

void check_t(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("iterate index must be finite and >= 0");
}

}  // namespace

PgfValue eval_fn_detail(const ThetaParams& p, double t, double s) {
  check_t(t);
  bool clamped = false;
  const double x = checked_arg(p, s, clamped);
  if (t == 0.0) return {s, s, false};

  const double A = p.big_a();
  const double th = p.theta();
  double value = 0.0;
  if (th == -1.0) {
    const double at = std::pow(p.a(), t);
    value = at * x + (1.0 - at) * p.q();
  } else if (th == 0.0) {
    const double lna = std::log(p.a());
    const double at = std::exp(t * lna);
    const double one_minus_at = -std::expm1(t * lna);
    value = A - std::exp(one_minus_at * std::log(A - p.q()) + at * std::log(A - x));
  } else {
    const Affine m = affine_coeffs(p, t);
    const double term = m.at * std::exp(-th * std::log(A - x)) + m.ct;
    if (!(term > 0.0)) throw NumericError("iterate bracket is not positive");
    value = A - std::exp(-std::log(term) / th);
  }
  return {s, value, clamped};
}

double eval_fn(const ThetaParams& p, double t, double s) { return eval_fn_detail(p, t, s).value; }

double eval_f(const ThetaParams& p, double s) { return eval_fn_detail(p, 1.0, s).value; }

double eval_fn_derivative(const ThetaParams& p, double t, double s) {
  check_t(t);
  bool clamped = false;
  const double x = checked_arg(p, s, clamped);
  if (t == 0.0) return 1.0;

  const double A = p.big_a();
  const double th = p.theta();
  if (th == -1.0) return std::pow(p.a(), t);
  if (th == 0.0) {
    const double at = std::pow(p.a(), t);
    if (x == A) return std::numeric_limits<double>::infinity();
    return at * std::exp((1.0 - at) * std::log(A - p.q()) + (at - 1.0) * std::log(A - x));
  }
  const Affine m = affine_coeffs(p, t);
  if (x == A) {
    if (th > 0.0) return std::exp(-std::log(m.at) / th);
    return std::numeric_limits<double>::infinity();
  }
  const double lx = std::log(A - x);
  const double term = m.at * std::exp(-th * lx) + m.ct;
  return m.at * std::exp((-th - 1.0) * lx + (-1.0 / th - 1.0) * std::log(term));
}

double compose_iterate(const ThetaParams& p, int n, double s) {
  if (n < 0) throw DomainError("composition count must be >= 0");
  double x = s;
  for (int k = 0; k < n; ++k) {
    x = eval_f(p, x);
    if (!(x >= 0.0 && x <= p.big_a())) {
      throw OverflowGuard("composition left [0, A] at step " + std::to_string(k + 1));
    }
  }
  return x;
}

Expr fn_expr(const ThetaParams& p, double t, const Expr& x) {
  check_t(t);
  if (t == 0.0) return x;
  const double A = p.big_a();
  const double th = p.theta();
  if (th == -1.0) {
    const double at = std::pow(p.a(), t);
    return at * x + (1.0 - at) * p.q();
  }
  if (th == 0.0) {
    const double at = std::pow(p.a(), t);
    const double scale = std::exp(-std::expm1(t * std::log(p.a())) * std::log(A - p.q()));
    return A - scale * pow(A - x, at);
  }
  const Affine m = affine_coeffs(p, t);
  return A - pow(m.at * pow(A - x, -th) + m.ct, -1.0 / th);
}

Expr fn_prime_expr(const ThetaParams& p, double t, const Expr& x) {
  check_t(t);
  if (t == 0.0) return Expr::constant(1.0);
  const double A = p.big_a();
  const double th = p.theta();
  if (th == -1.0) return Expr::constant(std::pow(p.a(), t));
  if (th == 0.0) {
    const double at = std::pow(p.a(), t);
    const double scale = at * std::exp((1.0 - at) * std::log(A - p.q()));
    return scale * pow(A - x, at - 1.0);
  }
  const Affine m = affine_coeffs(p, t);
  return m.at * pow(A - x, -th - 1.0) * pow(m.at * pow(A - x, -th) + m.ct, -1.0 / th - 1.0);
}

}  // namespace thetagw
