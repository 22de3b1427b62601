#pragma once

#include "thetagw/params.hpp"
#include "thetagw/series.hpp"

namespace thetagw {

struct PgfValue {
  double s;
  double value;
  bool clamped;  // s was within 1e-14 of A and evaluated at A
};

/// f(s). Accepts 0 <= s <= A; at s = A the continuous extension is used.
[[nodiscard]] double eval_f(const ThetaParams& p, double s);

/// t-th iterate f_t(s) for real t >= 0. Integer t agrees with t-fold
/// composition; non-integer t is the continuous-time semigroup.
[[nodiscard]] double eval_fn(const ThetaParams& p, double t, double s);

/// Same as eval_fn, reporting whether the argument was clamped to A.
[[nodiscard]] PgfValue eval_fn_detail(const ThetaParams& p, double t, double s);

/// d/ds f_t(s). At s = A this is the one-sided limit (possibly +inf).
[[nodiscard]] double eval_fn_derivative(const ThetaParams& p, double t, double s);

/// Literal n-fold composition of eval_f. Throws OverflowGuard if an
/// intermediate value leaves [0, A].
[[nodiscard]] double compose_iterate(const ThetaParams& p, int n, double s);

/// Closed-form descriptors of f_t(x) and f_t'(x) for an arbitrary inner
/// descriptor x, suitable for series extraction.
[[nodiscard]] Expr fn_expr(const ThetaParams& p, double t, const Expr& x);
[[nodiscard]] Expr fn_prime_expr(const ThetaParams& p, double t, const Expr& x);
[[nodiscard]] inline Expr f_expr(const ThetaParams& p, const Expr& x) { return fn_expr(p, 1.0, x); }

}  // namespace thetagw
