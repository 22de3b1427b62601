#pragma once

#include <cstddef>
#include <vector>

#include "thetagw/params.hpp"
#include "thetagw/series.hpp"

namespace thetagw {

/// Solution of Q(f(s)) = gamma Q(s) with Q(q) = 0, in the family's closed
/// form. The raw form is kept; normalizer() = 1/Q'(q) rescales it to unit
/// slope at q. In the critical case Q vanishes identically and trivial() is set.
class QFunction {
 public:
  explicit QFunction(ThetaParams p);

  [[nodiscard]] const ThetaParams& params() const noexcept { return p_; }
  [[nodiscard]] bool trivial() const noexcept { return p_.case_id() == CaseId::Case2; }
  [[nodiscard]] double gamma() const noexcept { return gamma_; }

  [[nodiscard]] double eval(double s) const;
  [[nodiscard]] double derivative(double s) const;
  [[nodiscard]] double normalizer() const;

  [[nodiscard]] Expr expr(const Expr& x) const;

 private:
  ThetaParams p_;
  double gamma_;
};

[[nodiscard]] QFunction q_function(const ThetaParams& p);

/// sum_j Q_n(i, j) s^j for the process conditioned on eventual extinction.
[[nodiscard]] double q_transition_gf(const ThetaParams& p, int i, int n, double s);
[[nodiscard]] Expr q_transition_expr(const ThetaParams& p, int i, int n, const Expr& x);

/// m[i][j] = Q_n(i, j) for 1 <= i <= rows, 0 <= j <= cols (row 0 unused).
[[nodiscard]] std::vector<std::vector<double>> q_transition_matrix(const ThetaParams& p, int n,
                                                                   int rows, int cols);

enum class LimitKind { StationaryQ, ConditionalB, CriticalW };

struct LimitLaw {
  LimitKind kind;
  std::vector<double> probabilities;  // probabilities[j - 1] is the mass at j
  double tail_mass_bound;             // 1 - sum, clamped at 0
};

/// nu with gf s Q'(sq) / Q'(q).
[[nodiscard]] LimitLaw stationary_law(const ThetaParams& p, int K);
/// Yaglom-type limit with gf 1 - Q(sq) / Q(0).
[[nodiscard]] LimitLaw conditional_limit_b(const ThetaParams& p, int K);
/// Critical-case limit law.
[[nodiscard]] LimitLaw critical_limit_w(const ThetaParams& p, int K);

[[nodiscard]] Expr stationary_expr(const ThetaParams& p, const Expr& x);
[[nodiscard]] Expr conditional_b_expr(const ThetaParams& p, const Expr& x);
[[nodiscard]] Expr critical_w_expr(const ThetaParams& p, const Expr& x);

}  // namespace thetagw
