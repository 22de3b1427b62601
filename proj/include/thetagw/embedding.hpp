#pragma once

#include <cstddef>

#include "thetagw/extended_real.hpp"
#include "thetagw/params.hpp"
#include "thetagw/series.hpp"

namespace thetagw {

/// Continuous-time Markov branching process whose integer-time skeleton is
/// the given discrete process: particles live Exp(lambda) and are replaced by
/// offspring drawn from the (possibly defective) pgf h.
struct Embedding {
  ThetaParams params;
  CaseTag case_tag;
  double lambda;
  ExtendedReal mu;  // h'(1)
  Expr h;
};

[[nodiscard]] Embedding build_embedding(const ThetaParams& p);

[[nodiscard]] double h_eval(const Embedding& e, double s);
[[nodiscard]] SeriesTruncation h_coeffs(const Embedding& e, std::size_t K);

/// F_t(s); identical to the real-index iterate.
[[nodiscard]] double semigroup_F(const Embedding& e, const ThetaParams& p, double t, double s);

/// F_t(s) obtained from (h, lambda) alone by integrating
/// dF/dt = lambda (h(F) - F), F_0 = s.
[[nodiscard]] double semigroup_F_ode(const Embedding& e, double t, double s);

/// Integral of 1/(h(x) - x) from s to F_t(s), minus lambda t. SingularPath
/// when the path touches the fixed point q.
[[nodiscard]] double integral_residual(const Embedding& e, const ThetaParams& p, double t,
                                       double s);

}  // namespace thetagw
