#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "thetagw/extended_real.hpp"
#include "thetagw/params.hpp"

namespace thetagw {

/// Distribution of the extinction time T0, the explosion time T1 and the
/// absorption time T = min(T0, T1).
///
/// The *_tail functions are P(n < . < inf). In regular cases explosion is
/// impossible and t1_tail is identically 0.
class AbsorptionTails {
 public:
  explicit AbsorptionTails(ThetaParams p) : p_(std::move(p)) {}

  [[nodiscard]] const ThetaParams& params() const noexcept { return p_; }

  [[nodiscard]] double t0_tail(int n) const;
  [[nodiscard]] double t1_tail(int n) const;
  /// Evaluated as one expression, not as t0_tail + t1_tail.
  [[nodiscard]] double t_tail(int n) const;

  /// (q - f_n(0), f_n(1) - lim f_n(1)) from the iterates.
  [[nodiscard]] std::pair<double, double> via_iteration(int n) const;

  [[nodiscard]] double mass_t0() const noexcept { return p_.q(); }
  [[nodiscard]] double mass_t1() const noexcept { return p_.regular() ? 0.0 : 1.0 - p_.q(); }

  /// Survival functions P(. > n), including the mass at infinity.
  [[nodiscard]] double survival_t0(int n) const { return 1.0 - mass_t0() + t0_tail(n); }
  [[nodiscard]] double survival_t1(int n) const { return 1.0 - mass_t1() + t1_tail(n); }
  [[nodiscard]] double survival_t(int n) const {
    return 1.0 - mass_t0() - mass_t1() + t_tail(n);
  }

 private:
  ThetaParams p_;
};

[[nodiscard]] AbsorptionTails absorption_tails(const ThetaParams& p);

/// Conditional means. A member is empty when its conditioning event has
/// probability 0; it is infinite when the tail sum diverges. t is
/// E(T | T < inf), which is E(T) whenever absorption is certain.
struct ExpectedAbsorption {
  std::optional<ExtendedReal> t0_given_finite;
  std::optional<ExtendedReal> t1_given_finite;
  std::optional<ExtendedReal> t;
};

[[nodiscard]] ExpectedAbsorption expected_absorption(const ThetaParams& p);

/// Sum of tail(n) over n >= 0 to absolute accuracy about 1e-8, or infinity
/// when the terms decay no faster than 1/n.
[[nodiscard]] ExtendedReal sum_tail(const std::function<double(int)>& tail);

/// P(T1 <= n | T1 < inf). DomainError in regular cases.
[[nodiscard]] double conditional_t1_cdf(const ThetaParams& p, int n);

struct GumbelLimit {
  double a;
  ExtendedReal r;   // lim |theta| log(1/(A-1))
  double w;
  double epsilon;   // |theta|, or 1/log(1/(A-1)) when r = 0
  double shift;     // log_a(epsilon)
  double mean;      // (log w - euler gamma) / log a
};

struct GumbelPoint {
  double y;
  int n_floor;
  int n_ceil;
  double exact_floor;  // P(T1 <= n_floor | T1 < inf)
  double exact_ceil;
  double limit;        // exp(-w a^y)
};

struct GumbelLatticePoint {
  int n;
  double y;  // n - shift
  double exact;
  double limit;
};

[[nodiscard]] double gumbel_w(const ExtendedReal& r);
[[nodiscard]] double gumbel_mean(double w, double a);

/// Regime of the rescaled explosion time for one explosive parameter set
/// with theta in (-1, 0] and 1 <= A < 2. RegimeError otherwise.
[[nodiscard]] GumbelLimit gumbel_limit(const ThetaParams& p);
[[nodiscard]] GumbelPoint gumbel_eval(const ThetaParams& p, double y);
[[nodiscard]] std::vector<GumbelLatticePoint> gumbel_lattice(const ThetaParams& p, double y_lo,
                                                             double y_hi);
/// Largest |exact - limit| over the lattice points in [y_lo, y_hi].
[[nodiscard]] double gumbel_sup_deviation(const ThetaParams& p, double y_lo, double y_hi);

}  // namespace thetagw
