#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "thetagw/extended_real.hpp"

namespace thetagw {

enum class CaseId { Case1 = 1, Case2, Case3, Case4, Case5, Case6, Case7, Case8, Case9 };

enum class Criticality { Subcritical, Critical, Supercritical, NonRegular, PureDeath };

struct CaseTag {
  CaseId id;
  bool regular;  // f(1) == 1
  Criticality criticality;

  friend bool operator==(const CaseTag&, const CaseTag&) = default;
};

[[nodiscard]] std::string_view case_name(CaseId id);  // "case1" .. "case9"
[[nodiscard]] CaseId case_from_name(std::string_view name);
[[nodiscard]] std::string_view criticality_name(Criticality c);
[[nodiscard]] int case_number(CaseId id);

/// Unvalidated input bundle. Exactly as a caller or a JSON document supplies
/// it: theta and a are mandatory, at least one of c / q must be present.
struct RawParams {
  double theta = 0.0;
  double a = 0.0;
  std::optional<double> c;
  std::optional<double> q;
  double big_a = 1.0;
};

/// Canonical, validated parameters of a theta-branching reproduction law
///
///   (A - f(s))^(-theta) = a (A - s)^(-theta) + c,
///
/// together with its extinction probability q and case classification.
/// For theta = 0 and theta = -1 the law is the continuous extension and c is
/// stored as (1 - a)(A - q)^(-theta), i.e. 1 - a and (1 - a)(1 - q).
///
/// Instances only come out of validate_classify() and are immutable.
class ThetaParams {
 public:
  [[nodiscard]] double theta() const noexcept { return theta_; }
  [[nodiscard]] double a() const noexcept { return a_; }
  [[nodiscard]] double c() const noexcept { return c_; }
  [[nodiscard]] double big_a() const noexcept { return big_a_; }
  [[nodiscard]] double q() const noexcept { return q_; }
  /// Case 1 alias c / (a - 1); empty in every other case.
  [[nodiscard]] std::optional<double> d() const;

  [[nodiscard]] const CaseTag& tag() const noexcept { return tag_; }
  [[nodiscard]] CaseId case_id() const noexcept { return tag_.id; }
  [[nodiscard]] bool regular() const noexcept { return tag_.regular; }

  /// 0 < |theta| < 1e-8: accepted, but 1/theta amplifies rounding.
  [[nodiscard]] bool ill_conditioned() const noexcept;

  friend bool operator==(const ThetaParams&, const ThetaParams&) = default;

 private:
  friend ThetaParams validate_classify(const RawParams& raw);
  ThetaParams() = default;

  double theta_ = 0.0;
  double a_ = 0.0;
  double c_ = 0.0;
  double big_a_ = 1.0;
  double q_ = 0.0;
  CaseTag tag_{CaseId::Case1, true, Criticality::Subcritical};
};

struct ScalarSummary {
  double f_at_1;
  double p_inf;  // 1 - f(1)
  ExtendedReal mean_m;
  ExtendedReal f2_at_1;
  double gamma;  // f'(q)
};

/// Checks raw input against the nine admissible parameter regions and fills
/// in whichever of c / q was not supplied.
///
/// Throws DomainError for out-of-range scalars, InconsistentParams when c and
/// q disagree (relative 1e-10) or a required strict inequality fails, and
/// UnclassifiableError when no case admits the combination.
[[nodiscard]] ThetaParams validate_classify(const RawParams& raw);

[[nodiscard]] ScalarSummary scalar_summary(const ThetaParams& p);

/// Parameters of s -> f(sA)/A. Requires A > 1; maps cases 7/8/9 onto 3/4/5.
[[nodiscard]] ThetaParams dual_transform(const ThetaParams& p);

/// Inverse of dual_transform given the scale A that was divided out.
[[nodiscard]] ThetaParams undual_transform(const ThetaParams& dual, double big_a);

/// theta = 1 parameters of the modified geometric law with P(0) = p0 and
/// P(k) = (1 - p0)(1 - p)^(k-1) p.
[[nodiscard]] ThetaParams from_linear_fractional(double p0, double p);

/// Raw view of a canonical bundle, carrying both c and q.
[[nodiscard]] RawParams to_raw(const ThetaParams& p);

}  // namespace thetagw
