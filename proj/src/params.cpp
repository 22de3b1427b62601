#include "thetagw/params.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "thetagw/errors.hpp"

namespace thetagw {

namespace {

constexpr double kCrossCheckTol = 1e-10;
constexpr double kSnapTol = 1e-12;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

bool rel_close(double x, double y, double tol) {
  return std::abs(x - y) <= tol * std::max({1.0, std::abs(x), std::abs(y)});
}

// Snap values that drifted just outside [0, 1] through rounding.
double snap_unit(double q) {
  if (q < 0.0 && q > -kSnapTol) return 0.0;
  if (q > 1.0 && q < 1.0 + kSnapTol) return 1.0;
  return q;
}

// c as a function of q for a < 1; valid for every theta including 0 and -1.
double c_from_q(double theta, double a, double big_a, double q) {
  return (1.0 - a) * std::exp(-theta * std::log(big_a - q));
}

// Inverse of c_from_q for theta != 0.
double q_from_c(double theta, double a, double big_a, double c) {
  return big_a - std::exp(std::log((1.0 - a) / c) / theta);
}

}  // namespace

std::string_view case_name(CaseId id) {
  static constexpr std::array<std::string_view, 9> names = {
      "case1", "case2", "case3", "case4", "case5",
      "case6", "case7", "case8", "case9"};
  return names[static_cast<int>(id) - 1];
}

int case_number(CaseId id) { return static_cast<int>(id); }

CaseId case_from_name(std::string_view name) {
  for (int k = 1; k <= 9; ++k) {
    if (case_name(static_cast<CaseId>(k)) == name) return static_cast<CaseId>(k);
  }
  throw DomainError("unknown case name '" + std::string(name) + "'");
}

std::string_view criticality_name(Criticality c) {
  switch (c) {
    case Criticality::Subcritical: return "subcritical";
    case Criticality::Critical: return "critical";
    case Criticality::Supercritical: return "supercritical";
    case Criticality::NonRegular: return "nonregular";
    case Criticality::PureDeath: return "pure_death";
  }
  return "unknown";
}

std::string ExtendedReal::to_string() const {
  return infinite_ ? std::string("inf") : fmt(value_);
}

std::optional<double> ThetaParams::d() const {
  if (tag_.id != CaseId::Case1) return std::nullopt;
  return c_ / (a_ - 1.0);
}

bool ThetaParams::ill_conditioned() const noexcept {
  return theta_ != 0.0 && std::abs(theta_) < 1e-8;
}

ThetaParams validate_classify(const RawParams& raw) {
  const double theta = raw.theta;
  const double a = raw.a;
  const double big_a = raw.big_a;

  if (!std::isfinite(theta) || theta < -1.0 || theta > 1.0) {
    throw DomainError("theta must lie in [-1, 1], got " + fmt(theta));
  }
  if (!std::isfinite(a) || a <= 0.0) {
    throw DomainError("a must be positive, got " + fmt(a));
  }
  if (!std::isfinite(big_a) || big_a < 1.0) {
    throw DomainError("A must be >= 1, got " + fmt(big_a));
  }
  if (!raw.c && !raw.q) {
    throw DomainError("either c or q must be supplied");
  }
  if (raw.c && (!std::isfinite(*raw.c) || *raw.c < 0.0)) {
    throw DomainError("c must be nonnegative, got " + fmt(*raw.c));
  }
  if (raw.q && (!std::isfinite(*raw.q) || *raw.q < 0.0 || *raw.q > 1.0)) {
    throw DomainError("q must lie in [0, 1], got " + fmt(*raw.q));
  }

  ThetaParams p;
  p.theta_ = theta;
  p.a_ = a;
  p.big_a_ = big_a;

  // a >= 1: cases 1 and 2, both with q = 1 and A = 1.
  if (a >= 1.0) {
    if (theta <= 0.0) {
      throw UnclassifiableError("a >= 1 requires theta in (0, 1], got theta = " + fmt(theta));
    }
    if (big_a != 1.0) {
      throw UnclassifiableError("a >= 1 requires A = 1, got A = " + fmt(big_a));
    }
    if (!raw.c) {
      throw DomainError("a >= 1 requires c (q = 1 does not determine it)");
    }
    if (*raw.c <= 0.0) {
      throw InconsistentParams("a >= 1 requires c > 0, got c = " + fmt(*raw.c));
    }
    if (raw.q && !rel_close(*raw.q, 1.0, kCrossCheckTol)) {
      throw InconsistentParams("a >= 1 forces q = 1, got q = " + fmt(*raw.q));
    }
    p.c_ = *raw.c;
    p.q_ = 1.0;
    if (a > 1.0) {
      p.tag_ = {CaseId::Case1, true, Criticality::Subcritical};
    } else {
      p.tag_ = {CaseId::Case2, true, Criticality::Critical};
    }
    return p;
  }

  // a < 1 from here on.
  if (theta == -1.0 && big_a != 1.0) {
    throw UnclassifiableError("theta = -1 is only defined with A = 1");
  }

  double q = 0.0;
  if (raw.q) {
    q = *raw.q;
  } else {
    if (theta == 0.0) {
      throw DomainError("theta = 0 requires q (c does not determine it)");
    }
    if (*raw.c <= 0.0) {
      throw InconsistentParams("a < 1 requires c > 0");
    }
    q = snap_unit(q_from_c(theta, a, big_a, *raw.c));
    if (!(q >= 0.0 && q <= 1.0)) {
      throw InconsistentParams("c = " + fmt(*raw.c) + " implies q = " + fmt(q) +
                               " outside [0, 1]");
    }
  }

  if (big_a == 1.0 && q == 1.0 && theta != -1.0) {
    // Not covered by the family; it would collide with the a -> 1
    // limit of the critical case.
    throw UnclassifiableError("A = 1 with q = 1 and a < 1 is only admitted for theta = -1");
  }

  const double c_expected = c_from_q(theta, a, big_a, q);
  if (raw.c && raw.q && !rel_close(*raw.c, c_expected, kCrossCheckTol)) {
    throw InconsistentParams("c = " + fmt(*raw.c) + " and q = " + fmt(q) +
                             " disagree (q implies c = " + fmt(c_expected) + ")");
  }
  p.c_ = raw.c ? *raw.c : c_expected;
  p.q_ = q;

  const bool unit_q = (q == 1.0);
  if (theta == -1.0) {
    p.tag_ = {CaseId::Case6, unit_q, unit_q ? Criticality::PureDeath : Criticality::NonRegular};
  } else if (big_a == 1.0) {
    if (theta > 0.0) {
      p.tag_ = {CaseId::Case3, true, Criticality::Supercritical};
    } else if (theta == 0.0) {
      p.tag_ = {CaseId::Case4, true, Criticality::Supercritical};
    } else {
      p.tag_ = {CaseId::Case5, false, Criticality::NonRegular};
    }
  } else {
    const Criticality crit = unit_q ? Criticality::Subcritical : Criticality::NonRegular;
    if (theta > 0.0) {
      p.tag_ = {CaseId::Case7, unit_q, crit};
    } else if (theta == 0.0) {
      p.tag_ = {CaseId::Case8, unit_q, crit};
    } else {
      p.tag_ = {CaseId::Case9, unit_q, crit};
    }
  }
  return p;
}

ScalarSummary scalar_summary(const ThetaParams& p) {
  const double th = p.theta();
  const double a = p.a();
  const double q = p.q();
  const double A = p.big_a();
  const auto inf = ExtendedReal::infinity();
  const auto fin = [](double v) { return ExtendedReal::finite(v); };

  switch (p.case_id()) {
    case CaseId::Case1: {
      const double m = std::pow(a, -1.0 / th);
      const double d = *p.d();
      return {1.0, 0.0, fin(m), th == 1.0 ? fin(2.0 * (a - 1.0) * d / (a * a)) : inf, m};
    }
    case CaseId::Case2:
      return {1.0, 0.0, fin(1.0), th == 1.0 ? fin(2.0 * p.c()) : inf, 1.0};
    case CaseId::Case3: {
      const double m = std::pow(a, -1.0 / th);
      return {1.0, 0.0, fin(m),
              th == 1.0 ? fin(2.0 * (1.0 - a) / (a * a * (1.0 - q))) : inf, a};
    }
    case CaseId::Case4:
      return {1.0, 0.0, inf, inf, a};
    case CaseId::Case5: {
      const double p_inf = std::pow(1.0 - a, 1.0 / std::abs(th)) * (1.0 - q);
      return {1.0 - p_inf, p_inf, inf, inf, a};
    }
    case CaseId::Case6: {
      const double p_inf = (1.0 - a) * (1.0 - q);
      return {1.0 - p_inf, p_inf, fin(a), fin(0.0), a};
    }
    case CaseId::Case7: {
      const double ratio = std::pow(A - q, -th) * std::pow(A - 1.0, th);
      const double b = a + (1.0 - a) * ratio;
      const double p_inf = (A - 1.0) * (std::pow(b, -1.0 / th) - 1.0);
      const double m = a * std::pow(b, -1.0 / th - 1.0);
      const double f2 = (1.0 + th) * a * (1.0 - a) * std::pow(A - q, -th) *
                        std::pow(A - 1.0, th - 1.0) * std::pow(b, -1.0 / th - 2.0);
      return {1.0 - p_inf, p_inf, fin(m), fin(f2), a};
    }
    case CaseId::Case8: {
      const double p_inf = std::pow(A - q, 1.0 - a) * std::pow(A - 1.0, a) - (A - 1.0);
      const double m = a * std::pow(A - q, 1.0 - a) * std::pow(A - 1.0, a - 1.0);
      const double f2 = a * (1.0 - a) * std::pow(A - q, 1.0 - a) * std::pow(A - 1.0, a - 2.0);
      return {1.0 - p_inf, p_inf, fin(m), fin(f2), a};
    }
    case CaseId::Case9: {
      const double g = std::abs(th);
      const double p_inf =
          std::pow(a * std::pow(A - 1.0, g) + (1.0 - a) * std::pow(A - q, g), 1.0 / g) - (A - 1.0);
      const double b = a + (1.0 - a) * std::pow(A - q, g) * std::pow(A - 1.0, -g);
      const double m = a * std::pow(b, 1.0 / g - 1.0);
      const double f2 = (1.0 - g) * a * (1.0 - a) * std::pow(A - q, g) *
                        std::pow(A - 1.0, -g - 1.0) * std::pow(b, 1.0 / g - 2.0);
      return {1.0 - p_inf, p_inf, fin(m), fin(f2), a};
    }
  }
  throw NumericError("unreachable case in scalar_summary");
}

ThetaParams dual_transform(const ThetaParams& p) {
  if (p.big_a() == 1.0) {
    throw DomainError("dual transform requires A > 1");
  }
  RawParams raw;
  raw.theta = p.theta();
  raw.a = p.a();
  raw.q = p.q() / p.big_a();
  raw.big_a = 1.0;
  return validate_classify(raw);
}

ThetaParams undual_transform(const ThetaParams& dual, double big_a) {
  if (dual.big_a() != 1.0) {
    throw DomainError("undual_transform expects A = 1 parameters");
  }
  if (!(big_a > 1.0)) {
    throw DomainError("undual_transform requires a scale A > 1");
  }
  RawParams raw;
  raw.theta = dual.theta();
  raw.a = dual.a();
  raw.q = snap_unit(dual.q() * big_a);
  raw.big_a = big_a;
  return validate_classify(raw);
}

ThetaParams from_linear_fractional(double p0, double p) {
  if (!(p0 >= 0.0 && p0 < 1.0)) {
    throw DomainError("p0 must lie in [0, 1), got " + fmt(p0));
  }
  if (!(p > 0.0 && p <= 1.0)) {
    throw DomainError("p must lie in (0, 1], got " + fmt(p));
  }
  RawParams raw;
  raw.theta = 1.0;
  raw.a = p / (1.0 - p0);
  // p == 1 - p0 is the critical boundary; 1 - p0 is rounded, so recover a = 1.
  if (std::abs(raw.a - 1.0) <= 4.0 * std::numeric_limits<double>::epsilon()) {
    raw.a = 1.0;
  }
  raw.c = (1.0 - p) / (1.0 - p0);
  return validate_classify(raw);
}

RawParams to_raw(const ThetaParams& p) {
  RawParams raw;
  raw.theta = p.theta();
  raw.a = p.a();
  raw.c = p.c();
  raw.q = p.q();
  raw.big_a = p.big_a();
  return raw;
}

}  // namespace thetagw
