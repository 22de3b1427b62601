#include "thetagw/absorption.hpp"

#include <cmath>
#include <limits>

#include "thetagw/errors.hpp"
#include "thetagw/pgf.hpp"

namespace thetagw {

namespace {

constexpr double kEulerGamma = 0.57721566490153286061;

double pow_an(const ThetaParams& p, int n) { return std::exp(n * std::log(p.a())); }

// log of 1 - a^n (1 - ratio^theta), the bracket of the general tail forms.
double log_bracket(const ThetaParams& p, int n, double log_ratio) {
  const double one_minus = -std::expm1(p.theta() * log_ratio);
  return std::log1p(-pow_an(p, n) * one_minus);
}

}  // namespace

double AbsorptionTails::t0_tail(int n) const {
  if (n < 0) throw DomainError("tail index must be >= 0");
  const double th = p_.theta();
  const double a = p_.a();
  const double q = p_.q();
  const double A = p_.big_a();
  switch (p_.case_id()) {
    case CaseId::Case1: {
      const double nl = n * std::log(a);
      return std::exp(-nl / th - std::log1p(-*p_.d() * std::expm1(-nl)) / th);
    }
    case CaseId::Case2:
      return std::exp(-std::log1p(p_.c() * n) / th);
    case CaseId::Case4:
      return (1.0 - q) * std::expm1(-pow_an(p_, n) * std::log1p(-q));
    case CaseId::Case6:
      return pow_an(p_, n) * q;
    case CaseId::Case8:
      return (A - q) * std::expm1(pow_an(p_, n) * std::log(A / (A - q)));
    default: {
      const double lu = log_bracket(p_, n, std::log((A - q) / A));
      return (A - q) * std::expm1(-lu / th);
    }
  }
}

double AbsorptionTails::t1_tail(int n) const {
  if (n < 0) throw DomainError("tail index must be >= 0");
  if (p_.regular()) return 0.0;
  const double th = p_.theta();
  const double q = p_.q();
  const double A = p_.big_a();
  switch (p_.case_id()) {
    case CaseId::Case6:
      return pow_an(p_, n) * (1.0 - q);
    case CaseId::Case8:
      return -(A - q) * std::expm1(pow_an(p_, n) * std::log((A - 1.0) / (A - q)));
    default: {
      const double lv = log_bracket(p_, n, std::log((A - q) / (A - 1.0)));
      return -(A - q) * std::expm1(-lv / th);
    }
  }
}

double AbsorptionTails::t_tail(int n) const {
  if (n < 0) throw DomainError("tail index must be >= 0");
  if (p_.regular()) return t0_tail(n);
  const double th = p_.theta();
  const double q = p_.q();
  const double A = p_.big_a();
  switch (p_.case_id()) {
    case CaseId::Case6:
      return pow_an(p_, n);
    case CaseId::Case8: {
      const double an = pow_an(p_, n);
      return std::exp((1.0 - an) * std::log(A - q)) *
             (std::exp(an * std::log(A)) - std::exp(an * std::log(A - 1.0)));
    }
    default: {
      const double lu = log_bracket(p_, n, std::log((A - q) / A));
      const double lv = log_bracket(p_, n, std::log((A - q) / (A - 1.0)));
      return (A - q) * (std::exp(-lu / th) - std::exp(-lv / th));
    }
  }
}

std::pair<double, double> AbsorptionTails::via_iteration(int n) const {
  const double q = p_.q();
  const double lim_at_1 = p_.regular() ? 1.0 : q;
  return {q - eval_fn(p_, n, 0.0), eval_fn(p_, n, 1.0) - lim_at_1};
}

AbsorptionTails absorption_tails(const ThetaParams& p) { return AbsorptionTails(p); }

// ---------------------------------------------------------------------------

ExtendedReal sum_tail(const std::function<double(int)>& tail) {
  constexpr int kMaxTerms = 1 << 22;
  constexpr double kTol = 1e-10;
  double sum = 0.0;
  double comp = 0.0;
  auto add = [&](double x) {
    const double y = x - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  };
  double prev = tail(0);
  add(prev);
  int checkpoint = 64;
  double at_half = 0.0;
  for (int n = 1; n < kMaxTerms; ++n) {
    const double term = tail(n);
    if (term <= 0.0) return ExtendedReal::finite(sum);
    if (n == checkpoint) {
      const double r = term / prev;
      if (r < 0.999) {
        const double rest = term / (1.0 - r);
        if (rest < kTol) return ExtendedReal::finite(sum + rest);
      } else if (at_half > 0.0) {
        // Power-law decay term ~ C n^(-alpha): alpha from the last doubling.
        const double alpha = std::log(at_half / term) / std::log(2.0);
        if (alpha <= 1.0 + 1e-3 && n >= (1 << 16)) return ExtendedReal::infinity();
        if (alpha > 1.0) {
          const double rest = n * term / (alpha - 1.0) + 0.5 * term;
          if (rest < kTol || n >= (1 << 21)) return ExtendedReal::finite(sum + rest);
        }
      }
      checkpoint *= 2;
      at_half = term;
    }
    add(term);
    prev = term;
  }
  return ExtendedReal::infinity();
}

ExpectedAbsorption expected_absorption(const ThetaParams& p) {
  ExpectedAbsorption out;
  if (p.case_id() == CaseId::Case6) {
    const auto mean = ExtendedReal::finite(1.0 / (1.0 - p.a()));
    if (p.q() > 0.0) out.t0_given_finite = mean;
    if (p.q() < 1.0) out.t1_given_finite = mean;
    out.t = mean;
    return out;
  }
  const AbsorptionTails tails(p);
  auto conditional = [](const ExtendedReal& s, double mass) {
    return s.is_infinite() ? s : ExtendedReal::finite(s.value() / mass);
  };
  if (tails.mass_t0() > 0.0) {
    out.t0_given_finite = conditional(sum_tail([&](int n) { return tails.t0_tail(n); }),
                                      tails.mass_t0());
  }
  if (tails.mass_t1() > 0.0) {
    out.t1_given_finite = conditional(sum_tail([&](int n) { return tails.t1_tail(n); }),
                                      tails.mass_t1());
  }
  const double mass_t = tails.mass_t0() + tails.mass_t1();
  if (mass_t > 0.0) {
    out.t = conditional(sum_tail([&](int n) { return tails.t_tail(n); }), mass_t);
  }
  return out;
}

double conditional_t1_cdf(const ThetaParams& p, int n) {
  if (p.regular()) {
    throw DomainError("explosion has probability 0 in a regular case");
  }
  if (n < 0) return 0.0;
  const double th = p.theta();
  const double q = p.q();
  const double A = p.big_a();
  if (th < 0.0) {
    const double g = -th;
    const double ratio = std::exp(g * (std::log(A - 1.0) - std::log(A - q)));
    const double bracket = 1.0 - pow_an(p, n) * (1.0 - ratio);
    return (A - q) / (1.0 - q) * std::pow(bracket, 1.0 / g) - (A - 1.0) / (1.0 - q);
  }
  return 1.0 - AbsorptionTails(p).t1_tail(n) / (1.0 - q);
}

// ---------------------------------------------------------------------------

double gumbel_w(const ExtendedReal& r) {
  if (r.is_infinite() || r.value() == 0.0) return 1.0;
  return -std::expm1(-r.value());
}

double gumbel_mean(double w, double a) { return (std::log(w) - kEulerGamma) / std::log(a); }

GumbelLimit gumbel_limit(const ThetaParams& p) {
  const double th = p.theta();
  const double A = p.big_a();
  const double a = p.a();
  if (!(a > 0.0 && a < 1.0)) throw DomainError("Gumbel limit needs a in (0, 1)");
  if (p.regular()) throw DomainError("Gumbel limit needs a positive explosion probability");
  if (th > 0.0 || th == -1.0) {
    throw RegimeError("Gumbel limit needs theta in (-1, 0]");
  }
  if (th == 0.0 && A == 1.0) throw RegimeError("theta = 0 with A = 1 never explodes");
  if (A >= 2.0) throw RegimeError("Gumbel limit needs A < 2 so that log(1/(A-1)) > 0");

  GumbelLimit g{a, ExtendedReal::infinity(), 1.0, 0.0, 0.0, 0.0};
  if (A == 1.0) {
    g.r = ExtendedReal::infinity();
    g.epsilon = -th;
  } else if (th == 0.0) {
    g.r = ExtendedReal::finite(0.0);
    g.epsilon = 1.0 / std::log(1.0 / (A - 1.0));
  } else {
    g.r = ExtendedReal::finite(-th * std::log(1.0 / (A - 1.0)));
    g.epsilon = -th;
  }
  g.w = gumbel_w(g.r);
  g.shift = std::log(g.epsilon) / std::log(a);
  g.mean = gumbel_mean(g.w, a);
  return g;
}

GumbelPoint gumbel_eval(const ThetaParams& p, double y) {
  const GumbelLimit g = gumbel_limit(p);
  GumbelPoint pt{};
  pt.y = y;
  pt.n_floor = static_cast<int>(std::floor(g.shift + y));
  pt.n_ceil = static_cast<int>(std::ceil(g.shift + y));
  pt.exact_floor = conditional_t1_cdf(p, pt.n_floor);
  pt.exact_ceil = conditional_t1_cdf(p, pt.n_ceil);
  pt.limit = std::exp(-g.w * std::pow(g.a, y));
  return pt;
}

std::vector<GumbelLatticePoint> gumbel_lattice(const ThetaParams& p, double y_lo, double y_hi) {
  const GumbelLimit g = gumbel_limit(p);
  std::vector<GumbelLatticePoint> out;
  const int n_lo = std::max(0, static_cast<int>(std::ceil(g.shift + y_lo)));
  const int n_hi = static_cast<int>(std::floor(g.shift + y_hi));
  for (int n = n_lo; n <= n_hi; ++n) {
    const double y = n - g.shift;
    out.push_back({n, y, conditional_t1_cdf(p, n), std::exp(-g.w * std::pow(g.a, y))});
  }
  return out;
}

double gumbel_sup_deviation(const ThetaParams& p, double y_lo, double y_hi) {
  double sup = 0.0;
  for (const auto& pt : gumbel_lattice(p, y_lo, y_hi)) {
    sup = std::max(sup, std::abs(pt.exact - pt.limit));
  }
  return sup;
}

}  // namespace thetagw
