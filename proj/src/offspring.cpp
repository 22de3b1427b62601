#include "thetagw/offspring.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "thetagw/errors.hpp"
#include "thetagw/pgf.hpp"
#include "thetagw/series.hpp"

namespace thetagw {

namespace {

constexpr double kClampTol = 1e-12;
constexpr double kGuardBand = 1e-12;

void clamp_small_negatives(std::vector<double>& v) {
  for (double& x : v) {
    if (x < 0.0 && x > -kClampTol) x = 0.0;
  }
}

// Explicit coefficients with B scaled row by row:
//   e[i] = B_{i,n} x^i A^(1-n) / n!,  p_n = a (a + cA^theta)^(-(1+theta)/theta) sum_i e[i].
std::vector<double> b_recursion_pmf(const ThetaParams& p, int K) {
  const double th = p.theta();
  const double a = p.a();
  const double A = p.big_a();
  const double cA = p.c() * std::pow(A, th);
  const double x = cA / (a + cA);
  const double pref = a * std::exp(-(1.0 + th) / th * std::log(a + cA));

  std::vector<double> out(static_cast<std::size_t>(K) + 1, 0.0);
  out[0] = A - std::exp(-std::log(a * std::pow(A, -th) + p.c()) / th);
  if (K >= 1) out[1] = a * std::exp((-1.0 - 1.0 / th) * std::log(a + cA));
  if (K < 2) return out;

  std::vector<double> row(static_cast<std::size_t>(K) + 1, 0.0);
  std::vector<double> next(row.size(), 0.0);
  row[1] = (1.0 + th) * x / (2.0 * A);
  out[2] = pref * compensated_sum(std::span<const double>(row.data() + 1, 1));
  for (int n = 3; n <= K; ++n) {
    const double scale = 1.0 / (static_cast<double>(n) * A);
    for (int i = 1; i <= n - 1; ++i) {
      const double keep = i <= n - 2 ? (n - 2 - i * th) * row[i] : 0.0;
      const double shift = i >= 2 ? (1.0 + i * th) * x * row[i - 1] : 0.0;
      next[i] = (keep + shift) * scale;
    }
    std::swap(row, next);
    out[n] = pref * compensated_sum(std::span<const double>(row.data() + 1, n - 1));
  }
  return out;
}

std::vector<double> log_case_pmf(const ThetaParams& p, int K) {
  const double a = p.a();
  const double A = p.big_a();
  const double lq = std::log(A - p.q());
  std::vector<double> out(static_cast<std::size_t>(K) + 1, 0.0);
  out[0] = A - std::exp((1.0 - a) * lq + a * std::log(A));
  if (K >= 1) out[1] = a * std::exp((1.0 - a) * lq + (a - 1.0) * std::log(A));
  for (int n = 2; n <= K; ++n) {
    out[n] = out[n - 1] * (n - a - 1.0) / (n * A);
  }
  return out;
}

std::vector<double> pmf_values(const ThetaParams& p, int K) {
  std::vector<double> v;
  if (p.theta() == -1.0) {
    v.assign(static_cast<std::size_t>(K) + 1, 0.0);
    v[0] = (1.0 - p.a()) * p.q();
    if (K >= 1) v[1] = p.a();
  } else if (p.theta() == 0.0) {
    v = log_case_pmf(p, K);
  } else {
    v = b_recursion_pmf(p, K);
  }
  clamp_small_negatives(v);
  return v;
}

OffspringTable make_table(const ThetaParams& p, std::vector<double> v, int K) {
  OffspringTable t;
  const ScalarSummary sum = scalar_summary(p);
  t.p_inf = sum.p_inf;
  t.tail_mass = sum.f_at_1 - compensated_sum(v);
  if (t.tail_mass < 0.0 && t.tail_mass > -kClampTol) t.tail_mass = 0.0;
  t.pmf = std::move(v);
  t.K = K;
  return t;
}

}  // namespace

BTriangle b_triangle(double theta, int N) {
  if (theta == 0.0 || theta == -1.0 || !(theta > -1.0 && theta <= 1.0)) {
    throw DomainError("B recursion needs theta in (-1, 0) or (0, 1]");
  }
  if (N < 2) throw DomainError("B triangle needs N >= 2");
  BTriangle t;
  t.theta = theta;
  t.n_max = N;
  t.rows.resize(static_cast<std::size_t>(N) + 1);
  for (int n = 0; n <= N; ++n) t.rows[n].assign(static_cast<std::size_t>(n) + 1, 0.0);
  t.rows[2][1] = 1.0 + theta;
  for (int n = 3; n <= N; ++n) {
    for (int i = 1; i <= n - 1; ++i) {
      const double keep = i <= n - 2 ? (n - 2 - i * theta) * t.rows[n - 1][i] : 0.0;
      const double shift = i >= 2 ? (1.0 + i * theta) * t.rows[n - 1][i - 1] : 0.0;
      t.rows[n][i] = keep + shift;
    }
  }
  return t;
}

OffspringTable pmf(const ThetaParams& p, int K) {
  if (K < 1) throw DomainError("pmf needs K >= 1");
  return make_table(p, pmf_values(p, K), K);
}

OffspringTable pmf_to_tolerance(const ThetaParams& p, double tol, int k_max) {
  int K = std::min(64, k_max);
  for (;;) {
    OffspringTable t = pmf(p, K);
    if (t.tail_mass < tol) return t;
    if (K >= k_max) {
      throw TruncationError("tail mass " + std::to_string(t.tail_mass) + " still above " +
                            std::to_string(tol) + " at K = " + std::to_string(K));
    }
    K = std::min(2 * K, k_max);
  }
}

OffspringTable pmf_oracle(const ThetaParams& p, int K) {
  if (K < 1) throw DomainError("pmf needs K >= 1");
  std::vector<double> v = series_coeffs(f_expr(p, Expr::var()), static_cast<std::size_t>(K)).coeffs;
  clamp_small_negatives(v);
  return make_table(p, std::move(v), K);
}

std::size_t default_k_max(const ThetaParams& p) {
  if (p.theta() == -1.0) return 1;
  if (p.theta() == 0.0) return 1000000;
  return 10000;
}

// ---------------------------------------------------------------------------

OffspringSampler::OffspringSampler(Source source, double finite_mass, std::size_t k_init,
                                   std::size_t k_max)
    : source_(std::move(source)), finite_mass_(finite_mass), k_max_(k_max) {
  rebuild(std::min(std::max<std::size_t>(k_init, 1), k_max_));
}

OffspringSampler OffspringSampler::for_params(const ThetaParams& p,
                                              std::optional<std::size_t> k_max) {
  const std::size_t kmax = k_max.value_or(default_k_max(p));
  const std::size_t k_init = p.theta() == 0.0 ? 1024 : 64;
  return OffspringSampler([p](std::size_t K) { return pmf_values(p, static_cast<int>(K)); },
                          scalar_summary(p).f_at_1, std::min(k_init, kmax), kmax);
}

OffspringSampler OffspringSampler::from_table(const OffspringTable& table) {
  auto values = table.pmf;
  return OffspringSampler([values](std::size_t) { return values; }, 1.0 - table.p_inf,
                          static_cast<std::size_t>(table.K), static_cast<std::size_t>(table.K));
}

void OffspringSampler::rebuild(std::size_t K) {
  const std::vector<double> v = source_(K);
  cdf_.assign(v.size(), 0.0);
  double sum = 0.0;
  double comp = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double y = v[k] - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    cdf_[k] = sum;
  }
}

OffspringDraw OffspringSampler::locate(double u, std::uint64_t limit) {
  if (u >= finite_mass_) return {OffspringDraw::Kind::Infinite, 0};
  for (;;) {
    const std::size_t last = cdf_.size() - 1;
    if (u < cdf_[last]) {
      const auto k = static_cast<std::uint64_t>(
          std::upper_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin());
      if (k > limit) return {OffspringDraw::Kind::AboveLimit, 0};
      return {OffspringDraw::Kind::Finite, k};
    }
    if (last >= k_max_ && finite_mass_ - cdf_[last] <= kGuardBand) {
      // Rounding gap of a finite-support law: the last atom owns it.
      std::size_t k = last;
      while (k > 0 && cdf_[k] == cdf_[k - 1]) --k;
      if (k > limit) return {OffspringDraw::Kind::AboveLimit, 0};
      return {OffspringDraw::Kind::Finite, k};
    }
    // The draw exceeds every tabulated count.
    if (limit <= last) return {OffspringDraw::Kind::AboveLimit, 0};
    if (last >= k_max_) {
      throw TruncationError("offspring draw fell beyond K_max = " + std::to_string(k_max_) +
                            " (uncovered mass " + std::to_string(finite_mass_ - cdf_[last]) + ")");
    }
    rebuild(std::min(std::max<std::size_t>(2 * last, 2), k_max_));
  }
}

OffspringDraw OffspringSampler::sample(Rng& rng, std::uint64_t limit) {
  return locate(rng.uniform(), limit);
}

OffspringDraw sample_offspring(OffspringSampler& sampler, Rng& rng) { return sampler.sample(rng); }

}  // namespace thetagw
