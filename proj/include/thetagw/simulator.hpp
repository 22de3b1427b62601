#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "thetagw/absorption.hpp"
#include "thetagw/embedding.hpp"
#include "thetagw/offspring.hpp"
#include "thetagw/params.hpp"

namespace thetagw {

struct SimConfig {
  ThetaParams params;
  std::int64_t replicates = 100000;
  int n_max = 200;
  std::uint64_t z_cap = 10000000;
  std::uint64_t master_seed = 0;
  bool antithetic = false;
  unsigned workers = 1;
  std::optional<std::size_t> k_max = std::nullopt;  // offspring table limit; default per parameter family
};

void validate_config(const SimConfig& cfg);

enum class TrajectoryStatus { Extinct, Exploded, CensoredHorizon, CensoredCap };

[[nodiscard]] const char* status_name(TrajectoryStatus s);

struct TrajectoryRecord {
  std::vector<std::uint64_t> sizes;  // Z_0 .. Z_last; an over-cap generation is not stored
  TrajectoryStatus status = TrajectoryStatus::CensoredHorizon;
  std::optional<int> absorb_n;       // set for Extinct and Exploded
  int censor_n = 0;                  // censored runs: T > n known for n <= censor_n

  friend bool operator==(const TrajectoryRecord&, const TrajectoryRecord&) = default;
};

[[nodiscard]] TrajectoryRecord simulate_trajectory(const SimConfig& cfg,
                                                   std::uint64_t replicate_index);
[[nodiscard]] TrajectoryRecord simulate_trajectory(const SimConfig& cfg,
                                                   std::uint64_t replicate_index,
                                                   OffspringSampler& sampler);

/// At-risk survival estimates on a time grid n * dt, n = 0..n_max.
/// A censored run counts towards grid points it is known to survive and
/// drops out of the denominator afterwards.
struct EmpiricalTails {
  double dt = 1.0;
  int n_max = 0;
  std::int64_t replicates = 0;
  std::vector<std::int64_t> at_risk;
  std::vector<std::int64_t> t0_gt;  // runs with T0 > n among those at risk
  std::vector<std::int64_t> t1_gt;
  std::vector<std::int64_t> t_gt;

  std::int64_t extinct = 0;
  std::int64_t exploded = 0;
  std::int64_t censored_horizon = 0;
  std::int64_t censored_cap = 0;
  std::int64_t cap_treated_as_surviving = 0;

  // Moments of the absorption time over absorbed runs.
  double sum_t = 0.0;
  double sum_t2 = 0.0;

  std::vector<std::string> warnings;

  [[nodiscard]] double survival_t0(int n) const;
  [[nodiscard]] double survival_t1(int n) const;
  [[nodiscard]] double survival_t(int n) const;
  /// Binomial standard error of survival_t(n).
  [[nodiscard]] double standard_error(int n) const;
  [[nodiscard]] double censored_fraction() const;
  [[nodiscard]] std::int64_t absorbed() const { return extinct + exploded; }
  [[nodiscard]] double mean_absorption() const;
  [[nodiscard]] double mean_absorption_se() const;
};

[[nodiscard]] EmpiricalTails estimate_tails(const SimConfig& cfg);

struct KsDistance {
  double t0 = 0.0;
  double t1 = 0.0;
  double t = 0.0;
  double max = 0.0;
};

/// sup over n in [n_lo, n_hi] of |empirical - analytic| survival, per time.
/// Grid points without runs at risk are skipped.
[[nodiscard]] KsDistance ks_distance(const EmpiricalTails& emp, const AbsorptionTails& analytic,
                                     int n_lo, int n_hi);

/// Same comparison for a time grid with arbitrary dt, against the semigroup.
[[nodiscard]] KsDistance ks_distance_semigroup(const EmpiricalTails& emp, const ThetaParams& p,
                                               int n_lo, int n_hi);

/// Event-driven simulation of the continuous-time process. The time budget is
/// cfg.n_max; the grid is dt, 2 dt, ... up to the budget.
[[nodiscard]] EmpiricalTails simulate_ct_skeleton(const Embedding& e, const SimConfig& cfg,
                                                  double dt);

}  // namespace thetagw
