#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "thetagw/params.hpp"
#include "thetagw/rng.hpp"

namespace thetagw {

/// Coefficients B[i][n] for 0 <= i <= n <= N. Rows 0 and 1 are all zero.
struct BTriangle {
  double theta = 0.0;
  int n_max = 0;
  std::vector<std::vector<double>> rows;  // rows[n][i]

  [[nodiscard]] double at(int i, int n) const { return rows.at(n).at(i); }
};

[[nodiscard]] BTriangle b_triangle(double theta, int N);

struct OffspringTable {
  std::vector<double> pmf;  // p_0 .. p_K
  double p_inf = 0.0;
  double tail_mass = 0.0;   // f(1) - sum of pmf
  int K = 0;
};

/// p_0..p_K from the closed-form recursions.
[[nodiscard]] OffspringTable pmf(const ThetaParams& p, int K);

/// Doubles K from 64 until tail_mass < tol; TruncationError past k_max.
[[nodiscard]] OffspringTable pmf_to_tolerance(const ThetaParams& p, double tol, int k_max);

/// p_0..p_K by Taylor expansion of the closed-form f. Independent of pmf().
[[nodiscard]] OffspringTable pmf_oracle(const ThetaParams& p, int K);

/// Largest table the sampler may build for these parameters.
[[nodiscard]] std::size_t default_k_max(const ThetaParams& p);

struct OffspringDraw {
  enum class Kind { Finite, Infinite, AboveLimit };
  Kind kind = Kind::Finite;
  std::uint64_t count = 0;  // meaningful for Finite only
};

/// Inverse-CDF offspring sampler that grows its table on demand.
///
/// Not thread-safe: sample() may rebuild the table. Give each worker its own
/// copy.
class OffspringSampler {
 public:
  using Source = std::function<std::vector<double>(std::size_t)>;

  OffspringSampler(Source source, double finite_mass, std::size_t k_init, std::size_t k_max);

  static OffspringSampler for_params(const ThetaParams& p,
                                     std::optional<std::size_t> k_max = std::nullopt);

  /// A table that can never be extended.
  static OffspringSampler from_table(const OffspringTable& table);

  /// Draws an offspring count. Counts above `limit` come back as AboveLimit
  /// without forcing the table to grow past limit + 1.
  OffspringDraw sample(Rng& rng,
                       std::uint64_t limit = std::numeric_limits<std::uint64_t>::max());

  [[nodiscard]] double finite_mass() const noexcept { return finite_mass_; }
  [[nodiscard]] std::size_t table_size() const noexcept { return cdf_.size(); }
  [[nodiscard]] std::size_t k_max() const noexcept { return k_max_; }

 private:
  void rebuild(std::size_t K);
  OffspringDraw locate(double u, std::uint64_t limit);

  Source source_;
  double finite_mass_;
  std::size_t k_max_;
  std::vector<double> cdf_;  // cdf_[k] = p_0 + ... + p_k
};

OffspringDraw sample_offspring(OffspringSampler& sampler, Rng& rng);

}  // namespace thetagw
