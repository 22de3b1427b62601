#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "thetagw/desk.hpp"
#include "thetagw/params.hpp"

namespace thetagw::testing {

inline ThetaParams make(double theta, double a, std::optional<double> c, std::optional<double> q,
                        double big_a = 1.0) {
  return validate_classify(RawParams{theta, a, c, q, big_a});
}

inline std::vector<ThetaParams> desk_params() {
  std::vector<ThetaParams> out;
  for (const auto& d : desk_parameter_sets()) out.push_back(validate_classify(d.raw));
  return out;
}

// Random admissible parameters for one case. |theta| stays >= 0.05.
class ParamSampler {
 public:
  explicit ParamSampler(std::uint64_t seed) : gen_(seed) {}

  ThetaParams draw(CaseId id) {
    const double th_pos = u(0.05, 1.0);
    const double th_neg = -u(0.05, 0.95);
    const double a = u(0.1, 0.9);
    const double q = u(0.0, 0.95);
    const double big_a = u(1.1, 3.0);
    switch (id) {
      case CaseId::Case1: return make(th_pos, u(1.1, 4.0), u(0.1, 3.0), std::nullopt);
      case CaseId::Case2: return make(th_pos, 1.0, u(0.1, 3.0), std::nullopt);
      case CaseId::Case3: return make(th_pos, a, std::nullopt, q);
      case CaseId::Case4: return make(0.0, a, std::nullopt, q);
      case CaseId::Case5: return make(th_neg, a, std::nullopt, q);
      case CaseId::Case6: return make(-1.0, a, std::nullopt, u(0.0, 1.0));
      case CaseId::Case7: return make(th_pos, a, std::nullopt, u(0.0, 1.0), big_a);
      case CaseId::Case8: return make(0.0, a, std::nullopt, u(0.0, 1.0), big_a);
      case CaseId::Case9: return make(th_neg, a, std::nullopt, u(0.0, 1.0), big_a);
    }
    return make(th_pos, a, std::nullopt, q);
  }

  double u(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }

 private:
  std::mt19937_64 gen_;
};

inline constexpr CaseId kAllCases[] = {CaseId::Case1, CaseId::Case2, CaseId::Case3,
                                       CaseId::Case4, CaseId::Case5, CaseId::Case6,
                                       CaseId::Case7, CaseId::Case8, CaseId::Case9};

inline std::vector<double> unit_grid(double hi, int points) {
  std::vector<double> g;
  for (int i = 0; i < points; ++i) g.push_back(hi * i / (points - 1));
  return g;
}

}  // namespace thetagw::testing
