#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "thetagw/params.hpp"

namespace thetagw {

/// One representative parameter set per case, with simulation limits that
/// keep a 10^5-replicate run in the seconds range.
struct DeskSet {
  std::string label;
  RawParams raw;
  std::uint64_t z_cap;
  int n_max;
};

[[nodiscard]] inline std::vector<DeskSet> desk_parameter_sets() {
  return {
      {"case1", {1.0, 2.0, 1.0, std::nullopt, 1.0}, 10000, 200},
      {"case2", {1.0, 1.0, 1.0, std::nullopt, 1.0}, 100000, 100},
      {"case3", {1.0, 0.5, std::nullopt, 0.5, 1.0}, 1000, 200},
      {"case4", {0.0, 0.5, std::nullopt, 0.25, 1.0}, 200, 200},
      {"case5", {-0.5, 0.5, std::nullopt, 0.2, 1.0}, 10000, 200},
      {"case6", {-1.0, 0.5, std::nullopt, 0.3, 1.0}, 10, 200},
      {"case7", {0.5, 0.5, std::nullopt, 0.5, 2.0}, 10000, 200},
      {"case8", {0.0, 0.5, std::nullopt, 0.5, 2.0}, 10000, 200},
      {"case9", {-0.5, 0.5, std::nullopt, 0.5, 2.0}, 10000, 200},
  };
}

}  // namespace thetagw
