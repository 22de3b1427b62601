#pragma once

#include <string>

#include "thetagw/params.hpp"
#include "json.hpp"

namespace thetagw {

/// Reads {"theta", "a", "c" | "q", "A"}. Unknown keys are ignored; missing
/// theta or a, or non-numeric values, raise DomainError.
[[nodiscard]] RawParams raw_from_json(const nlohmann::json& j);

/// Canonical bundle: theta, a, c, A, q, case_id and d (null outside case 1).
[[nodiscard]] nlohmann::ordered_json params_to_json(const ThetaParams& p);

[[nodiscard]] ThetaParams params_from_json_string(const std::string& text);

}  // namespace thetagw
