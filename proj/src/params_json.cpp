#include "thetagw/params_json.hpp"

#include "thetagw/errors.hpp"

namespace thetagw {

namespace {

double number_field(const nlohmann::json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_number()) throw DomainError(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

}  // namespace

RawParams raw_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw DomainError("parameter document must be a JSON object");
  if (!j.contains("theta") || !j.contains("a")) {
    throw DomainError("parameter document needs 'theta' and 'a'");
  }
  RawParams raw;
  raw.theta = number_field(j, "theta");
  raw.a = number_field(j, "a");
  if (j.contains("c") && !j["c"].is_null()) raw.c = number_field(j, "c");
  if (j.contains("q") && !j["q"].is_null()) raw.q = number_field(j, "q");
  if (j.contains("A") && !j["A"].is_null()) raw.big_a = number_field(j, "A");
  return raw;
}

nlohmann::ordered_json params_to_json(const ThetaParams& p) {
  nlohmann::ordered_json j;
  j["theta"] = p.theta();
  j["a"] = p.a();
  j["c"] = p.c();
  j["A"] = p.big_a();
  j["q"] = p.q();
  j["case_id"] = std::string(case_name(p.case_id()));
  if (auto d = p.d()) {
    j["d"] = *d;
  } else {
    j["d"] = nullptr;
  }
  return j;
}

ThetaParams params_from_json_string(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DomainError(std::string("malformed JSON: ") + e.what());
  }
  return validate_classify(raw_from_json(j));
}

}  // namespace thetagw
