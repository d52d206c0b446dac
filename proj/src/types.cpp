#include "flowres/types.hpp"

#include <algorithm>
#include <cctype>

#include "flowres/errors.hpp"

namespace flowres {

const char* to_string(RegionLevel level) {
  switch (level) {
    case RegionLevel::State: return "STATE";
    case RegionLevel::Division: return "DIVISION";
    case RegionLevel::Region: return "REGION";
  }
  return "?";
}

const char* to_string(Direction direction) {
  return direction == Direction::Import ? "IMPORT" : "EXPORT";
}

namespace {
std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  return s;
}
}  // namespace

RegionLevel parse_region_level(const std::string& token) {
  const std::string t = upper(token);
  if (t == "STATE") return RegionLevel::State;
  if (t == "DIVISION") return RegionLevel::Division;
  if (t == "REGION") return RegionLevel::Region;
  throw Error(ErrorCode::ParseError, "unknown region level '" + token + "'");
}

Direction parse_direction(const std::string& token) {
  const std::string t = upper(token);
  if (t == "IMPORT") return Direction::Import;
  if (t == "EXPORT") return Direction::Export;
  throw Error(ErrorCode::ParseError, "unknown direction '" + token + "'");
}

std::string normalize_code(const std::string& raw) {
  const bool numeric = !raw.empty() &&
      std::all_of(raw.begin(), raw.end(),
                  [](unsigned char c) { return std::isdigit(c); });
  if (numeric && raw.size() < 2) return "0" + raw;
  return raw;
}

}  // namespace flowres
