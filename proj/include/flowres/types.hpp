#pragma once

#include <optional>
#include <string>

namespace flowres {

/// Geographic Levels: states nest in divisions, divisions in regions.
enum class RegionLevel { State, Division, Region };

enum class Direction { Import, Export };

/// A geographic unit (state, census division, or census region).
struct RegionNode {
  std::string id;
  std::string name;
  RegionLevel level = RegionLevel::State;
  std::optional<std::string> parent_id;
  std::string feature_code;                 // GeoNames-style, e.g. "ADM1"
  std::optional<std::string> geometry_ref;  // key into the geometry table
};

/// Node in the commodity code forest (leaf SCTG chapter or aggregate).
struct CommodityCode {
  std::string code;
  std::string description;
  std::optional<std::string> parent;
  bool is_aggregate = false;
  std::optional<std::string> external_class_iri;
};

/// One origin->destination flow of one commodity in one year.
struct CommodityFlow {
  std::string origin;
  std::string dest;
  std::string code;  // leaf commodity code
  int year = 0;
  double value = 0.0;        // $ millions
  double avg_mileage = 0.0;  // miles
  std::optional<double> weight;
};

const char* to_string(RegionLevel level);
const char* to_string(Direction direction);

/// Parses "STATE"/"state" etc. Throws ParseError on unknown tokens.
RegionLevel parse_region_level(const std::string& token);
Direction parse_direction(const std::string& token);

/// Zero-pads bare numeric SCTG chapters to two characters ("1" -> "01").
std::string normalize_code(const std::string& raw);

}  // namespace flowres
