#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace flowres {

struct Point {
  double x = 0.0;  // lon, degrees
  double y = 0.0;  // lat, degrees
};

/// Closed ring: first vertex equals last, at least 4 vertices.
using Ring = std::vector<Point>;

/// One polygon: ring 0 is the outer boundary, the rest are holes.
using Polygon = std::vector<Ring>;

/// A region's shape. States carry one polygon; divisions and regions carry
/// the collection of their members' polygons.
struct Geometry {
  std::vector<Polygon> polygons;
};

/// Symmetric, irreflexive set of adjacent region-id pairs.
class AdjacencyIndex {
 public:
  /// Throws SelfPair when a == b.
  void add(const std::string& a, const std::string& b);
  bool is_adjacent(const std::string& a, const std::string& b) const;
  size_t pair_count() const { return pairs_.size(); }

  /// Unordered pairs, each stored once with first < second, sorted.
  std::vector<std::pair<std::string, std::string>> pairs() const;

 private:
  std::set<std::pair<std::string, std::string>> pairs_;
};

struct MeetOptions {
  double tolerance_deg = 1e-6;
  /// When true, corner touches do not count: the shared boundary must have
  /// positive length.
  bool require_shared_edge = false;
};

/// Egenhofer Meet: boundaries come within tolerance at some point and the
/// interiors do not overlap. Throws InvalidRing on malformed input.
bool polygons_meet(const Geometry& a, const Geometry& b, const MeetOptions& opts);

/// CSV with header id_a,id_b. `known_ids` empty disables the id check.
AdjacencyIndex load_adjacency(const std::string& path,
                              const std::set<std::string>& known_ids);

/// Pairwise Meet over every region pair at one level. Throws MissingGeometry
/// when `required_ids` lists a region absent from `geometries`.
AdjacencyIndex derive_adjacency(const std::map<std::string, Geometry>& geometries,
                                double tolerance_deg,
                                const std::set<std::string>& required_ids = {},
                                bool require_shared_edge = false);

/// GeoJSON FeatureCollection; each feature carries property "id".
std::map<std::string, Geometry> load_geojson_geometries(const std::string& path);

}  // namespace flowres
