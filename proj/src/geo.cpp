#include "flowres/geo.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "flowres/csv.hpp"
#include "flowres/errors.hpp"

namespace flowres {

void AdjacencyIndex::add(const std::string& a, const std::string& b) {
  if (a == b)
    throw Error(ErrorCode::SelfPair, "self adjacency '" + a + "' rejected");
  pairs_.insert(a < b ? std::make_pair(a, b) : std::make_pair(b, a));
}

bool AdjacencyIndex::is_adjacent(const std::string& a, const std::string& b) const {
  if (a == b) return false;
  return pairs_.count(a < b ? std::make_pair(a, b) : std::make_pair(b, a)) > 0;
}

std::vector<std::pair<std::string, std::string>> AdjacencyIndex::pairs() const {
  return {pairs_.begin(), pairs_.end()};
}

namespace {

double cross(Point o, Point a, Point b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

double dist(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

double point_segment_distance(Point p, Point a, Point b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  if (len2 == 0.0) return dist(p, a);
  double t = ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return dist(p, {a.x + t * dx, a.y + t * dy});
}

// Signed perpendicular distance of p from the infinite line through a,b.
double line_distance(Point p, Point a, Point b) {
  const double len = dist(a, b);
  if (len == 0.0) return dist(p, a);
  return cross(a, b, p) / len;
}

// Transversal crossing strictly inside both segments, up to tolerance.
bool segments_cross_properly(Point a, Point b, Point c, Point d, double tol) {
  const double sc = line_distance(c, a, b);
  const double sd = line_distance(d, a, b);
  const double sa = line_distance(a, c, d);
  const double sb = line_distance(b, c, d);
  return (sc > tol && sd < -tol && ((sa > tol && sb < -tol) || (sa < -tol && sb > tol))) ||
         (sc < -tol && sd > tol && ((sa > tol && sb < -tol) || (sa < -tol && sb > tol)));
}

double segment_segment_distance(Point a, Point b, Point c, Point d) {
  if (segments_cross_properly(a, b, c, d, 0.0)) return 0.0;
  return std::min({point_segment_distance(a, c, d), point_segment_distance(b, c, d),
                   point_segment_distance(c, a, b), point_segment_distance(d, a, b)});
}

// Length of the collinear overlap between cd and ab when cd runs within tol
// of ab's line; 0 otherwise.
double collinear_overlap_length(Point a, Point b, Point c, Point d, double tol) {
  if (std::abs(line_distance(c, a, b)) > tol || std::abs(line_distance(d, a, b)) > tol)
    return 0.0;
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double len = std::hypot(dx, dy);
  if (len == 0.0) return 0.0;
  const double tc = ((c.x - a.x) * dx + (c.y - a.y) * dy) / len;
  const double td = ((d.x - a.x) * dx + (d.y - a.y) * dy) / len;
  const double lo = std::max(0.0, std::min(tc, td));
  const double hi = std::min(len, std::max(tc, td));
  return std::max(0.0, hi - lo);
}

void validate_ring(const Ring& ring) {
  if (ring.size() < 4)
    throw Error(ErrorCode::InvalidRing, "ring needs at least 4 vertices");
  if (ring.front().x != ring.back().x || ring.front().y != ring.back().y)
    throw Error(ErrorCode::InvalidRing, "ring is not closed");
}

// Even-odd test over all rings of one polygon (holes flip parity).
bool point_in_polygon(Point p, const Polygon& poly) {
  bool inside = false;
  for (const Ring& ring : poly) {
    for (size_t i = 0; i + 1 < ring.size(); ++i) {
      const Point a = ring[i], b = ring[i + 1];
      if ((a.y > p.y) != (b.y > p.y)) {
        const double x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
        if (x > p.x) inside = !inside;
      }
    }
  }
  return inside;
}

double point_boundary_distance(Point p, const Polygon& poly) {
  double best = std::numeric_limits<double>::infinity();
  for (const Ring& ring : poly)
    for (size_t i = 0; i + 1 < ring.size(); ++i)
      best = std::min(best, point_segment_distance(p, ring[i], ring[i + 1]));
  return best;
}

bool strictly_inside(Point p, const Polygon& poly, double tol) {
  return point_in_polygon(p, poly) && point_boundary_distance(p, poly) > tol;
}

Point outer_centroid(const Polygon& poly) {
  const Ring& ring = poly.front();
  double sx = 0, sy = 0;
  const size_t n = ring.size() - 1;  // skip closing vertex
  for (size_t i = 0; i < n; ++i) {
    sx += ring[i].x;
    sy += ring[i].y;
  }
  return {sx / static_cast<double>(n), sy / static_cast<double>(n)};
}

struct PairRelation {
  bool contact = false;
  bool overlap = false;
  double shared_length = 0.0;
};

PairRelation relate_polygons(const Polygon& pa, const Polygon& pb, double tol) {
  PairRelation rel;
  for (const Ring& ra : pa) {
    for (size_t i = 0; i + 1 < ra.size(); ++i) {
      for (const Ring& rb : pb) {
        for (size_t j = 0; j + 1 < rb.size(); ++j) {
          const Point a = ra[i], b = ra[i + 1], c = rb[j], d = rb[j + 1];
          if (segments_cross_properly(a, b, c, d, tol)) rel.overlap = true;
          if (segment_segment_distance(a, b, c, d) <= tol) {
            rel.contact = true;
            rel.shared_length =
                std::max(rel.shared_length, collinear_overlap_length(a, b, c, d, tol));
          }
        }
      }
    }
  }
  // Vertices and edge midpoints: midpoints catch axis-aligned partial
  // overlaps whose vertices all land exactly on the other boundary.
  auto any_sample_inside = [tol](const Polygon& from, const Polygon& into) {
    for (const Ring& ring : from) {
      for (size_t i = 0; i + 1 < ring.size(); ++i) {
        if (strictly_inside(ring[i], into, tol)) return true;
        const Point mid{(ring[i].x + ring[i + 1].x) / 2.0,
                        (ring[i].y + ring[i + 1].y) / 2.0};
        if (strictly_inside(mid, into, tol)) return true;
      }
    }
    return false;
  };
  if (!rel.overlap)
    rel.overlap = any_sample_inside(pa, pb) || any_sample_inside(pb, pa);
  // Catches identical/contained shapes whose vertices all sit on boundaries.
  if (!rel.overlap &&
      (strictly_inside(outer_centroid(pa), pb, tol) ||
       strictly_inside(outer_centroid(pb), pa, tol)))
    rel.overlap = true;
  return rel;
}

}  // namespace

bool polygons_meet(const Geometry& a, const Geometry& b, const MeetOptions& opts) {
  if (opts.tolerance_deg < 0)
    throw Error(ErrorCode::BadParams, "tolerance must be nonnegative");
  for (const auto& g : {std::cref(a), std::cref(b)})
    for (const Polygon& poly : g.get().polygons) {
      if (poly.empty()) throw Error(ErrorCode::InvalidRing, "empty polygon");
      for (const Ring& ring : poly) validate_ring(ring);
    }

  const double min_shared = std::max(opts.tolerance_deg, 1e-12);
  for (const Polygon& pa : a.polygons) {
    for (const Polygon& pb : b.polygons) {
      const PairRelation rel = relate_polygons(pa, pb, opts.tolerance_deg);
      if (rel.contact && !rel.overlap &&
          (!opts.require_shared_edge || rel.shared_length > min_shared))
        return true;
    }
  }
  return false;
}

AdjacencyIndex load_adjacency(const std::string& path,
                              const std::set<std::string>& known_ids) {
  AdjacencyIndex index;
  csv::for_each_row(path, {"id_a", "id_b"},
                    [&](size_t line_no, const std::vector<std::string>& f) {
    for (const std::string& id : {f[0], f[1]})
      if (!known_ids.empty() && !known_ids.count(id))
        throw Error(ErrorCode::UnknownRegion,
                    path + ":" + std::to_string(line_no) + ": '" + id + "'");
    index.add(f[0], f[1]);
  });
  return index;
}

AdjacencyIndex derive_adjacency(const std::map<std::string, Geometry>& geometries,
                                double tolerance_deg,
                                const std::set<std::string>& required_ids,
                                bool require_shared_edge) {
  for (const std::string& id : required_ids)
    if (!geometries.count(id))
      throw Error(ErrorCode::MissingGeometry, "region '" + id + "'");

  MeetOptions opts{tolerance_deg, require_shared_edge};
  AdjacencyIndex index;
  for (auto it = geometries.begin(); it != geometries.end(); ++it) {
    auto jt = it;
    for (++jt; jt != geometries.end(); ++jt)
      if (polygons_meet(it->second, jt->second, opts)) index.add(it->first, jt->first);
  }
  return index;
}

std::map<std::string, Geometry> load_geojson_geometries(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
  if (doc.value("type", "") != "FeatureCollection")
    throw Error(ErrorCode::ParseError, path + ": expected a FeatureCollection");

  auto parse_ring = [](const nlohmann::json& jring) {
    Ring ring;
    for (const auto& pt : jring)
      ring.push_back({pt.at(0).get<double>(), pt.at(1).get<double>()});
    return ring;
  };
  auto parse_polygon = [&](const nlohmann::json& jpoly) {
    Polygon poly;
    for (const auto& jring : jpoly) poly.push_back(parse_ring(jring));
    return poly;
  };

  std::map<std::string, Geometry> out;
  for (const auto& feature : doc.at("features")) {
    const auto& props = feature.at("properties");
    if (!props.contains("id"))
      throw Error(ErrorCode::ParseError, path + ": feature without property 'id'");
    const std::string id = props.at("id").get<std::string>();
    const auto& geom = feature.at("geometry");
    const std::string type = geom.value("type", "");
    Geometry g;
    if (type == "Polygon") {
      g.polygons.push_back(parse_polygon(geom.at("coordinates")));
    } else if (type == "MultiPolygon") {
      for (const auto& jpoly : geom.at("coordinates"))
        g.polygons.push_back(parse_polygon(jpoly));
    } else {
      throw Error(ErrorCode::ParseError,
                  path + ": unsupported geometry type '" + type + "' for '" + id + "'");
    }
    out[id] = std::move(g);
  }
  return out;
}

}  // namespace flowres
