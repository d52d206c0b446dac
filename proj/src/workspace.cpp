#include "flowres/workspace.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "flowres/csv.hpp"
#include "flowres/errors.hpp"
#include "flowres/ingest.hpp"
#include "flowres/namespaces.hpp"
#include "format_util.hpp"

namespace fs = std::filesystem;

namespace flowres {

namespace {

void write_regions_csv(const GraphStore& store, const fs::path& path) {
  std::ofstream out(path);
  out << "id,name,level,parent_id,feature_code\n";
  for (const auto& [id, r] : store.regions())
    out << csv::quote(id) << ',' << csv::quote(r.name) << ',' << to_string(r.level)
        << ',' << csv::quote(r.parent_id.value_or("")) << ','
        << csv::quote(r.feature_code) << '\n';
  if (!out) throw Error(ErrorCode::SinkWrite, path.string());
}

void write_codes_csv(const GraphStore& store, const fs::path& path) {
  std::ofstream out(path);
  out << "code,description,parent,is_aggregate\n";
  for (const auto& [code, c] : store.codes())
    out << csv::quote(code) << ',' << csv::quote(c.description) << ','
        << csv::quote(c.parent.value_or("")) << ','
        << (c.is_aggregate ? "true" : "false") << '\n';
  if (!out) throw Error(ErrorCode::SinkWrite, path.string());
}

void write_flows_csv(const GraphStore& store, const fs::path& path) {
  std::ofstream out(path);
  out << "year,origin_id,dest_id,sctg_code,value_musd,avg_miles,weight\n";
  for (const auto& [key, f] : store.flows()) {
    out << f.year << ',' << csv::quote(f.origin) << ',' << csv::quote(f.dest) << ','
        << csv::quote(f.code) << ',' << detail::fmt_double(f.value) << ','
        << detail::fmt_double(f.avg_mileage) << ',';
    if (f.weight) out << detail::fmt_double(*f.weight);
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::SinkWrite, path.string());
}

void write_adjacency_csv(const AdjacencyIndex& index, const fs::path& path) {
  std::ofstream out(path);
  out << "id_a,id_b\n";
  for (const auto& [a, b] : index.pairs())
    out << csv::quote(a) << ',' << csv::quote(b) << '\n';
  if (!out) throw Error(ErrorCode::SinkWrite, path.string());
}

nlohmann::json geometry_to_geojson(const Geometry& g) {
  auto ring_json = [](const Ring& ring) {
    nlohmann::json jr = nlohmann::json::array();
    for (const Point& p : ring) jr.push_back({p.x, p.y});
    return jr;
  };
  auto poly_json = [&](const Polygon& poly) {
    nlohmann::json jp = nlohmann::json::array();
    for (const Ring& ring : poly) jp.push_back(ring_json(ring));
    return jp;
  };
  if (g.polygons.size() == 1)
    return {{"type", "Polygon"}, {"coordinates", poly_json(g.polygons.front())}};
  nlohmann::json coords = nlohmann::json::array();
  for (const Polygon& poly : g.polygons) coords.push_back(poly_json(poly));
  return {{"type", "MultiPolygon"}, {"coordinates", coords}};
}

}  // namespace

void save_workspace(const Workspace& ws, const std::string& dir) {
  fs::create_directories(dir);
  const fs::path base(dir);

  {
    std::ofstream ttl(base / "graph.ttl", std::ios::binary);
    if (!ttl) throw Error(ErrorCode::SinkWrite, (base / "graph.ttl").string());
    GraphStore annotated = ws.store;  // attach adjacency for the export
    annotated.set_adjacency_pairs(ws.adjacency.pairs());
    annotated.export_turtle(ttl);
  }

  write_regions_csv(ws.store, base / "regions.csv");
  write_codes_csv(ws.store, base / "codes.csv");
  write_flows_csv(ws.store, base / "flows.csv");
  write_adjacency_csv(ws.adjacency, base / "adjacency.csv");

  if (!ws.geometries.empty()) {
    nlohmann::json fc{{"type", "FeatureCollection"},
                      {"features", nlohmann::json::array()}};
    for (const auto& [id, geom] : ws.geometries)
      fc["features"].push_back({{"type", "Feature"},
                                {"properties", {{"id", id}}},
                                {"geometry", geometry_to_geojson(geom)}});
    std::ofstream out(base / "geometries.geojson");
    out << fc.dump(2) << '\n';
    if (!out) throw Error(ErrorCode::SinkWrite, (base / "geometries.geojson").string());
  }

  nlohmann::json meta{
      {"format", "flowres-workspace"},
      {"version", 1},
      {"namespaces",
       {{"cfs", ns::kCfs},
        {"cfsf", ns::kCfsf},
        {"kwg-ont", ns::kKwgOnt},
        {"gn", ns::kGn},
        {"geo", ns::kGeo},
        {"time", ns::kTime}}}};
  std::ofstream metaout(base / "meta.json");
  metaout << meta.dump(2) << '\n';
  if (!metaout) throw Error(ErrorCode::SinkWrite, (base / "meta.json").string());
}

Workspace load_workspace(const std::string& dir) {
  const fs::path base(dir);
  if (!fs::exists(base / "meta.json"))
    throw Error(ErrorCode::ParseError, dir + " is not a flowres workspace");

  Workspace ws;
  load_regions(ws.store, (base / "regions.csv").string());
  load_codes(ws.store, (base / "codes.csv").string());
  // The sidecar never contains suppressed sentinels; policy is moot here.
  load_flows(ws.store, (base / "flows.csv").string(), SuppressedPolicy::Drop);
  if (fs::exists(base / "adjacency.csv")) {
    std::set<std::string> ids;
    for (const auto& [id, _] : ws.store.regions()) ids.insert(id);
    ws.adjacency = load_adjacency((base / "adjacency.csv").string(), ids);
  }
  if (fs::exists(base / "geometries.geojson"))
    ws.geometries = load_geojson_geometries((base / "geometries.geojson").string());
  return ws;
}

}  // namespace flowres
