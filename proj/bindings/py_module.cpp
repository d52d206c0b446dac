#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "flowres/errors.hpp"
#include "flowres/geo.hpp"
#include "flowres/graph_store.hpp"
#include "flowres/ingest.hpp"
#include "flowres/metrics.hpp"
#include "flowres/query.hpp"
#include "flowres/workspace.hpp"

namespace py = pybind11;
using namespace flowres;

PYBIND11_MODULE(_core, m) {
  m.doc() = "commodity flow network resilience core";

  py::register_exception<Error>(m, "FlowresError");

  py::enum_<RegionLevel>(m, "RegionLevel")
      .value("STATE", RegionLevel::State)
      .value("DIVISION", RegionLevel::Division)
      .value("REGION", RegionLevel::Region);
  py::enum_<Direction>(m, "Direction")
      .value("IMPORT", Direction::Import)
      .value("EXPORT", Direction::Export);
  py::enum_<AtmMode>(m, "AtmMode")
      .value("SQRT", AtmMode::Sqrt)
      .value("UNITY", AtmMode::Unity);
  py::enum_<SelfFlowBeta>(m, "SelfFlowBeta")
      .value("ADJACENT", SelfFlowBeta::Adjacent)
      .value("NONADJACENT", SelfFlowBeta::NonAdjacent);
  py::enum_<SuppressedPolicy>(m, "SuppressedPolicy")
      .value("DROP", SuppressedPolicy::Drop)
      .value("ZERO", SuppressedPolicy::Zero);

  py::class_<RegionNode>(m, "RegionNode")
      .def(py::init([](std::string id, std::string name, RegionLevel level,
                       std::optional<std::string> parent_id,
                       std::string feature_code) {
             RegionNode n;
             n.id = std::move(id);
             n.name = std::move(name);
             n.level = level;
             n.parent_id = std::move(parent_id);
             n.feature_code = std::move(feature_code);
             return n;
           }),
           py::arg("id"), py::arg("name"), py::arg("level"),
           py::arg("parent_id") = std::nullopt, py::arg("feature_code") = "")
      .def_readwrite("id", &RegionNode::id)
      .def_readwrite("name", &RegionNode::name)
      .def_readwrite("level", &RegionNode::level)
      .def_readwrite("parent_id", &RegionNode::parent_id)
      .def_readwrite("feature_code", &RegionNode::feature_code);

  py::class_<CommodityCode>(m, "CommodityCode")
      .def(py::init([](std::string code, std::string description,
                       std::optional<std::string> parent, bool is_aggregate) {
             CommodityCode c;
             c.code = std::move(code);
             c.description = std::move(description);
             c.parent = std::move(parent);
             c.is_aggregate = is_aggregate;
             return c;
           }),
           py::arg("code"), py::arg("description") = "",
           py::arg("parent") = std::nullopt, py::arg("is_aggregate") = false)
      .def_readwrite("code", &CommodityCode::code)
      .def_readwrite("description", &CommodityCode::description)
      .def_readwrite("parent", &CommodityCode::parent)
      .def_readwrite("is_aggregate", &CommodityCode::is_aggregate);

  py::class_<CommodityFlow>(m, "CommodityFlow")
      .def(py::init([](std::string origin, std::string dest, std::string code,
                       int year, double value, double avg_mileage,
                       std::optional<double> weight) {
             CommodityFlow f;
             f.origin = std::move(origin);
             f.dest = std::move(dest);
             f.code = std::move(code);
             f.year = year;
             f.value = value;
             f.avg_mileage = avg_mileage;
             f.weight = weight;
             return f;
           }),
           py::arg("origin"), py::arg("dest"), py::arg("code"), py::arg("year"),
           py::arg("value"), py::arg("avg_mileage"), py::arg("weight") = std::nullopt)
      .def_readwrite("origin", &CommodityFlow::origin)
      .def_readwrite("dest", &CommodityFlow::dest)
      .def_readwrite("code", &CommodityFlow::code)
      .def_readwrite("year", &CommodityFlow::year)
      .def_readwrite("value", &CommodityFlow::value)
      .def_readwrite("avg_mileage", &CommodityFlow::avg_mileage);

  py::class_<NetworkView>(m, "NetworkView")
      .def_property_readonly("year", &NetworkView::year)
      .def_property_readonly("level", &NetworkView::level)
      .def_property_readonly("direction", &NetworkView::direction)
      .def_property_readonly("flow_count", &NetworkView::flow_count)
      .def("nodes", &NetworkView::nodes);

  py::class_<GraphStore>(m, "GraphStore")
      .def(py::init<>())
      .def("upsert_region", &GraphStore::upsert_region)
      .def("upsert_code", &GraphStore::upsert_code)
      .def("add_flow", &GraphStore::add_flow)
      .def("aggregate_of", &GraphStore::aggregate_of)
      .def("ancestor_at", &GraphStore::ancestor_at)
      .def("snapshot_view", &GraphStore::snapshot_view, py::arg("year"),
           py::arg("level"), py::arg("direction"), py::arg("include_self_flows") = true)
      .def("years_at", &GraphStore::years_at)
      .def("region_count", [](const GraphStore& s) { return s.regions().size(); })
      .def("flow_count", [](const GraphStore& s) { return s.flows().size(); })
      .def("export_turtle", [](const GraphStore& s) {
        std::ostringstream out;
        s.export_turtle(out);
        return out.str();
      });

  py::class_<AdjacencyIndex>(m, "AdjacencyIndex")
      .def(py::init<>())
      .def("add", &AdjacencyIndex::add)
      .def("is_adjacent", &AdjacencyIndex::is_adjacent)
      .def("pairs", &AdjacencyIndex::pairs)
      .def_property_readonly("pair_count", &AdjacencyIndex::pair_count);

  py::class_<ResilienceParams>(m, "ResilienceParams")
      .def(py::init<>())
      .def_readwrite("atm_mode", &ResilienceParams::atm_mode)
      .def_readwrite("ga_factor", &ResilienceParams::ga_factor)
      .def_readwrite("self_flow_beta", &ResilienceParams::self_flow_beta)
      .def_readwrite("direction", &ResilienceParams::direction)
      .def_readwrite("include_self_flows", &ResilienceParams::include_self_flows);

  py::class_<LeafBreakdown>(m, "LeafBreakdown")
      .def_readonly("code", &LeafBreakdown::code)
      .def_readonly("entropy_bits", &LeafBreakdown::entropy_bits)
      .def_readonly("dependence", &LeafBreakdown::dependence)
      .def_readonly("vprime", &LeafBreakdown::vprime)
      .def_readonly("flow_vprime_sum", &LeafBreakdown::flow_vprime_sum)
      .def_readonly("partner_vprime", &LeafBreakdown::partner_vprime);

  py::class_<AggregateBreakdown>(m, "AggregateBreakdown")
      .def_readonly("code", &AggregateBreakdown::code)
      .def_readonly("dependence", &AggregateBreakdown::dependence)
      .def_readonly("vprime", &AggregateBreakdown::vprime)
      .def_readonly("share", &AggregateBreakdown::share)
      .def_readonly("leaves", &AggregateBreakdown::leaves);

  py::class_<DependenceBreakdown>(m, "DependenceBreakdown")
      .def_readonly("aggregates", &DependenceBreakdown::aggregates)
      .def_readonly("overall_dependence", &DependenceBreakdown::overall_dependence)
      .def_readonly("aggregate_vprime_sum", &DependenceBreakdown::aggregate_vprime_sum);

  py::class_<NodeResilienceReport>(m, "NodeResilienceReport")
      .def_readonly("node", &NodeResilienceReport::node)
      .def_readonly("resilience", &NodeResilienceReport::resilience)
      .def_readonly("vprime_total", &NodeResilienceReport::vprime_total)
      .def_readonly("influence", &NodeResilienceReport::influence)
      .def_readonly("breakdown", &NodeResilienceReport::breakdown);

  py::class_<DirectionResilience>(m, "DirectionResilience")
      .def_readonly("r_net", &DirectionResilience::r_net)
      .def_readonly("argmax_node", &DirectionResilience::argmax_node)
      .def_readonly("max_influence", &DirectionResilience::max_influence);

  py::class_<NetworkResilienceReport>(m, "NetworkResilienceReport")
      .def_readonly("import_side", &NetworkResilienceReport::import_side)
      .def_readonly("export_side", &NetworkResilienceReport::export_side)
      .def_readonly("overall", &NetworkResilienceReport::overall);

  m.def("adjusted_value", &adjusted_value, py::arg("value"), py::arg("atm"),
        py::arg("adjacent"), py::arg("params") = ResilienceParams{});
  m.def("partner_dependence", [](const std::vector<double>& values) {
    const PartnerDependence pd = partner_dependence(values);
    return std::make_pair(pd.entropy_bits, pd.dependence);
  });
  m.def("aggregate_dependence",
        [](const std::vector<std::pair<double, double>>& entries) {
          return aggregate_dependence(entries);
        });
  m.def("node_resilience", &node_resilience, py::arg("view"), py::arg("node"),
        py::arg("store"), py::arg("adjacency"), py::arg("params") = ResilienceParams{});
  m.def("all_node_resilience", &all_node_resilience, py::arg("view"), py::arg("store"),
        py::arg("adjacency"), py::arg("params") = ResilienceParams{});
  m.def("node_influence", [](std::vector<NodeResilienceReport> reports) {
    node_influence(reports);
    return reports;
  });
  m.def("network_resilience", &network_resilience, py::arg("import_view"),
        py::arg("export_view"), py::arg("store"), py::arg("adjacency"),
        py::arg("params") = ResilienceParams{});

  m.def("load_regions", &load_regions);
  m.def("load_codes", &load_codes);
  m.def("load_flows",
        [](GraphStore& store, const std::string& path, SuppressedPolicy policy) {
          const auto r = load_flows(store, path, policy);
          return std::make_pair(r.stored, r.dropped);
        },
        py::arg("store"), py::arg("path"), py::arg("policy") = SuppressedPolicy::Drop);
  m.def("rollup",
        [](GraphStore& store, RegionLevel source, RegionLevel target, int year,
           bool keep_self_flows) {
          RollupPolicy policy;
          policy.target_level = target;
          policy.self_flow_handling =
              keep_self_flows ? SelfFlowHandling::Keep : SelfFlowHandling::Drop;
          return rollup(store, source, policy, year);
        },
        py::arg("store"), py::arg("source_level"), py::arg("target_level"),
        py::arg("year"), py::arg("keep_self_flows") = true);

  m.def("load_adjacency",
        [](const std::string& path, const std::set<std::string>& known) {
          return load_adjacency(path, known);
        },
        py::arg("path"), py::arg("known_ids") = std::set<std::string>{});
  m.def("load_geojson_geometries", &load_geojson_geometries);
  m.def("derive_adjacency",
        [](const std::map<std::string, Geometry>& geoms, double tol,
           bool require_shared_edge) {
          return derive_adjacency(geoms, tol, {}, require_shared_edge);
        },
        py::arg("geometries"), py::arg("tolerance_deg") = 1e-6,
        py::arg("require_shared_edge") = false);

  py::class_<Geometry>(m, "Geometry")
      .def(py::init([](const std::vector<std::vector<std::vector<std::pair<double, double>>>>& polys) {
             Geometry g;
             for (const auto& poly : polys) {
               Polygon p;
               for (const auto& ring : poly) {
                 Ring r;
                 for (const auto& [x, y] : ring) r.push_back({x, y});
                 p.push_back(std::move(r));
               }
               g.polygons.push_back(std::move(p));
             }
             return g;
           }),
           py::arg("polygons"));
  m.def("polygons_meet",
        [](const Geometry& a, const Geometry& b, double tol, bool require_shared_edge) {
          return polygons_meet(a, b, {tol, require_shared_edge});
        },
        py::arg("a"), py::arg("b"), py::arg("tolerance_deg") = 1e-6,
        py::arg("require_shared_edge") = false);

  py::class_<QueryRequest>(m, "QueryRequest")
      .def(py::init<>())
      .def_readwrite("years", &QueryRequest::years)
      .def_readwrite("level", &QueryRequest::level)
      .def_readwrite("atm_mode", &QueryRequest::atm_mode)
      .def_readwrite("ga_factor", &QueryRequest::ga_factor)
      .def_readwrite("top_k", &QueryRequest::top_k)
      .def_readwrite("node_filter", &QueryRequest::node_filter)
      .def_readwrite("direction", &QueryRequest::direction)
      .def_readwrite("include_self_flows", &QueryRequest::include_self_flows);

  py::class_<RankedNode>(m, "RankedNode")
      .def_readonly("node", &RankedNode::node)
      .def_readonly("name", &RankedNode::name)
      .def_readonly("resilience", &RankedNode::resilience)
      .def_readonly("vprime", &RankedNode::vprime)
      .def_readonly("influence", &RankedNode::influence);

  py::class_<RankDelta>(m, "RankDelta")
      .def_readonly("node", &RankDelta::node)
      .def_readonly("rank_a", &RankDelta::rank_a)
      .def_readonly("rank_b", &RankDelta::rank_b)
      .def_readonly("delta", &RankDelta::delta);

  py::class_<YearNetworkResilience>(m, "YearNetworkResilience")
      .def_readonly("year", &YearNetworkResilience::year)
      .def_readonly("report", &YearNetworkResilience::report);

  m.def("node_resilience_query", &node_resilience_query);
  m.def("influence_query", &influence_query);
  m.def("network_resilience_query", &network_resilience_query);
  m.def("rank_delta_query", &rank_delta_query);

  py::class_<Workspace>(m, "Workspace")
      .def(py::init<>())
      .def_readwrite("store", &Workspace::store)
      .def_readwrite("adjacency", &Workspace::adjacency);
  m.def("save_workspace", &save_workspace);
  m.def("load_workspace", &load_workspace);
}
