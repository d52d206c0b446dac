#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "flowres/errors.hpp"
#include "flowres/ingest.hpp"
#include "flowres/query.hpp"
#include "flowres/workspace.hpp"

namespace {

using namespace flowres;

std::vector<int> parse_year_list(const std::string& csv_years) {
  std::vector<int> years;
  std::stringstream ss(csv_years);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    years.push_back(std::stoi(tok));
  }
  if (years.empty()) throw Error(ErrorCode::BadParams, "no years given");
  return years;
}

std::vector<RegionLevel> parse_level_list(const std::string& csv_levels) {
  std::vector<RegionLevel> levels;
  std::stringstream ss(csv_levels);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    levels.push_back(parse_region_level(tok));
  }
  if (levels.empty()) throw Error(ErrorCode::BadParams, "no levels given");
  return levels;
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  out << text;
  if (!out) throw Error(ErrorCode::SinkWrite, out_path);
}

std::string default_workspace(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("FLOWRES_WORKSPACE")) return env;
  return "workspace";
}

struct CommonQueryFlags {
  std::string workspace;
  int year = 0;
  std::string level = "state";
  std::string direction = "export";
  std::string atm = "sqrt";
  double ga = 0.9;
  int top = 0;
  std::string out_format = "csv";
  std::string out_path;
  bool exclude_self = false;

  QueryRequest to_request() const {
    QueryRequest req;
    req.years = {year};
    req.level = parse_region_level(level);
    req.direction = parse_direction(direction);
    req.atm_mode = parse_atm_mode(atm);
    req.ga_factor = ga;
    if (top > 0) req.top_k = top;
    req.include_self_flows = !exclude_self;
    return req;
  }
};

void add_common_query_flags(CLI::App* cmd, CommonQueryFlags& flags) {
  cmd->add_option("--workspace", flags.workspace, "workspace directory");
  cmd->add_option("--year", flags.year, "calendar year")->required();
  cmd->add_option("--level", flags.level, "state|division|region");
  cmd->add_option("--direction", flags.direction, "import|export");
  cmd->add_option("--atm", flags.atm, "sqrt|unity");
  cmd->add_option("--ga", flags.ga, "adjacency factor in (0,1]");
  cmd->add_option("--top", flags.top, "truncate to top-k rows");
  cmd->add_option("--out", flags.out_format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--output", flags.out_path, "output file (default stdout)");
  cmd->add_flag("--exclude-self-flows", flags.exclude_self,
                "drop intra-unit flows from the view");
}

std::string ranked_output(const std::vector<RankedNode>& rows, const std::string& format) {
  if (format == "json") return ranked_to_json(rows);
  std::ostringstream out;
  write_ranked_csv(out, rows);
  return out.str();
}

int run(int argc, char** argv) {
  CLI::App app{"commodity flow network resilience toolkit"};
  app.require_subcommand(1);

  // ingest
  auto* ingest = app.add_subcommand("ingest", "load CSV/GeoJSON data into a workspace");
  std::string regions_path, codes_path, flows_path, adjacency_path, geojson_path;
  std::string suppressed = "drop";
  std::string ingest_ws;
  bool derive_adj = false;
  double derive_tolerance = 1e-6;
  ingest->add_option("--regions", regions_path, "regions.csv")->required();
  ingest->add_option("--codes", codes_path, "codes.csv")->required();
  ingest->add_option("--flows", flows_path, "flows.csv")->required();
  ingest->add_option("--adjacency", adjacency_path, "adjacency.csv");
  ingest->add_option("--geojson", geojson_path, "geometries as GeoJSON");
  ingest->add_flag("--derive-adjacency", derive_adj,
                   "derive adjacency from --geojson via the Meet predicate");
  ingest->add_option("--tolerance", derive_tolerance, "boundary tolerance, degrees");
  ingest->add_option("--suppressed", suppressed, "drop|zero")
      ->check(CLI::IsMember({"drop", "zero"}));
  ingest->add_option("--workspace", ingest_ws, "workspace directory");

  // resilience / influence
  auto* resilience = app.add_subcommand("resilience", "ranked node-level resilience");
  CommonQueryFlags res_flags;
  add_common_query_flags(resilience, res_flags);

  auto* influence = app.add_subcommand("influence", "ranked node influence");
  CommonQueryFlags inf_flags;
  add_common_query_flags(influence, inf_flags);

  // network
  auto* network = app.add_subcommand("network", "network-level resilience matrix");
  std::string net_ws, net_years, net_levels = "state";
  std::string net_atm = "sqrt", net_out_format = "csv", net_out_path;
  double net_ga = 0.9;
  bool net_exclude_self = false;
  network->add_option("--workspace", net_ws, "workspace directory");
  network->add_option("--years", net_years, "comma-separated years")->required();
  network->add_option("--levels", net_levels, "comma-separated levels");
  network->add_option("--atm", net_atm, "sqrt|unity");
  network->add_option("--ga", net_ga, "adjacency factor");
  network->add_option("--out", net_out_format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  network->add_option("--output", net_out_path, "output file (default stdout)");
  network->add_flag("--exclude-self-flows", net_exclude_self, "drop intra-unit flows");

  // rank-delta
  auto* rank_delta = app.add_subcommand("rank-delta", "influence rank change between two years");
  std::string rd_ws, rd_years, rd_level = "state", rd_direction = "export";
  std::string rd_atm = "sqrt", rd_out_path;
  double rd_ga = 0.9;
  rank_delta->add_option("--workspace", rd_ws, "workspace directory");
  rank_delta->add_option("--years", rd_years, "two comma-separated years")->required();
  rank_delta->add_option("--level", rd_level, "state|division|region");
  rank_delta->add_option("--direction", rd_direction, "import|export");
  rank_delta->add_option("--atm", rd_atm, "sqrt|unity");
  rank_delta->add_option("--ga", rd_ga, "adjacency factor");
  rank_delta->add_option("--output", rd_out_path, "output file (default stdout)");

  // export
  auto* exp = app.add_subcommand("export", "dump the graph or a metric layer");
  std::string ex_ws, ex_format, ex_metric = "r", ex_level = "state";
  std::string ex_direction = "export", ex_atm = "sqrt", ex_out_path;
  int ex_year = 0;
  double ex_ga = 0.9;
  exp->add_option("--format", ex_format, "turtle|geojson|csv")
      ->required()
      ->check(CLI::IsMember({"turtle", "geojson", "csv"}));
  exp->add_option("--metric", ex_metric, "r|i (rank basis for geojson)")
      ->check(CLI::IsMember({"r", "i"}));
  exp->add_option("--workspace", ex_ws, "workspace directory");
  exp->add_option("--year", ex_year, "calendar year");
  exp->add_option("--level", ex_level, "state|division|region");
  exp->add_option("--direction", ex_direction, "import|export");
  exp->add_option("--atm", ex_atm, "sqrt|unity");
  exp->add_option("--ga", ex_ga, "adjacency factor");
  exp->add_option("--output", ex_out_path, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (*ingest) {
    Workspace ws;
    const size_t n_regions = load_regions(ws.store, regions_path);
    const size_t n_codes = load_codes(ws.store, codes_path);
    const auto flows = load_flows(ws.store, flows_path,
                                  suppressed == "zero" ? SuppressedPolicy::Zero
                                                       : SuppressedPolicy::Drop);
    if (!geojson_path.empty())
      ws.geometries = load_geojson_geometries(geojson_path);
    if (!adjacency_path.empty()) {
      std::set<std::string> ids;
      for (const auto& [id, _] : ws.store.regions()) ids.insert(id);
      ws.adjacency = load_adjacency(adjacency_path, ids);
    } else if (derive_adj) {
      if (ws.geometries.empty())
        throw Error(ErrorCode::MissingGeometry, "--derive-adjacency needs --geojson");
      ws.adjacency = derive_adjacency(ws.geometries, derive_tolerance);
    }
    save_workspace(ws, default_workspace(ingest_ws));
    std::cout << "regions=" << n_regions << " codes=" << n_codes
              << " flows=" << flows.stored << " dropped=" << flows.dropped
              << " adjacency_pairs=" << ws.adjacency.pair_count() << "\n";
    return 0;
  }

  if (*resilience || *influence) {
    const CommonQueryFlags& flags = *resilience ? res_flags : inf_flags;
    Workspace ws = load_workspace(default_workspace(flags.workspace));
    const QueryRequest req = flags.to_request();
    const auto rows = *resilience
                          ? node_resilience_query(ws.store, ws.adjacency, req)
                          : influence_query(ws.store, ws.adjacency, req);
    write_output(ranked_output(rows, flags.out_format), flags.out_path);
    return 0;
  }

  if (*network) {
    Workspace ws = load_workspace(default_workspace(net_ws));
    QueryRequest req;
    req.years = parse_year_list(net_years);
    req.atm_mode = parse_atm_mode(net_atm);
    req.ga_factor = net_ga;
    req.include_self_flows = !net_exclude_self;
    std::vector<std::pair<RegionLevel, std::vector<YearNetworkResilience>>> matrix;
    for (RegionLevel level : parse_level_list(net_levels)) {
      req.level = level;
      matrix.emplace_back(level, network_resilience_query(ws.store, ws.adjacency, req));
    }
    std::string text;
    if (net_out_format == "json") {
      text = network_to_json(matrix);
    } else {
      std::ostringstream out;
      write_network_csv(out, matrix);
      text = out.str();
    }
    write_output(text, net_out_path);
    return 0;
  }

  if (*rank_delta) {
    Workspace ws = load_workspace(default_workspace(rd_ws));
    QueryRequest req;
    req.years = parse_year_list(rd_years);
    req.level = parse_region_level(rd_level);
    req.direction = parse_direction(rd_direction);
    req.atm_mode = parse_atm_mode(rd_atm);
    req.ga_factor = rd_ga;
    const auto rows = rank_delta_query(ws.store, ws.adjacency, req);
    std::ostringstream out;
    write_rank_delta_csv(out, rows);
    write_output(out.str(), rd_out_path);
    return 0;
  }

  if (*exp) {
    Workspace ws = load_workspace(default_workspace(ex_ws));

    if (ex_format == "turtle") {
      std::ostringstream out;
      GraphStore annotated = ws.store;
      annotated.set_adjacency_pairs(ws.adjacency.pairs());
      annotated.export_turtle(out);
      write_output(out.str(), ex_out_path);
      return 0;
    }

    QueryRequest req;
    if (ex_year == 0)
      throw Error(ErrorCode::BadParams, "--year is required for metric exports");
    req.years = {ex_year};
    req.level = parse_region_level(ex_level);
    req.direction = parse_direction(ex_direction);
    req.atm_mode = parse_atm_mode(ex_atm);
    req.ga_factor = ex_ga;
    auto rows = ex_metric == "i" ? influence_query(ws.store, ws.adjacency, req)
                                 : node_resilience_query(ws.store, ws.adjacency, req);

    if (ex_format == "csv") {
      std::ostringstream out;
      out << "node_id,name,level,year,direction,R,V_prime,I\n";
      char buf[64];
      auto fixed6 = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.6f", v);
        return std::string(buf);
      };
      for (const auto& r : rows)
        out << r.node << ',' << r.name << ',' << to_string(req.level) << ','
            << ex_year << ',' << to_string(req.direction) << ','
            << fixed6(r.resilience) << ',' << fixed6(r.vprime) << ','
            << fixed6(r.influence) << '\n';
      write_output(out.str(), ex_out_path);
      return 0;
    }

    // geojson: annotate the workspace geometry layer with R, I, rank
    if (ws.geometries.empty())
      throw Error(ErrorCode::MissingGeometry, "workspace has no geometries.geojson");
    std::map<std::string, std::tuple<double, double, int>> metrics;
    for (size_t i = 0; i < rows.size(); ++i)
      metrics[rows[i].node] = {rows[i].resilience, rows[i].influence,
                               static_cast<int>(i) + 1};
    nlohmann::json fc{{"type", "FeatureCollection"},
                      {"features", nlohmann::json::array()}};
    std::ifstream in(std::filesystem::path(default_workspace(ex_ws)) /
                     "geometries.geojson");
    nlohmann::json source;
    in >> source;
    // Features sorted by id for deterministic output.
    std::map<std::string, nlohmann::json> by_id;
    for (auto& feature : source.at("features"))
      by_id[feature.at("properties").at("id").get<std::string>()] = feature;
    for (auto& [id, feature] : by_id) {
      auto it = metrics.find(id);
      if (it == metrics.end()) continue;  // no flows for this region/year
      const auto& [r, i, rank] = it->second;
      feature["properties"]["R"] = r;
      feature["properties"]["I"] = i;
      feature["properties"]["rank"] = rank;
      fc["features"].push_back(feature);
    }
    write_output(fc.dump(2) + "\n", ex_out_path);
    return 0;
  }

  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const flowres::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
