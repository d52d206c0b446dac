#include "flowres/query.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <json.hpp>

#include "flowres/csv.hpp"
#include "flowres/errors.hpp"
#include "format_util.hpp"

namespace flowres {

AtmMode parse_atm_mode(const std::string& token) {
  if (token == "sqrt") return AtmMode::Sqrt;
  if (token == "unity") return AtmMode::Unity;
  throw Error(ErrorCode::BadParams, "atm mode must be 'sqrt' or 'unity', got '" + token + "'");
}

namespace {

ResilienceParams params_from(const QueryRequest& req) {
  ResilienceParams params;
  params.atm_mode = req.atm_mode;
  params.ga_factor = req.ga_factor;
  params.direction = req.direction;
  params.include_self_flows = req.include_self_flows;
  return params;
}

void validate(const QueryRequest& req) {
  if (req.years.empty())
    throw Error(ErrorCode::BadParams, "at least one year required");
  if (req.top_k && *req.top_k < 1)
    throw Error(ErrorCode::BadParams, "top-k must be >= 1");
  if (req.ga_factor <= 0.0 || req.ga_factor > 1.0)
    throw Error(ErrorCode::BadParams, "ga factor must lie in (0, 1]");
}

std::vector<RankedNode> compute_ranked(const GraphStore& store,
                                       const AdjacencyIndex& adjacency,
                                       const QueryRequest& req, int year) {
  const NetworkView view =
      store.snapshot_view(year, req.level, req.direction, req.include_self_flows);
  auto reports = all_node_resilience(view, store, adjacency, params_from(req));
  if (reports.empty())
    throw Error(ErrorCode::EmptySelection, "no node with positive flow");
  node_influence(reports);

  std::vector<RankedNode> rows;
  rows.reserve(reports.size());
  for (const auto& r : reports) {
    const RegionNode* region = store.find_region(r.node);
    rows.push_back({r.node, region ? region->name : r.node, r.resilience,
                    r.vprime_total, r.influence});
  }
  return rows;
}

void truncate(std::vector<RankedNode>& rows, const QueryRequest& req) {
  if (req.node_filter) {
    std::erase_if(rows, [&](const RankedNode& r) { return r.node != *req.node_filter; });
    if (rows.empty())
      throw Error(ErrorCode::EmptySelection, "node '" + *req.node_filter + "' not in result");
  }
  if (req.top_k && rows.size() > static_cast<size_t>(*req.top_k))
    rows.resize(static_cast<size_t>(*req.top_k));
}

}  // namespace

std::vector<RankedNode> node_resilience_query(const GraphStore& store,
                                              const AdjacencyIndex& adjacency,
                                              const QueryRequest& req) {
  validate(req);
  auto rows = compute_ranked(store, adjacency, req, req.years.front());
  std::sort(rows.begin(), rows.end(), [](const RankedNode& a, const RankedNode& b) {
    if (a.resilience != b.resilience) return a.resilience > b.resilience;
    return a.node < b.node;
  });
  truncate(rows, req);
  return rows;
}

std::vector<RankedNode> influence_query(const GraphStore& store,
                                        const AdjacencyIndex& adjacency,
                                        const QueryRequest& req) {
  validate(req);
  auto rows = compute_ranked(store, adjacency, req, req.years.front());
  std::sort(rows.begin(), rows.end(), [](const RankedNode& a, const RankedNode& b) {
    if (a.influence != b.influence) return a.influence > b.influence;
    return a.node < b.node;
  });
  truncate(rows, req);
  return rows;
}

std::vector<YearNetworkResilience> network_resilience_query(
    const GraphStore& store, const AdjacencyIndex& adjacency,
    const QueryRequest& req) {
  validate(req);
  std::vector<YearNetworkResilience> out;
  for (int year : req.years) {
    const NetworkView imports =
        store.snapshot_view(year, req.level, Direction::Import, req.include_self_flows);
    const NetworkView exports =
        store.snapshot_view(year, req.level, Direction::Export, req.include_self_flows);
    out.push_back({year, network_resilience(imports, exports, store, adjacency,
                                            params_from(req))});
  }
  return out;
}

std::vector<RankDelta> rank_delta_query(const GraphStore& store,
                                        const AdjacencyIndex& adjacency,
                                        const QueryRequest& req) {
  validate(req);
  if (req.years.size() != 2)
    throw Error(ErrorCode::BadParams, "rank_delta takes exactly two years");

  auto rank_map = [&](int year) {
    QueryRequest single = req;
    single.years = {year};
    single.top_k.reset();
    single.node_filter.reset();
    auto rows = influence_query(store, adjacency, single);
    std::map<std::string, int> ranks;
    for (size_t i = 0; i < rows.size(); ++i)
      ranks[rows[i].node] = static_cast<int>(i) + 1;
    return ranks;
  };
  const auto ranks_a = rank_map(req.years[0]);
  const auto ranks_b = rank_map(req.years[1]);

  std::map<std::string, RankDelta> joined;
  for (const auto& [node, rank] : ranks_a) joined[node].rank_a = rank;
  for (const auto& [node, rank] : ranks_b) joined[node].rank_b = rank;
  std::vector<RankDelta> out;
  for (auto& [node, rd] : joined) {
    rd.node = node;
    if (rd.rank_a && rd.rank_b) rd.delta = *rd.rank_a - *rd.rank_b;
    out.push_back(rd);
  }
  // Complete rows first, sorted by rank in year b; null-rank rows last by id.
  std::sort(out.begin(), out.end(), [](const RankDelta& a, const RankDelta& b) {
    const bool a_full = a.rank_a && a.rank_b;
    const bool b_full = b.rank_a && b.rank_b;
    if (a_full != b_full) return a_full;
    if (a.rank_b && b.rank_b && *a.rank_b != *b.rank_b) return *a.rank_b < *b.rank_b;
    return a.node < b.node;
  });
  return out;
}

std::string format_percent_change(double a, double b) {
  const double pct = (b - a) / a * 100.0;
  std::string s = detail::fmt_fixed(std::abs(pct), 1);
  // -0.0 after rounding counts as no change
  if (s == "0.0") return "+0.0%";
  return (pct < 0 ? "-" : "+") + s + "%";
}

void write_ranked_csv(std::ostream& out, const std::vector<RankedNode>& rows) {
  out << "node_id,name,R,V_prime,I\n";
  for (const RankedNode& r : rows)
    out << csv::quote(r.node) << ',' << csv::quote(r.name) << ','
        << detail::fmt_fixed(r.resilience, 6) << ','
        << detail::fmt_fixed(r.vprime, 6) << ','
        << detail::fmt_fixed(r.influence, 6) << '\n';
}

std::string ranked_to_json(const std::vector<RankedNode>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const RankedNode& r : rows)
    arr.push_back({{"node_id", r.node},
                   {"name", r.name},
                   {"R", r.resilience},
                   {"V_prime", r.vprime},
                   {"I", r.influence}});
  return arr.dump(2) + "\n";
}

void write_rank_delta_csv(std::ostream& out, const std::vector<RankDelta>& rows) {
  out << "node_id,rank_a,rank_b,delta\n";
  for (const RankDelta& r : rows) {
    out << csv::quote(r.node) << ',';
    if (r.rank_a) out << *r.rank_a;
    out << ',';
    if (r.rank_b) out << *r.rank_b;
    out << ',';
    if (r.delta) out << *r.delta;
    out << '\n';
  }
}

void write_network_csv(std::ostream& out,
                       const std::vector<std::pair<RegionLevel,
                           std::vector<YearNetworkResilience>>>& matrix) {
  if (matrix.empty()) return;
  const auto& years = matrix.front().second;
  out << "level";
  for (const auto& y : years) out << ",R_net_" << y.year;
  if (years.size() >= 2) out << ",change_pct";
  out << '\n';
  for (const auto& [level, cells] : matrix) {
    out << to_string(level);
    for (const auto& y : cells) out << ',' << detail::fmt_fixed(y.report.overall, 6);
    if (cells.size() >= 2)
      out << ',' << format_percent_change(cells.front().report.overall,
                                          cells.back().report.overall);
    out << '\n';
  }
}

std::string network_to_json(
    const std::vector<std::pair<RegionLevel,
        std::vector<YearNetworkResilience>>>& matrix) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [level, cells] : matrix) {
    nlohmann::json row{{"level", to_string(level)}, {"years", nlohmann::json::array()}};
    for (const auto& y : cells) {
      row["years"].push_back(
          {{"year", y.year},
           {"R_net", y.report.overall},
           {"R_net_import", y.report.import_side.r_net},
           {"R_net_export", y.report.export_side.r_net},
           {"argmax_import", y.report.import_side.argmax_node},
           {"argmax_export", y.report.export_side.argmax_node}});
    }
    if (cells.size() >= 2)
      row["change_pct"] = format_percent_change(cells.front().report.overall,
                                                cells.back().report.overall);
    arr.push_back(std::move(row));
  }
  return arr.dump(2) + "\n";
}

}  // namespace flowres
