#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "flowres/metrics.hpp"

namespace flowres {

enum class QueryFunction {
  NodeExportResilience,
  NodeImportResilience,
  NetworkResilience,
  Influence,
  RankDelta,
};

struct QueryRequest {
  QueryFunction function = QueryFunction::NodeExportResilience;
  std::vector<int> years;  // nonempty; rank_delta takes exactly two
  RegionLevel level = RegionLevel::State;
  AtmMode atm_mode = AtmMode::Sqrt;   // token "sqrt" | "unity"
  double ga_factor = 0.9;
  std::optional<int> top_k;
  std::optional<std::string> node_filter;
  Direction direction = Direction::Export;
  bool include_self_flows = true;
};

struct RankedNode {
  std::string node;
  std::string name;
  double resilience = 0.0;
  double vprime = 0.0;
  double influence = 0.0;
};

struct RankDelta {
  std::string node;
  std::optional<int> rank_a;  // 1-based
  std::optional<int> rank_b;
  std::optional<int> delta;   // rank_a - rank_b
};

struct YearNetworkResilience {
  int year = 0;
  NetworkResilienceReport report;
};

AtmMode parse_atm_mode(const std::string& token);

/// Ranked node resilience for req.years.front(), descending by R, ties by
/// node id, truncated to top_k. Recomputed on every call.
std::vector<RankedNode> node_resilience_query(const GraphStore& store,
                                              const AdjacencyIndex& adjacency,
                                              const QueryRequest& req);

/// Same rows ranked by influence.
std::vector<RankedNode> influence_query(const GraphStore& store,
                                        const AdjacencyIndex& adjacency,
                                        const QueryRequest& req);

/// One NetworkResilienceReport per requested year.
std::vector<YearNetworkResilience> network_resilience_query(
    const GraphStore& store, const AdjacencyIndex& adjacency,
    const QueryRequest& req);

/// Influence-rank comparison between req.years[0] and req.years[1]. Nodes
/// missing from one year get a null rank and sort after complete rows.
std::vector<RankDelta> rank_delta_query(const GraphStore& store,
                                        const AdjacencyIndex& adjacency,
                                        const QueryRequest& req);

/// Percent change (b-a)/a*100 rounded to one decimal, e.g. "+1.5%".
std::string format_percent_change(double a, double b);

// Serialization. CSV uses 6 decimal places; JSON keeps full precision.
void write_ranked_csv(std::ostream& out, const std::vector<RankedNode>& rows);
std::string ranked_to_json(const std::vector<RankedNode>& rows);
void write_rank_delta_csv(std::ostream& out, const std::vector<RankDelta>& rows);
void write_network_csv(std::ostream& out,
                       const std::vector<std::pair<RegionLevel,
                           std::vector<YearNetworkResilience>>>& matrix);
std::string network_to_json(
    const std::vector<std::pair<RegionLevel,
        std::vector<YearNetworkResilience>>>& matrix);

}  // namespace flowres
