#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "flowres/geo.hpp"
#include "flowres/graph_store.hpp"

namespace flowres {

enum class AtmMode { Sqrt, Unity };
enum class SelfFlowBeta { Adjacent, NonAdjacent };

struct ResilienceParams {
  AtmMode atm_mode = AtmMode::Sqrt;
  double ga_factor = 0.9;  // beta for adjacent pairs, in (0,1]
  SelfFlowBeta self_flow_beta = SelfFlowBeta::Adjacent;
  Direction direction = Direction::Export;
  bool include_self_flows = true;
};

struct PartnerDependence {
  double entropy_bits = 0.0;  // H
  double dependence = 0.0;    // D = 2^-H
};

struct LeafBreakdown {
  std::string code;
  double entropy_bits = 0.0;
  double dependence = 0.0;    // D_(i,c)
  double vprime = 0.0;        // V'_(i,c) = D_(i,c) * sum_j V'_(i->j,c)
  double flow_vprime_sum = 0.0;
  std::vector<std::pair<std::string, double>> partner_vprime;  // sorted by id
};

struct AggregateBreakdown {
  std::string code;
  double dependence = 0.0;  // D_(i,A)
  double vprime = 0.0;      // V'_(i,A)
  double share = 0.0;       // p_(i,A)
  std::vector<LeafBreakdown> leaves;
};

struct DependenceBreakdown {
  std::vector<AggregateBreakdown> aggregates;  // sorted by aggregate code
  double overall_dependence = 0.0;             // D_i
  double aggregate_vprime_sum = 0.0;           // sum_A V'_(i,A)
};

struct NodeResilienceReport {
  std::string node;
  double resilience = 0.0;   // R_i
  double vprime_total = 0.0; // V'_i
  double influence = 0.0;    // I_i, filled by node_influence
  DependenceBreakdown breakdown;
};

struct DirectionResilience {
  double r_net = 0.0;
  std::string argmax_node;
  double max_influence = 0.0;
};

struct NetworkResilienceReport {
  DirectionResilience import_side;
  DirectionResilience export_side;
  double overall = 0.0;  // (R_in + R_out) / 2
};

/// V * alpha * beta. alpha = 1 when atm < 1 mile or mode is Unity, else
/// sqrt(atm); beta = ga_factor when adjacent, else 1.
double adjusted_value(double value, double atm, bool adjacent,
                      const ResilienceParams& params);

/// Shannon entropy (bits) and dependence D = 2^-H of one partner value
/// distribution. Throws AllZero when every value is 0.
PartnerDependence partner_dependence(std::span<const double> adjusted_values);

/// Entropy-style aggregation over a set of leaf codes under one aggregate.
/// Each entry is (D_(i,c), sum_j V'_(i->j,c)). Returns (D_(i,A), V'_(i,A)).
std::pair<double, double> aggregate_dependence(
    std::span<const std::pair<double, double>> leaf_entries);

/// Full bottom-up chain for one focal node in a view. Throws NoFlows when
/// the node has no positive-value flow.
NodeResilienceReport node_resilience(const NetworkView& view,
                                     const std::string& node,
                                     const GraphStore& store,
                                     const AdjacencyIndex& adjacency,
                                     const ResilienceParams& params);

/// Reports for every node in the view that has positive flow, sorted by id.
std::vector<NodeResilienceReport> all_node_resilience(
    const NetworkView& view, const GraphStore& store,
    const AdjacencyIndex& adjacency, const ResilienceParams& params);

/// Fills each report's influence I_i = R_i V'_i / sum(R V'). Throws
/// DegenerateNetwork when every R_i is 0.
void node_influence(std::vector<NodeResilienceReport>& reports);

/// R_net per direction (1 - max I, argmax ties broken by node id) and the
/// overall mean of both directions.
NetworkResilienceReport network_resilience(const NetworkView& import_view,
                                           const NetworkView& export_view,
                                           const GraphStore& store,
                                           const AdjacencyIndex& adjacency,
                                           ResilienceParams params);

}  // namespace flowres
