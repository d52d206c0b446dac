#include "flowres/metrics.hpp"

#include <cmath>

#include "flowres/errors.hpp"

namespace flowres {

namespace {

// H (bits) and D = 2^-H of a nonnegative weight vector with positive sum.
PartnerDependence entropy_dependence(std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0)
      throw Error(ErrorCode::NegativeValue, "negative weight in distribution");
    total += w;
  }
  if (total <= 0.0)
    throw Error(ErrorCode::AllZero, "all weights are zero");

  double entropy = 0.0;
  for (double w : weights) {
    if (w <= 0.0) continue;  // 0 * log2(0) := 0
    const double p = w / total;
    entropy -= p * std::log2(p);
  }
  if (entropy < 0.0) entropy = 0.0;  // guard tiny negative round-off
  return {entropy, std::exp2(-entropy)};
}

}  // namespace

double adjusted_value(double value, double atm, bool adjacent,
                      const ResilienceParams& params) {
  if (value < 0.0 || atm < 0.0)
    throw Error(ErrorCode::NegativeValue, "adjusted_value inputs must be nonnegative");
  const double alpha =
      (params.atm_mode == AtmMode::Unity || atm < 1.0) ? 1.0 : std::sqrt(atm);
  const double beta = adjacent ? params.ga_factor : 1.0;
  return value * alpha * beta;
}

PartnerDependence partner_dependence(std::span<const double> adjusted_values) {
  return entropy_dependence(adjusted_values);
}

std::pair<double, double> aggregate_dependence(
    std::span<const std::pair<double, double>> leaf_entries) {
  if (leaf_entries.empty())
    throw Error(ErrorCode::AllZero, "no leaf entries");

  std::vector<double> leaf_vprime;
  double total = 0.0;
  for (const auto& [dep, flow_sum] : leaf_entries) {
    const double v = dep * flow_sum;  // V'_(i,c)
    leaf_vprime.push_back(v);
    total += v;
  }
  const PartnerDependence pd = entropy_dependence(leaf_vprime);
  return {pd.dependence, pd.dependence * total};
}

NodeResilienceReport node_resilience(const NetworkView& view,
                                     const std::string& node,
                                     const GraphStore& store,
                                     const AdjacencyIndex& adjacency,
                                     const ResilienceParams& params) {
  if (params.ga_factor <= 0.0 || params.ga_factor > 1.0)
    throw Error(ErrorCode::BadParams, "ga_factor must lie in (0, 1]");

  const NetworkView::CodeGroup* codes = view.find_node(node);
  if (!codes)
    throw Error(ErrorCode::NoFlows, "node '" + node + "' has no flows in view");

  NodeResilienceReport report;
  report.node = node;

  // Leaf pass: adjusted flow values and per-code customer/supplier dependence.
  // Aggregates keyed by code; std::map keeps the deterministic order.
  std::map<std::string, std::vector<LeafBreakdown>> by_aggregate;
  double vprime_total = 0.0;

  for (const auto& [code, partner_flows] : *codes) {
    LeafBreakdown leaf;
    leaf.code = code;
    std::vector<double> values;
    for (const auto& pf : partner_flows) {
      const bool self = pf.partner == node;
      if (self && !params.include_self_flows) continue;
      const bool adjacent = self ? params.self_flow_beta == SelfFlowBeta::Adjacent
                                 : adjacency.is_adjacent(node, pf.partner);
      const double v =
          adjusted_value(pf.flow.value, pf.flow.avg_mileage, adjacent, params);
      leaf.partner_vprime.emplace_back(pf.partner, v);
      values.push_back(v);
      leaf.flow_vprime_sum += v;
    }
    if (leaf.flow_vprime_sum <= 0.0) continue;  // code absent for this node
    vprime_total += leaf.flow_vprime_sum;

    const PartnerDependence pd = partner_dependence(values);
    leaf.entropy_bits = pd.entropy_bits;
    leaf.dependence = pd.dependence;
    leaf.vprime = pd.dependence * leaf.flow_vprime_sum;
    by_aggregate[store.aggregate_of(code)].push_back(std::move(leaf));
  }

  if (vprime_total <= 0.0)
    throw Error(ErrorCode::NoFlows, "node '" + node + "' has no positive-value flow");

  // Aggregate pass, then the overall commodity-type dependence D_i.
  std::vector<double> aggregate_vprimes;
  for (auto& [agg_code, leaves] : by_aggregate) {
    std::vector<std::pair<double, double>> entries;
    for (const LeafBreakdown& leaf : leaves)
      entries.emplace_back(leaf.dependence, leaf.flow_vprime_sum);
    const auto [dep, vprime] = aggregate_dependence(entries);

    AggregateBreakdown agg;
    agg.code = agg_code;
    agg.dependence = dep;
    agg.vprime = vprime;
    agg.leaves = std::move(leaves);
    report.breakdown.aggregates.push_back(std::move(agg));
    aggregate_vprimes.push_back(vprime);
    report.breakdown.aggregate_vprime_sum += vprime;
  }

  const PartnerDependence overall = entropy_dependence(aggregate_vprimes);
  report.breakdown.overall_dependence = overall.dependence;
  for (AggregateBreakdown& agg : report.breakdown.aggregates)
    agg.share = agg.vprime / report.breakdown.aggregate_vprime_sum;

  report.vprime_total = vprime_total;
  report.resilience = 1.0 - overall.dependence *
                                report.breakdown.aggregate_vprime_sum / vprime_total;
  return report;
}

std::vector<NodeResilienceReport> all_node_resilience(
    const NetworkView& view, const GraphStore& store,
    const AdjacencyIndex& adjacency, const ResilienceParams& params) {
  std::vector<NodeResilienceReport> reports;
  for (const std::string& node : view.nodes()) {
    try {
      reports.push_back(node_resilience(view, node, store, adjacency, params));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoFlows) throw;
      // Nodes with no positive flow are excluded from the rankings.
    }
  }
  return reports;
}

void node_influence(std::vector<NodeResilienceReport>& reports) {
  double denom = 0.0;
  for (const NodeResilienceReport& r : reports) denom += r.resilience * r.vprime_total;
  if (denom <= 0.0)
    throw Error(ErrorCode::DegenerateNetwork, "every node has zero resilience");
  for (NodeResilienceReport& r : reports)
    r.influence = r.resilience * r.vprime_total / denom;
}

namespace {

DirectionResilience direction_resilience(const NetworkView& view,
                                         const GraphStore& store,
                                         const AdjacencyIndex& adjacency,
                                         const ResilienceParams& params) {
  auto reports = all_node_resilience(view, store, adjacency, params);
  if (reports.empty())
    throw Error(ErrorCode::NoFlows, "view has no node with positive flow");
  node_influence(reports);

  DirectionResilience out;
  // Reports are sorted by node id, so ties keep the lexicographically
  // smallest node.
  for (const NodeResilienceReport& r : reports) {
    if (out.argmax_node.empty() || r.influence > out.max_influence) {
      out.max_influence = r.influence;
      out.argmax_node = r.node;
    }
  }
  out.r_net = 1.0 - out.max_influence;
  return out;
}

}  // namespace

NetworkResilienceReport network_resilience(const NetworkView& import_view,
                                           const NetworkView& export_view,
                                           const GraphStore& store,
                                           const AdjacencyIndex& adjacency,
                                           ResilienceParams params) {
  NetworkResilienceReport report;
  params.direction = Direction::Import;
  report.import_side = direction_resilience(import_view, store, adjacency, params);
  params.direction = Direction::Export;
  report.export_side = direction_resilience(export_view, store, adjacency, params);
  report.overall = (report.import_side.r_net + report.export_side.r_net) / 2.0;
  return report;
}

}  // namespace flowres
