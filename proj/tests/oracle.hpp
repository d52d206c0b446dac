#pragma once

// Independent direct evaluation of the resilience formulas, used only to
// cross-check the engine. Deliberately written in a different style: string
// maps, pow-based products, no shared code with src/.

#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace oracle {

struct Flow {
  std::string origin;
  std::string dest;
  std::string code;
  double value = 0.0;
  double atm = 0.0;
};

struct Params {
  bool atm_sqrt = true;
  double ga = 0.9;
  bool include_self = true;
  bool self_adjacent = true;
};

struct Network {
  std::vector<Flow> flows;
  std::map<std::string, std::string> code_aggregate;       // leaf -> aggregate
  std::set<std::pair<std::string, std::string>> adjacent;  // both orders stored
  Params params;
};

inline bool is_adjacent(const Network& net, const std::string& a, const std::string& b) {
  return net.adjacent.count({a, b}) > 0;
}

inline double vprime_flow(const Network& net, const Flow& f) {
  double alpha = 1.0;
  if (net.params.atm_sqrt && f.atm >= 1.0) alpha = std::sqrt(f.atm);
  bool adj = f.origin == f.dest ? net.params.self_adjacent
                                : is_adjacent(net, f.origin, f.dest);
  return f.value * alpha * (adj ? net.params.ga : 1.0);
}

struct NodeResult {
  bool has_flows = false;
  double r = 0.0;
  double vprime = 0.0;
  std::map<std::string, double> leaf_dependence;   // per leaf code
  std::map<std::string, double> agg_dependence;    // per aggregate
  double overall_dependence = 0.0;
};

// pow-based weighted geometric mean: D = prod p^p over positive shares.
inline double geo_mean_dependence(const std::vector<double>& weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  double d = 1.0;
  for (double w : weights)
    if (w > 0.0) d *= std::pow(w / total, w / total);
  return d;
}

inline NodeResult node_result(const Network& net, const std::string& node,
                              bool exporting) {
  // leaf code -> partner -> V'
  std::map<std::string, std::map<std::string, double>> leaves;
  double vprime_total = 0.0;
  for (const Flow& f : net.flows) {
    const std::string& focal = exporting ? f.origin : f.dest;
    if (focal != node) continue;
    if (f.origin == f.dest && !net.params.include_self) continue;
    const std::string& partner = exporting ? f.dest : f.origin;
    const double vp = vprime_flow(net, f);
    leaves[f.code][partner] += vp;
    vprime_total += vp;
  }

  NodeResult out;
  if (vprime_total <= 0.0) return out;
  out.has_flows = true;
  out.vprime = vprime_total;

  // per-leaf dependence and V'_(i,c)
  std::map<std::string, double> leaf_vprime;  // leaf -> D * sum
  std::map<std::string, double> leaf_flowsum;
  for (const auto& [code, partners] : leaves) {
    std::vector<double> vals;
    double sum = 0.0;
    for (const auto& [_, v] : partners) {
      vals.push_back(v);
      sum += v;
    }
    if (sum <= 0.0) continue;
    const double d = geo_mean_dependence(vals);
    out.leaf_dependence[code] = d;
    leaf_vprime[code] = d * sum;
    leaf_flowsum[code] = sum;
  }

  // per-aggregate dependence and V'_(i,A)
  std::map<std::string, std::vector<double>> agg_members;
  for (const auto& [code, vp] : leaf_vprime)
    agg_members[net.code_aggregate.at(code)].push_back(vp);
  std::map<std::string, double> agg_vprime;
  for (const auto& [agg, members] : agg_members) {
    double sum = 0.0;
    for (double v : members) sum += v;
    const double d = geo_mean_dependence(members);
    out.agg_dependence[agg] = d;
    agg_vprime[agg] = d * sum;
  }

  std::vector<double> agg_values;
  double agg_total = 0.0;
  for (const auto& [_, v] : agg_vprime) {
    agg_values.push_back(v);
    agg_total += v;
  }
  out.overall_dependence = geo_mean_dependence(agg_values);
  out.r = 1.0 - out.overall_dependence * agg_total / vprime_total;
  return out;
}

struct NetworkResult {
  std::map<std::string, double> influence;  // per node with positive flow
  double r_net = 0.0;
  std::string argmax;
};

inline NetworkResult direction_result(const Network& net, bool exporting) {
  std::set<std::string> nodes;
  for (const Flow& f : net.flows) nodes.insert(exporting ? f.origin : f.dest);

  std::map<std::string, NodeResult> results;
  double denom = 0.0;
  for (const std::string& node : nodes) {
    NodeResult r = node_result(net, node, exporting);
    if (!r.has_flows) continue;
    denom += r.r * r.vprime;
    results[node] = r;
  }
  NetworkResult out;
  double best = -1.0;
  for (const auto& [node, r] : results) {
    const double infl = r.r * r.vprime / denom;
    out.influence[node] = infl;
    if (infl > best) {
      best = infl;
      out.argmax = node;
    }
  }
  out.r_net = 1.0 - best;
  return out;
}

inline double overall_r_net(const Network& net) {
  return (direction_result(net, false).r_net + direction_result(net, true).r_net) / 2.0;
}

}  // namespace oracle
