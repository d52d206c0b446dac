#pragma once

#include <map>
#include <memory>
#include <ostream>
#include <string>
#include <tuple>
#include <vector>

#include "flowres/types.hpp"

namespace flowres {

/// Sort key for stored flows. Iteration order over a std::map keyed by this
/// fixes the summation order everywhere values are accumulated.
struct FlowKey {
  int year;
  RegionLevel level;
  std::string origin;
  std::string dest;
  std::string code;

  auto operator<=>(const FlowKey&) const = default;
};

/// Immutable snapshot of the flows matching one (year, level, direction).
/// Flows are grouped by focal node (origin for EXPORT, destination for
/// IMPORT), then by leaf code, then sorted by partner id.
class NetworkView {
 public:
  struct PartnerFlow {
    std::string partner;  // the non-focal endpoint
    CommodityFlow flow;
  };
  using CodeGroup = std::map<std::string, std::vector<PartnerFlow>>;

  int year() const { return year_; }
  RegionLevel level() const { return level_; }
  Direction direction() const { return direction_; }
  size_t flow_count() const { return flow_count_; }

  /// Focal node ids in lexicographic order.
  std::vector<std::string> nodes() const;
  const CodeGroup* find_node(const std::string& node) const;
  const std::map<std::string, CodeGroup>& grouped() const { return by_node_; }

 private:
  friend class GraphStore;
  int year_ = 0;
  RegionLevel level_ = RegionLevel::State;
  Direction direction_ = Direction::Export;
  size_t flow_count_ = 0;
  std::map<std::string, CodeGroup> by_node_;
};

/// Typed in-memory knowledge-graph store for regions, commodity codes, and
/// commodity flows. Single writer during ingestion; snapshots are immutable.
class GraphStore {
 public:
  void upsert_region(const RegionNode& node);
  void upsert_code(const CommodityCode& code);
  void add_flow(const CommodityFlow& flow);

  const RegionNode* find_region(const std::string& id) const;
  const CommodityCode* find_code(const std::string& code) const;

  const std::map<std::string, RegionNode>& regions() const { return regions_; }
  const std::map<std::string, CommodityCode>& codes() const { return codes_; }
  const std::map<FlowKey, CommodityFlow>& flows() const { return flows_; }

  /// Root aggregate ancestor of a leaf code. Throws UnknownCode.
  std::string aggregate_of(const std::string& leaf_code) const;

  /// Ancestor of `region_id` at `level` (identity when already there).
  /// Throws MissingParent when the chain is incomplete.
  std::string ancestor_at(const std::string& region_id, RegionLevel level) const;

  NetworkView snapshot_view(int year, RegionLevel level, Direction direction,
                            bool include_self_flows = true) const;

  /// Years (sorted) for which flows exist at `level`.
  std::vector<int> years_at(RegionLevel level) const;

  /// Emits the whole store as Turtle: fixed prefix header, then triples
  /// sorted lexicographically by (subject, predicate, object). Byte
  /// deterministic for a given store state.
  void export_turtle(std::ostream& sink) const;

  /// Optional symmetric adjacency pairs, exported as geo:ehMeet triples.
  void set_adjacency_pairs(std::vector<std::pair<std::string, std::string>> pairs);
  const std::vector<std::pair<std::string, std::string>>& adjacency_pairs() const {
    return adjacency_pairs_;
  }

 private:
  void validate_region(const RegionNode& node) const;

  std::map<std::string, RegionNode> regions_;
  std::map<std::string, CommodityCode> codes_;
  std::map<FlowKey, CommodityFlow> flows_;
  std::vector<std::pair<std::string, std::string>> adjacency_pairs_;
};

}  // namespace flowres
