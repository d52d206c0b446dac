#include "flowres/graph_store.hpp"

#include <algorithm>
#include <array>
#include <set>

#include "flowres/errors.hpp"
#include "flowres/namespaces.hpp"
#include "format_util.hpp"

namespace flowres {

std::vector<std::string> NetworkView::nodes() const {
  std::vector<std::string> out;
  out.reserve(by_node_.size());
  for (const auto& [node, _] : by_node_) out.push_back(node);
  return out;
}

const NetworkView::CodeGroup* NetworkView::find_node(const std::string& node) const {
  auto it = by_node_.find(node);
  return it == by_node_.end() ? nullptr : &it->second;
}

void GraphStore::validate_region(const RegionNode& node) const {
  if (node.id.empty())
    throw Error(ErrorCode::ParseError, "region id must be nonempty");

  auto require_parent = [&](RegionLevel wanted) {
    if (!node.parent_id)
      throw Error(ErrorCode::LevelCycle,
                  "region '" + node.id + "' at level " + to_string(node.level) +
                      " requires a " + to_string(wanted) + " parent");
    auto it = regions_.find(*node.parent_id);
    if (it == regions_.end())
      throw Error(ErrorCode::DanglingParent,
                  "region '" + node.id + "' references unknown parent '" +
                      *node.parent_id + "'");
    if (it->second.level != wanted)
      throw Error(ErrorCode::LevelCycle,
                  "region '" + node.id + "' parent '" + *node.parent_id +
                      "' has level " + to_string(it->second.level) +
                      ", expected " + to_string(wanted));
  };

  switch (node.level) {
    case RegionLevel::State:
      require_parent(RegionLevel::Division);
      break;
    case RegionLevel::Division:
      require_parent(RegionLevel::Region);
      break;
    case RegionLevel::Region:
      if (node.parent_id)
        throw Error(ErrorCode::LevelCycle,
                    "REGION '" + node.id + "' must not have a parent");
      break;
  }

  if (node.feature_code == "ADM1" && node.level != RegionLevel::State)
    throw Error(ErrorCode::InvalidFeatureCode,
                "feature code ADM1 is reserved for STATE nodes ('" + node.id + "')");
}

void GraphStore::upsert_region(const RegionNode& node) {
  validate_region(node);
  regions_[node.id] = node;
}

void GraphStore::upsert_code(const CommodityCode& code) {
  if (code.code.empty())
    throw Error(ErrorCode::ParseError, "commodity code must be nonempty");
  if (code.parent && *code.parent == code.code)
    throw Error(ErrorCode::CycleDetected,
                "code '" + code.code + "' is its own parent");
  codes_[code.code] = code;
}

void GraphStore::add_flow(const CommodityFlow& flow) {
  if (flow.value < 0.0 || flow.avg_mileage < 0.0 ||
      (flow.weight && *flow.weight < 0.0))
    throw Error(ErrorCode::NegativeValue,
                "flow " + flow.origin + "->" + flow.dest + " code " + flow.code);

  auto origin_it = regions_.find(flow.origin);
  if (origin_it == regions_.end())
    throw Error(ErrorCode::UnknownRegion, "origin '" + flow.origin + "'");
  auto dest_it = regions_.find(flow.dest);
  if (dest_it == regions_.end())
    throw Error(ErrorCode::UnknownRegion, "destination '" + flow.dest + "'");
  if (origin_it->second.level != dest_it->second.level)
    throw Error(ErrorCode::BadParams,
                "flow endpoints '" + flow.origin + "' and '" + flow.dest +
                    "' are at different levels");

  auto code_it = codes_.find(flow.code);
  if (code_it == codes_.end())
    throw Error(ErrorCode::UnknownCode, "code '" + flow.code + "'");
  if (code_it->second.is_aggregate)
    throw Error(ErrorCode::UnknownCode,
                "code '" + flow.code + "' is an aggregate, flows carry leaf codes");

  FlowKey key{flow.year, origin_it->second.level, flow.origin, flow.dest, flow.code};
  auto [it, inserted] = flows_.emplace(std::move(key), flow);
  if (!inserted)
    throw Error(ErrorCode::DuplicateFlow,
                flow.origin + "->" + flow.dest + " code " + flow.code + " year " +
                    std::to_string(flow.year));
}

const RegionNode* GraphStore::find_region(const std::string& id) const {
  auto it = regions_.find(id);
  return it == regions_.end() ? nullptr : &it->second;
}

const CommodityCode* GraphStore::find_code(const std::string& code) const {
  auto it = codes_.find(code);
  return it == codes_.end() ? nullptr : &it->second;
}

std::string GraphStore::aggregate_of(const std::string& leaf_code) const {
  auto it = codes_.find(leaf_code);
  if (it == codes_.end())
    throw Error(ErrorCode::UnknownCode, "code '" + leaf_code + "'");

  std::set<std::string> seen;
  const CommodityCode* cur = &it->second;
  std::string last_aggregate;
  while (true) {
    if (!seen.insert(cur->code).second)
      throw Error(ErrorCode::CycleDetected, "code forest cycle at '" + cur->code + "'");
    if (cur->is_aggregate) last_aggregate = cur->code;
    if (!cur->parent) break;
    auto pit = codes_.find(*cur->parent);
    if (pit == codes_.end())
      throw Error(ErrorCode::UnknownCode,
                  "code '" + cur->code + "' references unknown parent '" +
                      *cur->parent + "'");
    cur = &pit->second;
  }
  if (last_aggregate.empty())
    throw Error(ErrorCode::UnknownCode,
                "leaf code '" + leaf_code + "' has no aggregate ancestor");
  return last_aggregate;
}

std::string GraphStore::ancestor_at(const std::string& region_id,
                                    RegionLevel level) const {
  const RegionNode* cur = find_region(region_id);
  if (!cur) throw Error(ErrorCode::UnknownRegion, "region '" + region_id + "'");
  while (cur->level != level) {
    // State < Division < Region in coarseness; can only walk coarser.
    if (static_cast<int>(cur->level) > static_cast<int>(level))
      throw Error(ErrorCode::MissingParent,
                  "region '" + region_id + "' has no ancestor at level " +
                      to_string(level));
    if (!cur->parent_id)
      throw Error(ErrorCode::MissingParent,
                  "region '" + cur->id + "' lacks a parent on the way to " +
                      to_string(level));
    cur = find_region(*cur->parent_id);
    if (!cur)
      throw Error(ErrorCode::MissingParent, "broken hierarchy above '" + region_id + "'");
  }
  return cur->id;
}

NetworkView GraphStore::snapshot_view(int year, RegionLevel level,
                                      Direction direction,
                                      bool include_self_flows) const {
  NetworkView view;
  view.year_ = year;
  view.level_ = level;
  view.direction_ = direction;

  for (const auto& [key, flow] : flows_) {
    if (key.year != year || key.level != level) continue;
    if (!include_self_flows && flow.origin == flow.dest) continue;
    const bool exporting = direction == Direction::Export;
    const std::string& focal = exporting ? flow.origin : flow.dest;
    const std::string& partner = exporting ? flow.dest : flow.origin;
    view.by_node_[focal][flow.code].push_back({partner, flow});
    ++view.flow_count_;
  }
  if (view.flow_count_ == 0)
    throw Error(ErrorCode::EmptySelection,
                "no flows for year " + std::to_string(year) + " at level " +
                    to_string(level));

  // Map iteration already sorts nodes and codes; fix partner order too.
  for (auto& [_, codes] : view.by_node_)
    for (auto& [__, partners] : codes)
      std::sort(partners.begin(), partners.end(),
                [](const auto& a, const auto& b) { return a.partner < b.partner; });
  return view;
}

std::vector<int> GraphStore::years_at(RegionLevel level) const {
  std::set<int> years;
  for (const auto& [key, _] : flows_)
    if (key.level == level) years.insert(key.year);
  return {years.begin(), years.end()};
}

void GraphStore::set_adjacency_pairs(
    std::vector<std::pair<std::string, std::string>> pairs) {
  adjacency_pairs_ = std::move(pairs);
}

namespace {

// Local-name-safe encoding: [A-Za-z0-9_-] kept, everything else -> _xHH.
std::string encode_local(const std::string& raw) {
  static const char* hex = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : raw) {
    if (std::isalnum(c) || c == '_' || c == '-') {
      out += static_cast<char>(c);
    } else {
      out += "_x";
      out += hex[c >> 4];
      out += hex[c & 0xF];
    }
  }
  return out;
}

std::string str_literal(const std::string& raw) {
  std::string out = "\"";
  for (char c : raw) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') { out += "\\n"; continue; }
    out += c;
  }
  out += '"';
  return out;
}

std::string region_subject(const std::string& id) {
  return "cfs:region_" + encode_local(id);
}

std::string code_subject(const std::string& code) {
  return "cfs:code_" + encode_local(code);
}

}  // namespace

void GraphStore::export_turtle(std::ostream& sink) const {
  using Triple = std::array<std::string, 3>;
  std::vector<Triple> triples;

  for (const auto& [id, r] : regions_) {
    const std::string s = region_subject(id);
    triples.push_back({s, "a", "kwg-ont:Region"});
    triples.push_back({s, "cfs:level", str_literal(to_string(r.level))});
    triples.push_back({s, "gn:name", str_literal(r.name)});
    if (!r.feature_code.empty())
      triples.push_back({s, "gn:featureCode", str_literal(r.feature_code)});
    if (r.parent_id)
      triples.push_back({s, "kwg-ont:within", region_subject(*r.parent_id)});
  }

  for (const auto& [code, c] : codes_) {
    const std::string s = code_subject(code);
    triples.push_back({s, "a", "cfs:CFCode"});
    triples.push_back({s, "cfs:description", str_literal(c.description)});
    triples.push_back({s, "cfs:isAggregate", c.is_aggregate ? "true" : "false"});
    if (c.parent)
      triples.push_back({s, "cfs:parentCode", code_subject(*c.parent)});
    if (c.external_class_iri)
      triples.push_back({s, "cfs:externalClass", "<" + *c.external_class_iri + ">"});
  }

  for (const auto& [key, f] : flows_) {
    const std::string s = "cfs:cf_" + std::to_string(key.year) + "_" +
                          encode_local(f.origin) + "_" + encode_local(f.dest) +
                          "_" + encode_local(f.code);
    triples.push_back({s, "a", "cfs:CFObject"});
    triples.push_back({s, "cfs:CFValue", detail::fmt_double(f.value)});
    triples.push_back({s, "cfs:AvgMileage", detail::fmt_double(f.avg_mileage)});
    triples.push_back({s, "time:year", std::to_string(f.year)});
    triples.push_back({s, "cfs:CFCode", code_subject(f.code)});
    triples.push_back({s, "cfs:hasOriginRegion", region_subject(f.origin)});
    triples.push_back({s, "cfs:hasDestinationRegion", region_subject(f.dest)});
    if (f.weight)
      triples.push_back({s, "cfs:CFWeight", detail::fmt_double(*f.weight)});
  }

  for (const auto& [a, b] : adjacency_pairs_) {
    triples.push_back({region_subject(a), "geo:ehMeet", region_subject(b)});
    triples.push_back({region_subject(b), "geo:ehMeet", region_subject(a)});
  }

  std::sort(triples.begin(), triples.end());

  sink << "@prefix cfs: <" << ns::kCfs << "> .\n"
       << "@prefix cfsf: <" << ns::kCfsf << "> .\n"
       << "@prefix geo: <" << ns::kGeo << "> .\n"
       << "@prefix gn: <" << ns::kGn << "> .\n"
       << "@prefix kwg-ont: <" << ns::kKwgOnt << "> .\n"
       << "@prefix time: <" << ns::kTime << "> .\n\n";
  for (const auto& [s, p, o] : triples) sink << s << ' ' << p << ' ' << o << " .\n";
  if (!sink)
    throw Error(ErrorCode::SinkWrite, "turtle export failed");
}

}  // namespace flowres
