#include "flowres/ingest.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "flowres/csv.hpp"
#include "flowres/errors.hpp"

namespace flowres {

namespace {

double parse_double(const std::string& s, const std::string& where) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::ParseError, where + ": bad number '" + s + "'");
  }
}

int parse_int(const std::string& s, const std::string& where) {
  try {
    size_t pos = 0;
    const int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::ParseError, where + ": bad integer '" + s + "'");
  }
}

std::string at_line(const std::string& path, size_t line_no) {
  return path + ":" + std::to_string(line_no);
}

}  // namespace

size_t load_regions(GraphStore& store, const std::string& path) {
  struct Row {
    size_t line_no;
    RegionNode node;
  };
  std::vector<Row> rows;
  csv::for_each_row(path, {"id", "name", "level", "parent_id", "feature_code"},
                    [&](size_t line_no, const std::vector<std::string>& f) {
    RegionNode node;
    node.id = f[0];
    node.name = f[1];
    try {
      node.level = parse_region_level(f[2]);
    } catch (const Error& e) {
      throw Error(ErrorCode::ParseError, at_line(path, line_no) + ": " + e.what());
    }
    if (!f[3].empty()) node.parent_id = f[3];
    node.feature_code = f[4];
    rows.push_back({line_no, std::move(node)});
  });

  // Parents first: regions, then divisions, then states. Stable within a
  // level so diagnostics keep file order.
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return static_cast<int>(a.node.level) > static_cast<int>(b.node.level);
  });
  for (const Row& row : rows) {
    try {
      store.upsert_region(row.node);
    } catch (const Error& e) {
      throw Error(e.code(), at_line(path, row.line_no) + ": " + e.what());
    }
  }
  return rows.size();
}

size_t load_codes(GraphStore& store, const std::string& path) {
  struct Row {
    size_t line_no;
    CommodityCode code;
  };
  std::vector<Row> rows;
  csv::for_each_row(path, {"code", "description", "parent", "is_aggregate"},
                    [&](size_t line_no, const std::vector<std::string>& f) {
    CommodityCode code;
    code.code = normalize_code(f[0]);
    code.description = f[1];
    if (!f[2].empty()) code.parent = normalize_code(f[2]);
    if (f[3] == "true" || f[3] == "1") {
      code.is_aggregate = true;
    } else if (f[3] == "false" || f[3] == "0") {
      code.is_aggregate = false;
    } else {
      throw Error(ErrorCode::ParseError,
                  at_line(path, line_no) + ": bad is_aggregate '" + f[3] + "'");
    }
    rows.push_back({line_no, std::move(code)});
  });

  for (const Row& row : rows) {
    try {
      store.upsert_code(row.code);
    } catch (const Error& e) {
      throw Error(e.code(), at_line(path, row.line_no) + ": " + e.what());
    }
  }

  // Whole-forest checks: acyclic, and every leaf under an aggregate.
  for (const Row& row : rows) {
    try {
      store.aggregate_of(row.code.code);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::CycleDetected)
        throw Error(ErrorCode::CycleDetected, at_line(path, row.line_no) + ": " + e.what());
      if (!row.code.is_aggregate)
        throw Error(ErrorCode::ParseError, at_line(path, row.line_no) + ": " + e.what());
      // Aggregates are allowed to be forest roots.
    }
  }
  return rows.size();
}

LoadFlowsResult load_flows(GraphStore& store, const std::string& path,
                           SuppressedPolicy policy) {
  LoadFlowsResult result;
  csv::for_each_row(
      path,
      {"year", "origin_id", "dest_id", "sctg_code", "value_musd", "avg_miles", "weight"},
      [&](size_t line_no, const std::vector<std::string>& f) {
    const std::string where = at_line(path, line_no);
    CommodityFlow flow;
    flow.year = parse_int(f[0], where);
    flow.origin = f[1];
    flow.dest = f[2];
    flow.code = normalize_code(f[3]);
    if (f[4] == "S") {
      if (policy == SuppressedPolicy::Drop) {
        ++result.dropped;
        return;
      }
      flow.value = 0.0;
    } else {
      flow.value = parse_double(f[4], where);
    }
    flow.avg_mileage = parse_double(f[5], where);
    if (!f[6].empty()) flow.weight = parse_double(f[6], where);
    try {
      store.add_flow(flow);
    } catch (const Error& e) {
      throw Error(e.code(), where + ": " + e.what());
    }
    ++result.stored;
  });
  return result;
}

size_t rollup(GraphStore& store, RegionLevel source_level,
              const RollupPolicy& policy, int year) {
  if (static_cast<int>(policy.target_level) <= static_cast<int>(source_level))
    throw Error(ErrorCode::BadParams, "rollup target must be coarser than source");

  struct Member {
    double value;
    double atm;
  };
  // Key (origin, dest, code); std::map fixes the summation order.
  std::map<std::tuple<std::string, std::string, std::string>, std::vector<Member>>
      groups;
  for (const auto& [key, flow] : store.flows()) {
    if (key.year != year || key.level != source_level) continue;
    const std::string up_origin = store.ancestor_at(flow.origin, policy.target_level);
    const std::string up_dest = store.ancestor_at(flow.dest, policy.target_level);
    if (up_origin == up_dest && policy.self_flow_handling == SelfFlowHandling::Drop)
      continue;
    groups[{up_origin, up_dest, flow.code}].push_back({flow.value, flow.avg_mileage});
  }

  size_t count = 0;
  for (const auto& [key, members] : groups) {
    const auto& [origin, dest, code] = key;
    double total_value = 0.0;
    double weighted_atm = 0.0;
    double plain_atm = 0.0;
    for (const Member& m : members) {
      total_value += m.value;
      weighted_atm += m.value * m.atm;
      plain_atm += m.atm;
    }
    CommodityFlow flow;
    flow.origin = origin;
    flow.dest = dest;
    flow.code = code;
    flow.year = year;
    flow.value = total_value;
    flow.avg_mileage = total_value > 0.0
                           ? weighted_atm / total_value
                           : plain_atm / static_cast<double>(members.size());
    store.add_flow(flow);
    ++count;
  }
  return count;
}

}  // namespace flowres
