#pragma once

#include <string>

#include "flowres/graph_store.hpp"

namespace flowres {

enum class SuppressedPolicy { Drop, Zero };
enum class MileageCombine { ValueWeightedMean };
enum class SelfFlowHandling { Keep, Drop };

struct RollupPolicy {
  RegionLevel target_level = RegionLevel::Division;
  MileageCombine mileage_combine = MileageCombine::ValueWeightedMean;
  SelfFlowHandling self_flow_handling = SelfFlowHandling::Keep;
};

/// CSV header: id,name,level,parent_id,feature_code. Rows are upserted
/// parents-first regardless of file order. Returns rows loaded.
size_t load_regions(GraphStore& store, const std::string& path);

/// CSV header: code,description,parent,is_aggregate. Builds the code forest
/// and checks that every leaf has an aggregate ancestor. Returns rows loaded.
size_t load_codes(GraphStore& store, const std::string& path);

struct LoadFlowsResult {
  size_t stored = 0;
  size_t dropped = 0;  // suppressed rows under policy Drop
};

/// CSV header: year,origin_id,dest_id,sctg_code,value_musd,avg_miles,weight.
/// Suppressed sentinel "S" in value_musd is dropped or zeroed per policy.
LoadFlowsResult load_flows(GraphStore& store, const std::string& path,
                           SuppressedPolicy policy = SuppressedPolicy::Drop);

/// Synthesizes flows at policy.target_level from flows at source_level for
/// one year. Values add; mileage is the value-weighted mean of member ATMs
/// (simple mean when total value is 0). Returns synthesized flow count.
size_t rollup(GraphStore& store, RegionLevel source_level,
              const RollupPolicy& policy, int year);

}  // namespace flowres
