// Acceptance gate: standalone binary, one PASS/FAIL/SKIP line per criterion.
// argv[1] must be the path to the flowres CLI binary (wired up via ctest).

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "flowres/errors.hpp"
#include "flowres/geo.hpp"
#include "flowres/ingest.hpp"
#include "flowres/metrics.hpp"
#include "flowres/query.hpp"
#include "oracle.hpp"

using namespace flowres;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances.
constexpr double kOracleTol = 1e-9;
constexpr double kExactTol = 1e-12;
constexpr double kWorkedTol = 1e-6;
constexpr double kInvariantTol = 1e-9;
constexpr double kIdentityTol = 1e-12;
constexpr double kOracleBudgetSec = 10.0;
constexpr double kPipelineBudgetSec = 5.0;

const fs::path kFixtures = FLOWRES_FIXTURES_DIR;
const fs::path kGolden = FLOWRES_GOLDEN_DIR;

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Skip : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw Failure(what);
}

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(3);
  out << v;
  return out.str();
}

GraphStore two_aggregate_store() {
  GraphStore store;
  store.upsert_region({"R1", "", RegionLevel::Region, {}, "", {}});
  store.upsert_region({"D1", "", RegionLevel::Division, "R1", "", {}});
  for (const char* id : {"X", "Y", "Z", "W", "V", "U"})
    store.upsert_region({id, id, RegionLevel::State, "D1", "ADM1", {}});
  store.upsert_code({"A", "", {}, true, {}});
  store.upsert_code({"B", "", {}, true, {}});
  for (const char* c : {"01", "02"}) store.upsert_code({c, "", "A", false, {}});
  for (const char* c : {"06", "07"}) store.upsert_code({c, "", "B", false, {}});
  return store;
}

ResilienceParams neutral_params() {
  ResilienceParams p;
  p.atm_mode = AtmMode::Unity;
  p.ga_factor = 1.0;
  return p;
}

struct RandomNetwork {
  GraphStore store;
  AdjacencyIndex adjacency;
  oracle::Network net;
};

RandomNetwork random_network(std::mt19937& rng) {
  std::uniform_int_distribution<int> n_nodes(2, 6);
  std::uniform_int_distribution<int> n_codes(1, 4);
  std::uniform_real_distribution<double> value(0.0, 1000.0);
  std::uniform_real_distribution<double> atm(0.0, 2500.0);
  std::bernoulli_distribution coin(0.4);
  const char* ids[] = {"X", "Y", "Z", "W", "V", "U"};
  const char* all_codes[] = {"01", "02", "06", "07"};

  RandomNetwork out{two_aggregate_store(), {}, {}};
  out.net.code_aggregate = {{"01", "A"}, {"02", "A"}, {"06", "B"}, {"07", "B"}};
  const int nodes = n_nodes(rng);
  const int codes = n_codes(rng);
  for (int i = 0; i < nodes; ++i)
    for (int j = i + 1; j < nodes; ++j)
      if (coin(rng)) {
        out.adjacency.add(ids[i], ids[j]);
        out.net.adjacent.insert({ids[i], ids[j]});
        out.net.adjacent.insert({ids[j], ids[i]});
      }
  for (int i = 0; i < nodes; ++i)
    for (int j = 0; j < nodes; ++j)
      for (int c = 0; c < codes; ++c)
        if (i != j && coin(rng)) {
          const double v = value(rng), miles = atm(rng);
          out.store.add_flow({ids[i], ids[j], all_codes[c], 2020, v, miles, {}});
          out.net.flows.push_back({ids[i], ids[j], all_codes[c], v, miles});
        }
  return out;
}

// ---- criterion bodies ------------------------------------------------------

std::string oracle_equivalence() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937 rng(20200817);
  double max_diff = 0.0;
  int compared = 0, degenerate = 0;

  for (int trial = 0; trial < 500; ++trial) {
    RandomNetwork rn = random_network(rng);
    if (rn.net.flows.empty()) continue;
    ++compared;

    bool both_sides_ok = true;
    for (bool exporting : {true, false}) {
      const NetworkView view = rn.store.snapshot_view(
          2020, RegionLevel::State,
          exporting ? Direction::Export : Direction::Import);
      auto reports = all_node_resilience(view, rn.store, rn.adjacency, {});

      double denom = 0.0;
      for (const auto& report : reports) {
        const auto node = oracle::node_result(rn.net, report.node, exporting);
        denom += node.r * node.vprime;
        max_diff = std::max(max_diff, std::abs(report.resilience - node.r));
        require(std::abs(report.resilience - node.r) < kOracleTol, "R mismatch");
        require(std::abs(report.vprime_total - node.vprime) <
                    kOracleTol * std::max(1.0, node.vprime),
                "V' mismatch");
        require(std::abs(report.breakdown.overall_dependence -
                         node.overall_dependence) < kOracleTol,
                "D_i mismatch");
        for (const auto& agg : report.breakdown.aggregates) {
          require(std::abs(agg.dependence - node.agg_dependence.at(agg.code)) <
                      kOracleTol,
                  "D_(i,A) mismatch");
          for (const auto& leaf : agg.leaves)
            require(std::abs(leaf.dependence -
                             node.leaf_dependence.at(leaf.code)) < kOracleTol,
                    "D_(i,c) mismatch");
        }
      }

      if (denom <= 0.0) {
        both_sides_ok = false;
        bool threw = false;
        try {
          node_influence(reports);
        } catch (const Error&) {
          threw = true;
        }
        require(threw, "engine accepted an all-zero-R network");
        continue;
      }
      node_influence(reports);
      const auto expected = oracle::direction_result(rn.net, exporting);
      require(reports.size() == expected.influence.size(), "node set mismatch");
      for (const auto& report : reports) {
        const double diff =
            std::abs(report.influence - expected.influence.at(report.node));
        max_diff = std::max(max_diff, diff);
        require(diff < kOracleTol, "I mismatch");
      }
    }

    if (!both_sides_ok) {
      ++degenerate;
      continue;
    }
    const auto imports =
        rn.store.snapshot_view(2020, RegionLevel::State, Direction::Import);
    const auto exports =
        rn.store.snapshot_view(2020, RegionLevel::State, Direction::Export);
    const auto report =
        network_resilience(imports, exports, rn.store, rn.adjacency, {});
    require(std::abs(report.export_side.r_net -
                     oracle::direction_result(rn.net, true).r_net) < kOracleTol,
            "export R_net mismatch");
    require(std::abs(report.import_side.r_net -
                     oracle::direction_result(rn.net, false).r_net) < kOracleTol,
            "import R_net mismatch");
    require(std::abs(report.overall - oracle::overall_r_net(rn.net)) < kOracleTol,
            "overall R_net mismatch");
  }

  const double sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  require(sec < kOracleBudgetSec, "runtime " + fmt(sec) + " s over budget");
  return std::to_string(compared) + " networks (" + std::to_string(degenerate) +
         " degenerate), max |diff| " + fmt(max_diff) + ", " + fmt(sec) + " s";
}

std::string closed_forms() {
  {
    GraphStore store = two_aggregate_store();
    store.add_flow({"X", "Y", "01", 2020, 500.0, 700.0, {}});
    const auto view =
        store.snapshot_view(2020, RegionLevel::State, Direction::Export);
    const auto report = node_resilience(view, "X", store, {}, {});
    require(std::abs(report.resilience) <= kExactTol,
            "single customer/commodity R != 0");
  }
  for (int n : {2, 3, 4, 10}) {
    GraphStore store = two_aggregate_store();
    for (int i = 0; i < n; ++i)
      store.upsert_region(
          {"P" + std::to_string(i), "", RegionLevel::State, "D1", "", {}});
    for (int i = 0; i < n; ++i)
      store.add_flow({"X", "P" + std::to_string(i), "01", 2020, 50.0, 0.0, {}});
    const auto view =
        store.snapshot_view(2020, RegionLevel::State, Direction::Export);
    const auto report = node_resilience(view, "X", store, {}, neutral_params());
    require(std::abs(report.resilience - (1.0 - 1.0 / n)) <= kExactTol,
            "uniform n=" + std::to_string(n) + " R != 1 - 1/n");
  }
  {
    // two-aggregate worked example: 100+100 of one commodity, 300 of another
    GraphStore store = two_aggregate_store();
    store.add_flow({"X", "Y", "01", 2020, 100.0, 0.0, {}});
    store.add_flow({"X", "Z", "01", 2020, 100.0, 0.0, {}});
    store.add_flow({"X", "Y", "06", 2020, 300.0, 0.0, {}});
    const auto view =
        store.snapshot_view(2020, RegionLevel::State, Direction::Export);
    const auto report = node_resilience(view, "X", store, {}, neutral_params());
    // independent re-derivation: D = 0.25^0.25 * 0.75^0.75, R = 1 - D*400/500
    const double d = std::pow(0.25, 0.25) * std::pow(0.75, 0.75);
    const double expected = 1.0 - d * 400.0 / 500.0;  // 0.5440985886...
    require(std::abs(report.resilience - expected) <= kWorkedTol,
            "worked example R_X off re-derived value");
  }
  return "R=0, R=1-1/n for n in {2,3,4,10}, re-derived R_X=0.544099";
}

std::string invariants() {
  std::mt19937 rng(4242);
  int checked = 0;
  for (int trial = 0; trial < 50; ++trial) {
    RandomNetwork rn = random_network(rng);
    if (rn.net.flows.empty()) continue;
    const auto view =
        rn.store.snapshot_view(2020, RegionLevel::State, Direction::Export);
    auto reports = all_node_resilience(view, rn.store, rn.adjacency, {});

    double denom = 0.0;
    for (const auto& report : reports) {
      require(report.resilience >= 0.0 && report.resilience < 1.0,
              "R outside [0,1)");
      const auto& bd = report.breakdown;
      require(bd.overall_dependence > 0.0 && bd.overall_dependence <= 1.0,
              "D_i outside (0,1]");
      for (const auto& agg : bd.aggregates) {
        require(agg.dependence > 0.0 && agg.dependence <= 1.0,
                "D_(i,A) outside (0,1]");
        for (const auto& leaf : agg.leaves) {
          require(leaf.dependence > 0.0 && leaf.dependence <= 1.0,
                  "D_(i,c) outside (0,1]");
          require(std::abs(leaf.dependence - std::exp2(-leaf.entropy_bits)) <=
                      kIdentityTol,
                  "D != 2^-H");
        }
      }
      denom += report.resilience * report.vprime_total;
    }
    if (denom > 0.0) {
      node_influence(reports);
      double sum = 0.0;
      for (const auto& report : reports) sum += report.influence;
      require(std::abs(sum - 1.0) <= kInvariantTol, "sum I != 1");
    }
    ++checked;
  }

  // value-scale invariance
  for (double k : {1e-3, 7.0, 1e4}) {
    GraphStore base = two_aggregate_store();
    GraphStore scaled = two_aggregate_store();
    const double vals[][2] = {{120, 150}, {80, 220}, {300, 900}, {110, 250}};
    const char* dests[] = {"Y", "Z", "W", "Y"};
    const char* codes[] = {"01", "01", "02", "06"};
    AdjacencyIndex adjacency;
    adjacency.add("X", "Y");
    for (int i = 0; i < 4; ++i) {
      base.add_flow({"X", dests[i], codes[i], 2020, vals[i][0], vals[i][1], {}});
      scaled.add_flow(
          {"X", dests[i], codes[i], 2020, vals[i][0] * k, vals[i][1], {}});
    }
    const auto a = node_resilience(
        base.snapshot_view(2020, RegionLevel::State, Direction::Export), "X",
        base, adjacency, {});
    const auto b = node_resilience(
        scaled.snapshot_view(2020, RegionLevel::State, Direction::Export), "X",
        scaled, adjacency, {});
    require(std::abs(a.resilience - b.resilience) <= kInvariantTol,
            "R not scale invariant");
    require(std::abs(a.breakdown.overall_dependence -
                     b.breakdown.overall_dependence) <= kInvariantTol,
            "D not scale invariant");
  }

  // neutral-parameter reduction: ga=1 + unity ATM must equal the pure-value
  // computation (zero-mileage twin, no adjacency) bit for bit
  {
    GraphStore store = two_aggregate_store();
    GraphStore twin = two_aggregate_store();
    const double vals[][2] = {{120, 150}, {80, 999}, {40, 0.2}};
    const char* dests[] = {"Y", "Z", "Y"};
    const char* codes[] = {"01", "02", "06"};
    AdjacencyIndex adjacency;
    adjacency.add("X", "Y");
    for (int i = 0; i < 3; ++i) {
      store.add_flow({"X", dests[i], codes[i], 2020, vals[i][0], vals[i][1], {}});
      twin.add_flow({"X", dests[i], codes[i], 2020, vals[i][0], 0.0, {}});
    }
    const auto a = node_resilience(
        store.snapshot_view(2020, RegionLevel::State, Direction::Export), "X",
        store, adjacency, neutral_params());
    const auto b = node_resilience(
        twin.snapshot_view(2020, RegionLevel::State, Direction::Export), "X",
        twin, {}, neutral_params());
    require(a.resilience == b.resilience && a.vprime_total == b.vprime_total,
            "neutral parameters not bit-identical to pure-value result");
  }
  return std::to_string(checked) + " random networks, 3 scale factors";
}

std::string rollup_conservation() {
  GraphStore store;
  load_regions(store, (kFixtures / "toy_regions.csv").string());
  load_codes(store, (kFixtures / "toy_codes.csv").string());
  load_flows(store, (kFixtures / "toy_flows.csv").string(),
             SuppressedPolicy::Drop);

  auto total_at = [&](RegionLevel level, int year) {
    double sum = 0.0;
    for (const auto& [key, flow] : store.flows())
      if (key.level == level && key.year == year) sum += flow.value;
    return sum;
  };
  for (int year : {2012, 2017}) {
    RollupPolicy to_division{RegionLevel::Division,
                             MileageCombine::ValueWeightedMean,
                             SelfFlowHandling::Keep};
    rollup(store, RegionLevel::State, to_division, year);
    RollupPolicy to_region{RegionLevel::Region,
                           MileageCombine::ValueWeightedMean,
                           SelfFlowHandling::Keep};
    rollup(store, RegionLevel::Division, to_region, year);
    require(total_at(RegionLevel::Division, year) ==
                total_at(RegionLevel::State, year),
            "division total != state total");
    require(total_at(RegionLevel::Region, year) ==
                total_at(RegionLevel::Division, year),
            "region total != division total");
  }

  // value-weighted ATM example: (100*200 + 300*400) / 400 = 350 exactly
  GraphStore atm_store;
  load_regions(atm_store, (kFixtures / "toy_regions.csv").string());
  load_codes(atm_store, (kFixtures / "toy_codes.csv").string());
  atm_store.add_flow({"WI", "IL", "02", 2017, 100.0, 200.0, {}});
  atm_store.add_flow({"IL", "IL", "02", 2017, 300.0, 400.0, {}});
  RollupPolicy policy;
  policy.target_level = RegionLevel::Division;
  rollup(atm_store, RegionLevel::State, policy, 2017);
  const auto& merged = atm_store.flows().at(
      FlowKey{2017, RegionLevel::Division, "E_N_CENTRAL", "E_N_CENTRAL", "02"});
  require(merged.value == 400.0 && merged.avg_mileage == 350.0,
          "weighted ATM example not exact");
  return "totals conserved for 2012+2017, weighted ATM = 350 exact";
}

Geometry make_square(double x0, double y0, double x1, double y1) {
  return {{{{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}, {x0, y0}}}}};
}

std::string adjacency_correctness() {
  const MeetOptions defaults{1e-9, false};
  const Geometry a = make_square(0, 0, 1, 1);
  require(polygons_meet(a, make_square(1, 0, 2, 1), defaults),
          "shared edge not detected");
  require(!polygons_meet(a, make_square(5, 0, 6, 1), defaults),
          "disjoint reported as meet");
  require(!polygons_meet(a, make_square(0.5, 0, 1.5, 1), defaults),
          "overlap reported as meet");
  require(polygons_meet(a, make_square(1, 1, 2, 2), defaults),
          "corner touch not detected");
  MeetOptions edge_only = defaults;
  edge_only.require_shared_edge = true;
  require(polygons_meet(a, make_square(1, 0, 2, 1), edge_only),
          "shared edge rejected under positive-length flag");
  require(!polygons_meet(a, make_square(1, 1, 2, 2), edge_only),
          "corner touch accepted under positive-length flag");

  std::mt19937 rng(99);
  std::uniform_real_distribution<double> centre(-3.0, 3.0);
  std::uniform_real_distribution<double> radius(0.3, 1.5);
  std::uniform_int_distribution<int> sides(3, 9);
  auto blob = [&]() {
    const double cx = centre(rng), cy = centre(rng);
    const int n = sides(rng);
    Ring ring;
    for (int i = 0; i < n; ++i) {
      const double angle = 2.0 * 3.14159265358979323846 * i / n;
      const double r = radius(rng);
      ring.push_back({cx + r * std::cos(angle), cy + r * std::sin(angle)});
    }
    ring.push_back(ring.front());
    return Geometry{{{ring}}};
  };
  const MeetOptions fuzz_opts{1e-6, false};
  for (int i = 0; i < 1000; ++i) {
    const Geometry p = blob();
    const Geometry q = blob();
    require(polygons_meet(p, q, fuzz_opts) == polygons_meet(q, p, fuzz_opts),
            "meet not symmetric");
    require(!polygons_meet(p, p, fuzz_opts), "meet not irreflexive");
  }
  return "truth table + 1000 fuzzed pairs symmetric and irreflexive";
}

std::string determinism() {
  GraphStore store;
  load_regions(store, (kFixtures / "toy_regions.csv").string());
  load_codes(store, (kFixtures / "toy_codes.csv").string());
  load_flows(store, (kFixtures / "toy_flows.csv").string(),
             SuppressedPolicy::Drop);
  const AdjacencyIndex adjacency =
      load_adjacency((kFixtures / "toy_adjacency.csv").string(), {});

  std::ostringstream t1, t2;
  store.export_turtle(t1);
  store.export_turtle(t2);
  require(t1.str() == t2.str(), "turtle export not byte-identical");

  QueryRequest req;
  req.years = {2017};
  req.level = RegionLevel::State;
  req.direction = Direction::Export;
  std::ostringstream c1, c2;
  write_ranked_csv(c1, influence_query(store, adjacency, req));
  write_ranked_csv(c2, influence_query(store, adjacency, req));
  require(c1.str() == c2.str(), "CSV output not byte-identical");
  // the engine is single-threaded, so thread-count independence is structural
  return "turtle and CSV byte-identical across repeated runs";
}

std::string published_reproduction() {
  // Reproducing the published national-survey numbers requires ingesting the
  // 2012/2017 public state-level commodity flow tables. Those tables are not
  // bundled with the repository (redistribution size) and this build
  // environment has no network access to fetch them, so the comparison cannot
  // be run here. The pipeline it would exercise (ingest -> rollup ->
  // resilience -> network across both years, sign pattern of per-level
  // changes, top-2 export influencers) is covered structurally by criteria
  // 1-4, 6 and 8 on bundled fixtures.
  throw Skip(
      "source tables unavailable in this environment; structural coverage "
      "via criteria 1-4, 6, 8");
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  require(bool(in), "cannot open " + p.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string cli_binary;  // set from argv[1]

std::string cli_pipeline() {
  require(!cli_binary.empty() && fs::exists(cli_binary),
          "CLI binary path missing (pass it as argv[1])");
  const auto start = std::chrono::steady_clock::now();

  const fs::path work = fs::temp_directory_path() / "flowres_acceptance";
  fs::remove_all(work);
  fs::create_directories(work);
  const fs::path ws = work / "ws";
  fs::create_directories(ws);

  auto run = [&](const std::string& args, const fs::path& stdout_to) {
    const std::string cmd =
        cli_binary + " " + args + " > " + stdout_to.string() + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    require(status != -1 && WIFEXITED(status) && WEXITSTATUS(status) == 0,
            "command failed: flowres " + args);
  };

  const std::string f = kFixtures.string();
  run("ingest --regions " + f + "/toy_regions.csv --codes " + f +
          "/toy_codes.csv --flows " + f + "/toy_flows.csv --adjacency " + f +
          "/toy_adjacency.csv --suppressed drop --workspace " + ws.string(),
      work / "ingest.txt");
  require(read_file(work / "ingest.txt") ==
              "regions=11 codes=6 flows=29 dropped=1 adjacency_pairs=5\n",
          "ingest summary mismatch");

  const std::string w = " --workspace " + ws.string();
  run("resilience" + w + " --year 2017 --level state --direction export --out csv",
      work / "resilience.csv");
  run("influence" + w + " --year 2017 --level state --direction import --top 3 --out json",
      work / "influence.json");
  run("network" + w + " --years 2012,2017 --levels state", work / "network.csv");
  run("rank-delta" + w + " --years 2012,2017", work / "rank_delta.csv");
  run("export" + w + " --format turtle", work / "graph.ttl");

  const std::pair<const char*, const char*> pairs[] = {
      {"resilience.csv", "resilience_2017_export.csv"},
      {"influence.json", "influence_2017_import_top3.json"},
      {"network.csv", "network_2012_2017.csv"},
      {"rank_delta.csv", "rank_delta_2012_2017.csv"},
      {"graph.ttl", "graph.ttl"},
  };
  for (const auto& [produced, golden] : pairs)
    require(read_file(work / produced) == read_file(kGolden / golden),
            std::string(produced) + " differs from golden " + golden);
  require(read_file(ws / "graph.ttl") == read_file(kGolden / "graph.ttl"),
          "workspace graph.ttl differs from golden");

  const double sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  require(sec < kPipelineBudgetSec, "pipeline took " + fmt(sec) + " s");
  fs::remove_all(work);
  return "6 commands, 6 outputs match goldens, " + fmt(sec) + " s";
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) cli_binary = argv[1];

  const std::pair<const char*, std::function<std::string()>> criteria[] = {
      {"oracle equivalence on randomized networks", oracle_equivalence},
      {"closed-form degenerate cases", closed_forms},
      {"metric invariants", invariants},
      {"rollup conservation and weighted mileage", rollup_conservation},
      {"adjacency predicate correctness", adjacency_correctness},
      {"deterministic serialization", determinism},
      {"published-number reproduction", published_reproduction},
      {"end-to-end CLI pipeline against goldens", cli_pipeline},
  };

  int failures = 0;
  int index = 0;
  for (const auto& [name, body] : criteria) {
    ++index;
    std::string status, detail;
    try {
      detail = body();
      status = "PASS";
    } catch (const Skip& s) {
      status = "SKIP";
      detail = s.what();
    } catch (const std::exception& e) {
      status = "FAIL";
      detail = e.what();
      ++failures;
    }
    std::cout << "[" << index << "] " << name << ": " << status;
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << "\n";
  }
  return failures == 0 ? 0 : 1;
}
