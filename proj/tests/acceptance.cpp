/*
 * acceptance suite: one PASS/FAIL line per criterion, exit 1 if any fails
 */
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "calmapf/cli.hpp"
#include "calmapf/io.hpp"
#include "calmapf/sim.hpp"
#include "calmapf/taskgen.hpp"
#include "reference_cache.hpp"
#include "support.hpp"

using namespace calmapf;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Verdict()> check;
};

std::shared_ptr<const GridMap> load_shared(const std::string& name)
{
  return std::make_shared<GridMap>(load_map(test::map_path(name)));
}

std::shared_ptr<const FrequencyTable> sample_table(int universe)
{
  return std::make_shared<FrequencyTable>(load_frequency_csv(
      std::string(CALMAPF_SOURCE_DIR) + "/data/sample_frequency.csv", universe));
}

template <typename T>
T median(std::vector<T> v)
{
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

// exclusivity and item uniqueness, read straight off the grid table
std::optional<std::string> lock_violation(const CacheStore& store)
{
  std::set<ItemId> items;
  for (const CacheGrid& g : store.grids()) {
    if (g.write_lock && !g.read_locks.empty()) return "read and write lock on one grid";
    if (!g.item && !g.read_locks.empty()) return "read lock on an empty grid";
    if (g.item && !items.insert(*g.item).second) return "item stored twice";
  }
  return std::nullopt;
}

fs::path scratch_dir()
{
  const fs::path dir = fs::temp_directory_path() / "calmapf_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// the fuzz suite shared by criteria 1 and 2
std::vector<SimConfig> fuzz_suite()
{
  const auto toy = load_shared("toy.map");
  const auto single = load_shared("warehouse_single.map");
  const auto multi = load_shared("warehouse_multi.map");
  const Policy policies[] = {Policy::LRU, Policy::FIFO, Policy::RANDOM, Policy::NONE};
  std::vector<SimConfig> out;
  std::uint64_t seed = 100;

  // toy map: only 3 shelves, so M-K and file tables (7:2:1 needs 10 shelves)
  for (const int agents : {4, 8})
    for (const Policy p : policies)
      for (const DistKind d : {DistKind::MK, DistKind::File})
        for (int rep = 0; rep < 4; ++rep) {
          SimConfig c;
          c.map = toy;
          c.map_name = "toy.map";
          c.agents = agents;
          c.policy = p;
          c.dist = d;
          c.mk_kinds = 1 + rep % 3;
          c.mk_window = 20;
          if (d == DistKind::File) c.frequency = sample_table(toy->item_count());
          c.queue_len = 60;
          c.seed = seed++;
          out.push_back(c);
        }

  // warehouse maps, all three distributions
  for (const int agents : {4, 8, 32})
    for (const Policy p : policies)
      for (const DistKind d : {DistKind::MK, DistKind::Zhang, DistKind::File}) {
        SimConfig c;
        c.map = (agents + static_cast<int>(p)) % 2 ? single : multi;
        c.map_name = c.map == single ? "warehouse_single.map" : "warehouse_multi.map";
        c.agents = agents;
        c.policy = p;
        c.dist = d;
        if (d == DistKind::File) c.frequency = sample_table(c.map->item_count());
        c.queue_len = 160;
        c.seed = seed++;
        out.push_back(c);
      }
  return out;
}

Verdict collision_freedom()
{
  const fs::path dir = scratch_dir();
  int runs = 0;
  int failures = 0;
  std::string first;
  for (SimConfig c : fuzz_suite()) {
    c.record_paths = true;
    const RunResult r = run(c);
    const fs::path map_file = test::map_path(c.map_name);
    const fs::path log = dir / ("paths_" + std::to_string(c.seed) + ".log");
    write_file(log.string(), path_log(*c.map, r.paths));
    std::ostringstream out;
    std::ostringstream err;
    const int code =
        cli_main({"verify", "--map", map_file.string(), "--paths", log.string()}, out, err);
    ++runs;
    if (code != 0) {
      ++failures;
      if (first.empty()) first = "seed " + std::to_string(c.seed) + ": " + err.str();
    }
  }
  fs::remove_all(dir);
  std::ostringstream d;
  d << runs << " runs verified, " << failures << " with conflicts";
  if (!first.empty()) d << " (first: " << first << ")";
  return {runs >= 100 && failures == 0, d.str()};
}

Verdict lock_safety()
{
  int runs = 0;
  long events = 0;
  std::string bad;
  for (SimConfig c : fuzz_suite()) {
    c.check_invariants = true;
    try {
      run(c, [&](Timestep t, const TaskAssigner& ta) {
        ++events;
        for (const CacheStore& s : ta.stores()) {
          if (auto v = lock_violation(s); v && bad.empty())
            bad = "seed " + std::to_string(c.seed) + " step " + std::to_string(t) + ": " + *v;
        }
      });
    } catch (const Error& e) {
      if (bad.empty()) bad = "seed " + std::to_string(c.seed) + ": " + e.what();
    }
    ++runs;
  }
  std::ostringstream d;
  d << runs << " runs, " << events << " TA events checked";
  if (!bad.empty()) d << ", violation: " << bad;
  return {bad.empty(), d.str()};
}

Verdict mk_window_bound()
{
  const int window = 200;
  const int len = 1000;
  const int universe = 1600;
  int worst_excess = 0;
  int scans = 0;
  std::vector<int> stamp(universe, -1);
  for (const int k : {1, 20, 40, 80, 120, 160}) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const auto q = gen_mk(window, k, len, universe, seed);
      // every full window, counted from scratch
      for (int s = 0; s + window <= len; ++s) {
        int distinct = 0;
        for (int i = s; i < s + window; ++i) {
          auto& st = stamp[static_cast<std::size_t>(q[static_cast<std::size_t>(i)])];
          if (st != scans) {
            st = scans;
            ++distinct;
          }
        }
        ++scans;
        worst_excess = std::max(worst_excess, distinct - k);
      }
    }
  }
  std::ostringstream d;
  d << "300 queues, " << scans << " windows, max(distinct - K) = " << worst_excess;
  return {worst_excess <= 0, d.str()};
}

Verdict zhang_fidelity()
{
  const int universe = 1600;
  const int len = 100000;
  const std::uint64_t seed = 2024;
  const ZhangPartition part = zhang_partition(universe, seed);
  const auto items = gen_zhang(len, universe, seed);
  std::vector<int> category(universe, -1);
  for (const ItemId i : part.hot) category[static_cast<std::size_t>(i)] = 0;
  for (const ItemId i : part.warm) category[static_cast<std::size_t>(i)] = 1;
  for (const ItemId i : part.cold) category[static_cast<std::size_t>(i)] = 2;
  std::array<double, 3> mass{};
  for (const ItemId i : items) mass[static_cast<std::size_t>(category[static_cast<std::size_t>(i)])] += 1.0 / len;
  const std::array<double, 3> want{0.70, 0.20, 0.10};
  const bool sizes = part.hot.size() == 160 && part.warm.size() == 320 && part.cold.size() == 1120;
  double err = 0;
  for (int k = 0; k < 3; ++k) err = std::max(err, std::abs(mass[static_cast<std::size_t>(k)] - want[static_cast<std::size_t>(k)]));
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "hot/warm/cold items %zu/%zu/%zu, mass %.4f/%.4f/%.4f, max error %.4f (tol 0.01)",
                part.hot.size(), part.warm.size(), part.cold.size(), mass[0], mass[1], mass[2], err);
  return {sizes && err <= 0.01, buf};
}

SimConfig trend_config(std::uint64_t seed)
{
  static const auto single = load_shared("warehouse_single.map");
  SimConfig c;
  c.map = single;
  c.map_name = "warehouse_single.map";
  c.agents = 32;
  c.caches = 80;
  c.dist = DistKind::MK;
  c.mk_window = 200;
  c.mk_kinds = 20;
  c.queue_len = 1000;
  c.seed = seed;
  return c;
}

Verdict degenerate_hit_rate()
{
  double worst = 1.0;
  std::ostringstream d;
  d << "hit rates";
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    SimConfig c = trend_config(seed);
    c.mk_kinds = 1;
    c.policy = Policy::LRU;
    const double h = run(c).metrics.hit_rate;
    worst = std::min(worst, h);
    d << ' ' << h;
  }
  d << " (need >= 0.95 on every seed)";
  return {worst >= 0.95, d.str()};
}

Verdict cache_benefit()
{
  std::vector<Timestep> lru;
  std::vector<Timestep> none;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SimConfig c = trend_config(seed);
    c.policy = Policy::LRU;
    lru.push_back(run(c).metrics.makespan);
    c.policy = Policy::NONE;
    none.push_back(run(c).metrics.makespan);
  }
  std::ostringstream d;
  d << "median makespan LRU " << median(lru) << " vs NONE " << median(none);
  return {median(lru) < median(none), d.str()};
}

Verdict cache_count_trend()
{
  std::vector<double> few;
  std::vector<double> all;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SimConfig c = trend_config(seed);
    c.policy = Policy::LRU;
    c.caches = 16;
    few.push_back(run(c).metrics.hit_rate);
    c.caches = 80;
    all.push_back(run(c).metrics.hit_rate);
  }
  std::ostringstream d;
  d << "median hit rate 80 caches " << median(all) << " vs 16 caches " << median(few);
  return {median(all) >= median(few), d.str()};
}

Verdict baseline_reduction()
{
  int runs = 0;
  long bad_transitions = 0;
  bool hit_zero = true;
  std::vector<SimConfig> configs;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) configs.push_back(trend_config(seed));
  for (const SimConfig& c : fuzz_suite()) configs.push_back(c);
  for (SimConfig c : configs) {
    c.policy = Policy::NONE;
    c.record_events = true;
    const RunResult r = run(c);
    ++runs;
    for (const StatusEvent& e : r.events)
      if (e.new_status == 1 || e.new_status == 2 || e.old_status == 1 || e.old_status == 2)
        ++bad_transitions;
    if (r.metrics.hit_rate != 0.0 || r.metrics.cache_hits != 0) hit_zero = false;
  }
  std::ostringstream d;
  d << runs << " NONE runs, " << bad_transitions << " status-1/2 transitions, hit_rate "
    << (hit_zero ? "0 everywhere" : "nonzero somewhere");
  return {bad_transitions == 0 && hit_zero, d.str()};
}

Verdict determinism()
{
  const fs::path dir = scratch_dir();
  int compared = 0;
  int differing = 0;
  const std::vector<std::vector<std::string>> cases{
      {"--map", test::map_path("toy.map"), "--agents", "4", "--mk-k", "2", "--policy", "random",
       "--queue-len", "80", "--seed", "9"},
      {"--map", test::map_path("warehouse_multi.map"), "--agents", "32", "--dist", "zhang",
       "--policy", "fifo", "--caches", "48", "--queue-len", "200", "--seed", "77"},
      {"--map", test::map_path("warehouse_single.map"), "--agents", "32", "--policy", "random",
       "--dist", "file", "--dist-file", std::string(CALMAPF_SOURCE_DIR) + "/data/sample_frequency.csv",
       "--queue-len", "300", "--seed", "5"},
  };
  for (std::size_t k = 0; k < cases.size(); ++k) {
    std::string files[2][2];
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path out = dir / ("case" + std::to_string(k) + "_" + std::to_string(rep));
      std::vector<std::string> args{"run"};
      args.insert(args.end(), cases[k].begin(), cases[k].end());
      for (const char* a : {"--log-paths", "--heatmap", "--out"}) args.push_back(a);
      args.push_back(out.string());
      std::ostringstream o;
      std::ostringstream e;
      if (cli_main(args, o, e) != 0) return {false, "run failed: " + e.str()};
      files[rep][0] = read_file((out / "metrics.json").string());
      files[rep][1] = read_file((out / "paths.log").string());
    }
    for (int f = 0; f < 2; ++f) {
      ++compared;
      if (files[0][f] != files[1][f]) ++differing;
    }
  }
  fs::remove_all(dir);
  std::ostringstream d;
  d << compared << " artifact pairs (metrics.json, paths.log) compared, " << differing << " differ";
  return {differing == 0, d.str()};
}

Verdict eviction_oracle()
{
  int mismatches = 0;
  std::string first;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    if (const auto m = test::replay_random_log(seed, 400)) {
      ++mismatches;
      if (first.empty()) first = "seed " + std::to_string(seed) + ": " + *m;
    }
  }
  std::ostringstream d;
  d << "1000 replayed logs, " << mismatches << " mismatches";
  if (!first.empty()) d << " (first: " << first << ")";
  return {mismatches == 0, d.str()};
}

}  // namespace

int main()
{
  const std::vector<Criterion> criteria{
      {1, "collision-freedom", 600, collision_freedom},
      {2, "lock-safety invariants", 600, lock_safety},
      {3, "M-K window bound", 10, mk_window_bound},
      {4, "7:2:1 sampler fidelity", 5, zhang_fidelity},
      {5, "degenerate-distribution hit rate", 120, degenerate_hit_rate},
      {6, "cache benefit trend", 600, cache_benefit},
      {7, "cache-count trend", 600, cache_count_trend},
      {8, "baseline reduction", 60, baseline_reduction},
      {9, "determinism", 120, determinism},
      {10, "eviction-policy oracle", 30, eviction_oracle},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget_s) {
      v.pass = false;
      v.detail += " [over time budget]";
    }
    char timing[64];
    std::snprintf(timing, sizeof timing, "%.2fs / %.0fs", secs, c.budget_s);
    std::cout << (v.pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << ": "
              << v.detail << " (" << timing << ")" << std::endl;
    if (!v.pass) ++failed;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed")
            << std::endl;
  return failed == 0 ? 0 : 1;
}
