/*
 * lifelong simulation loop and metrics
 */
#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "calmapf/assigner.hpp"
#include "calmapf/cachestore.hpp"
#include "calmapf/gridmap.hpp"
#include "calmapf/solver.hpp"
#include "calmapf/taskgen.hpp"

namespace calmapf {

enum class DistKind { MK, Zhang, File };

std::string_view to_string(DistKind kind);
std::optional<DistKind> parse_dist(std::string_view text);
std::string_view to_string(GroupMode mode);
std::optional<GroupMode> parse_group_mode(std::string_view text);

struct SimConfig {
  // parsed map without item placement; shared read-only between runs
  std::shared_ptr<const GridMap> map;
  std::string map_name;           // echoed in metrics
  int caches = -1;                // active caches, -1 keeps all
  int agents = 1;
  std::optional<GroupMode> mode;  // default: single when the map has one port
  Policy policy = Policy::LRU;
  DistKind dist = DistKind::MK;
  int mk_window = 200;
  int mk_kinds = 20;
  std::string dist_file;          // echoed in metrics
  std::shared_ptr<const FrequencyTable> frequency;  // required for DistKind::File
  int queue_len = 1000;           // total over groups unless queue_per_group
  bool queue_per_group = false;
  std::uint64_t seed = 0;
  std::int64_t step_cap = 0;      // 0: 100 * (rows + cols) * queue length
  std::int64_t time_budget_ms = 0;  // 0: off

  bool record_paths = false;
  bool record_events = false;
  bool record_cache_ops = false;
  bool check_invariants = false;  // throws on the first violation
};

struct RunMetrics {
  Timestep makespan = 0;
  Timestep steps = 0;
  std::uint64_t delivered = 0;
  std::uint64_t cache_hits = 0;
  std::uint64_t cache_misses = 0;
  double hit_rate = 0.0;
  std::uint64_t total_waits = 0;
  std::uint64_t fulfilled_cache_read = 0;
  std::uint64_t fulfilled_shelf_direct = 0;
  std::uint64_t fulfilled_shelf_then_cache_write = 0;
  int rows = 0;
  int cols = 0;
  std::vector<std::uint64_t> wait_counts;  // row-major
  std::vector<Delivery> per_task;
};

struct RunResult {
  RunMetrics metrics;
  std::vector<Config> paths;          // initial configuration + one per step
  std::vector<StatusEvent> events;
  std::vector<CacheOpRecord> cache_ops;
  std::vector<std::vector<Task>> queues;  // per group
  Config starts;
  int invariant_checks = 0;
};

// true for a cache hit: one count per delivered task
bool hit_accounting(Fulfillment fulfillment);

// wait_counts / makespan, row-major
std::vector<double> heatmap(const RunMetrics& metrics);

// Throws Error for invalid configs (before the run) and for
// LivelockSuspected / TimeoutExceeded / invariant failures during it.
RunResult run(const SimConfig& config);

// Hook called after every TA event with the assigner state, for tests that
// watch invariants or transitions step by step.
using EventObserver = std::function<void(Timestep, const TaskAssigner&)>;
RunResult run(const SimConfig& config, const EventObserver& observer);

// validates cross-field constraints; throws Error
void validate_config(const SimConfig& config);

}  // namespace calmapf
