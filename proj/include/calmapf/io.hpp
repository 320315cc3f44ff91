/*
 * output formats: metrics JSON, heatmap / per-task / event / queue CSV and the
 * path log
 */
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "calmapf/gridmap.hpp"
#include "calmapf/sim.hpp"
#include "calmapf/solver.hpp"

namespace calmapf {

inline constexpr int kMetricsSchemaVersion = 1;

// One object: schema_version, config echo, makespan, hit_rate, counters.
nlohmann::ordered_json metrics_json(const SimConfig& config,
                                    const RunMetrics& metrics);

std::string heatmap_csv(const RunMetrics& metrics);
std::string per_task_csv(const RunMetrics& metrics);
std::string events_csv(const std::vector<StatusEvent>& events);
std::string queues_csv(const std::vector<std::vector<Task>>& queues);
std::string cache_ops_csv(const std::vector<CacheOpRecord>& ops);

// Header line `# calmapf-paths v1 rows=R cols=C agents=N steps=T`, then T+1
// lines of comma-separated `row:col` agent positions.
std::string path_log(const GridMap& map, const std::vector<Config>& paths);
// Throws Error{MalformedLog} on any syntax or size mismatch.
std::vector<Config> parse_path_log(const GridMap& map, const std::string& text);

struct VerifyReport {
  bool ok = true;
  std::size_t steps = 0;
  std::size_t failed_step = 0;  // step index t: move from line t to line t+1
  std::optional<ConflictReport> conflict;
};

VerifyReport verify_paths(const GridMap& map, const std::vector<Config>& paths);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace calmapf
