#include "calmapf/io.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "calmapf/error.hpp"

namespace calmapf {

nlohmann::ordered_json metrics_json(const SimConfig& c, const RunMetrics& m)
{
  nlohmann::ordered_json cfg;
  cfg["map"] = c.map_name;
  cfg["agents"] = c.agents;
  cfg["caches"] = c.caches < 0 && c.map ? static_cast<int>(c.map->caches().size())
                                        : c.caches;
  cfg["groups"] = to_string(c.mode.value_or(
      c.map && c.map->ports().size() == 1 ? GroupMode::SinglePort
                                          : GroupMode::MultiPort));
  cfg["policy"] = to_string(c.policy);
  cfg["dist"] = to_string(c.dist);
  cfg["mk_m"] = c.mk_window;
  cfg["mk_k"] = c.mk_kinds;
  cfg["dist_file"] = c.dist_file;
  cfg["queue_len"] = c.queue_len;
  cfg["queue_per_group"] = c.queue_per_group;
  cfg["seed"] = c.seed;
  cfg["step_cap"] = c.step_cap;

  nlohmann::ordered_json j;
  j["schema_version"] = kMetricsSchemaVersion;
  j["config"] = std::move(cfg);
  j["makespan"] = m.makespan;
  j["hit_rate"] = m.hit_rate;
  j["cache_hits"] = m.cache_hits;
  j["cache_misses"] = m.cache_misses;
  j["delivered"] = m.delivered;
  j["steps"] = m.steps;
  j["total_waits"] = m.total_waits;
  j["fulfillment"] = {
      {"cache_read", m.fulfilled_cache_read},
      {"shelf_direct", m.fulfilled_shelf_direct},
      {"shelf_then_cache_write", m.fulfilled_shelf_then_cache_write},
  };
  return j;
}

std::string heatmap_csv(const RunMetrics& metrics)
{
  const auto grid = heatmap(metrics);
  std::ostringstream os;
  os << std::setprecision(9);
  for (int r = 0; r < metrics.rows; ++r) {
    for (int c = 0; c < metrics.cols; ++c) {
      if (c > 0) os << ',';
      os << grid[static_cast<std::size_t>(r * metrics.cols + c)];
    }
    os << '\n';
  }
  return os.str();
}

std::string per_task_csv(const RunMetrics& metrics)
{
  std::ostringstream os;
  os << "group,seq,item,agent,assigned_at,delivered_at,fulfillment\n";
  for (const Delivery& d : metrics.per_task) {
    os << d.group << ',' << d.task.seq << ',' << d.task.item << ',' << d.agent
       << ',' << d.assigned_at << ',' << d.delivered_at << ','
       << to_string(d.fulfillment) << '\n';
  }
  return os.str();
}

std::string events_csv(const std::vector<StatusEvent>& events)
{
  std::ostringstream os;
  os << "timestep,agent,old_status,new_status,target\n";
  for (const StatusEvent& e : events) {
    os << e.timestep << ',' << e.agent << ',' << e.old_status << ','
       << e.new_status << ',' << e.target << '\n';
  }
  return os.str();
}

std::string queues_csv(const std::vector<std::vector<Task>>& queues)
{
  std::ostringstream os;
  os << "seq,item,group\n";
  for (std::size_t g = 0; g < queues.size(); ++g)
    for (const Task& t : queues[g]) os << t.seq << ',' << t.item << ',' << g << '\n';
  return os.str();
}

std::string cache_ops_csv(const std::vector<CacheOpRecord>& ops)
{
  std::ostringstream os;
  os << "timestep,op,agent,item,grid,outcome\n";
  for (const auto& op : ops) os << to_csv_line(op) << '\n';
  return os.str();
}

std::string path_log(const GridMap& map, const std::vector<Config>& paths)
{
  std::ostringstream os;
  const std::size_t agents = paths.empty() ? 0 : paths.front().size();
  os << "# calmapf-paths v1 rows=" << map.rows() << " cols=" << map.cols()
     << " agents=" << agents << " steps=" << (paths.empty() ? 0 : paths.size() - 1)
     << '\n';
  for (const Config& config : paths) {
    for (std::size_t i = 0; i < config.size(); ++i) {
      if (i > 0) os << ',';
      const Pos p = map.pos(config[i]);
      os << p.row << ':' << p.col;
    }
    os << '\n';
  }
  return os.str();
}

namespace {

[[noreturn]] void bad_log(const std::string& why)
{
  throw Error(ErrorCode::MalformedLog, why);
}

long header_field(const std::string& header, const std::string& key)
{
  const std::string needle = " " + key + "=";
  const auto at = header.find(needle);
  if (at == std::string::npos) bad_log("header lacks " + key);
  const char* first = header.data() + at + needle.size();
  long value = 0;
  const auto [ptr, ec] = std::from_chars(first, header.data() + header.size(), value);
  if (ec != std::errc{} || value < 0) bad_log("bad header value for " + key);
  return value;
}

int parse_int(std::string_view s, const std::string& where)
{
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
    bad_log("bad number '" + std::string(s) + "' " + where);
  return v;
}

}  // namespace

std::vector<Config> parse_path_log(const GridMap& map, const std::string& text)
{
  std::istringstream in(text);
  std::string header;
  if (!std::getline(in, header) || header.rfind("# calmapf-paths v1", 0) != 0)
    bad_log("missing path log header");
  if (header_field(header, "rows") != map.rows() ||
      header_field(header, "cols") != map.cols())
    bad_log("path log was written for a map of different size");
  const auto agents = static_cast<std::size_t>(header_field(header, "agents"));
  const auto steps = static_cast<std::size_t>(header_field(header, "steps"));

  std::vector<Config> paths;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = "on line " + std::to_string(paths.size() + 2);
    Config config;
    std::size_t start = 0;
    while (start <= line.size()) {
      auto end = line.find(',', start);
      if (end == std::string::npos) end = line.size();
      const std::string_view tok(line.data() + start, end - start);
      const auto colon = tok.find(':');
      if (colon == std::string_view::npos) bad_log("bad position '" + std::string(tok) + "' " + where);
      const Pos p{parse_int(tok.substr(0, colon), where),
                  parse_int(tok.substr(colon + 1), where)};
      if (!map.in_bounds(p)) bad_log("position out of bounds " + where);
      config.push_back(map.vertex(p));
      start = end + 1;
    }
    if (config.size() != agents)
      bad_log("expected " + std::to_string(agents) + " positions " + where);
    paths.push_back(std::move(config));
  }
  if (paths.size() != steps + 1) {
    bad_log("expected " + std::to_string(steps + 1) + " configurations, found " +
            std::to_string(paths.size()));
  }
  return paths;
}

VerifyReport verify_paths(const GridMap& map, const std::vector<Config>& paths)
{
  VerifyReport report;
  report.steps = paths.empty() ? 0 : paths.size() - 1;
  for (std::size_t t = 0; t + 1 < paths.size(); ++t) {
    if (auto bad = validate_step(map, paths[t], paths[t + 1])) {
      report.ok = false;
      report.failed_step = t;
      report.conflict = bad;
      return report;
    }
  }
  // the initial configuration must itself be collision-free
  if (!paths.empty()) {
    if (auto bad = validate_step(map, paths.front(), paths.front())) {
      report.ok = false;
      report.conflict = bad;
    }
  }
  return report;
}

std::string read_file(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out << content;
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path);
}

}  // namespace calmapf
