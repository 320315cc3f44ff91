#include "calmapf/cli.hpp"

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "calmapf/error.hpp"
#include "calmapf/io.hpp"
#include "calmapf/sim.hpp"

namespace calmapf {

namespace {

namespace fs = std::filesystem;

struct CommonOptions {
  std::string map_path;
  std::string groups;
  std::string dist = "mk";
  int mk_m = 200;
  int mk_k = 20;
  std::string dist_file;
  int queue_len = 1000;
  bool queue_per_group = false;
  std::int64_t step_cap = 0;
  std::int64_t time_budget_ms = 0;
  std::string out_dir;
  bool heatmap = false;
};

void add_common(CLI::App* cmd, CommonOptions& o)
{
  cmd->add_option("--map", o.map_path, "warehouse map file")->required();
  cmd->add_option("--groups", o.groups, "single | multi (default: by port count)")
      ->check(CLI::IsMember({"single", "multi"}));
  cmd->add_option("--mk-m", o.mk_m, "M-K window length");
  cmd->add_option("--mk-k", o.mk_k, "M-K distinct kinds per window");
  cmd->add_option("--dist-file", o.dist_file, "item,count frequency CSV");
  cmd->add_option("--queue-len", o.queue_len, "total task count, split per group");
  cmd->add_flag("--queue-per-group", o.queue_per_group,
                "apply --queue-len to every group instead of splitting it");
  cmd->add_option("--step-cap", o.step_cap, "abort after this many steps (0: default)");
  cmd->add_option("--time-budget-ms", o.time_budget_ms, "wall-clock budget (0: off)");
  cmd->add_option("--out", o.out_dir, "output directory");
  cmd->add_flag("--heatmap", o.heatmap, "write per-cell wait frequencies");
}

SimConfig base_config(const CommonOptions& o,
                      const std::shared_ptr<const GridMap>& map,
                      const std::shared_ptr<const FrequencyTable>& table)
{
  SimConfig c;
  c.map = map;
  c.map_name = fs::path(o.map_path).filename().string();
  if (!o.groups.empty()) c.mode = parse_group_mode(o.groups);
  c.mk_window = o.mk_m;
  c.mk_kinds = o.mk_k;
  c.dist_file = o.dist_file.empty() ? "" : fs::path(o.dist_file).filename().string();
  c.frequency = table;
  c.queue_len = o.queue_len;
  c.queue_per_group = o.queue_per_group;
  c.step_cap = o.step_cap;
  c.time_budget_ms = o.time_budget_ms;
  return c;
}

std::shared_ptr<const FrequencyTable> maybe_load_table(const CommonOptions& o,
                                                       const GridMap& map,
                                                       bool needed)
{
  if (o.dist_file.empty()) {
    if (needed)
      throw Error(ErrorCode::InvalidConfig, "--dist file requires --dist-file");
    return nullptr;
  }
  return std::make_shared<const FrequencyTable>(
      load_frequency_csv(o.dist_file, map.item_count()));
}

void ensure_dir(const std::string& dir)
{
  if (dir.empty()) return;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir + ": " + ec.message());
}

std::string join(const std::string& dir, const std::string& name)
{
  return (fs::path(dir) / name).string();
}

int report(const Error& e, std::ostream& err)
{
  err << "error: " << e.what() << '\n';
  return is_config_error(e.code()) ? 2 : 1;
}

void setup_logging()
{
  static std::once_flag once;
  std::call_once(once, [] {
    auto logger = spdlog::stderr_color_mt("calmapf");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::warn);
    if (const char* env = std::getenv("CALMAPF_LOG"))
      spdlog::set_level(spdlog::level::from_str(env));
  });
}

std::string combo_tag(const SimConfig& c)
{
  std::ostringstream os;
  os << "a" << c.agents << "_c" << c.caches << '_' << to_string(c.policy) << '_'
     << to_string(c.dist) << "_s" << c.seed;
  return os.str();
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err)
{
  setup_logging();
  CLI::App app{"caching-augmented lifelong multi-agent path finding simulator"};
  app.require_subcommand(1);

  CommonOptions run_opts;
  int agents = 1;
  int caches = -1;
  std::string policy = "lru";
  std::uint64_t seed = 0;
  bool log_paths = false;
  bool log_events = false;
  bool log_tasks = false;
  bool log_queues = false;
  bool log_cache_ops = false;
  auto* run_cmd = app.add_subcommand("run", "run one simulation");
  add_common(run_cmd, run_opts);
  run_cmd->add_option("--agents", agents, "number of agents");
  run_cmd->add_option("--caches", caches, "active cache grids (default: all)");
  run_cmd->add_option("--policy", policy, "lru | fifo | random | none")
      ->check(CLI::IsMember({"lru", "fifo", "random", "none"}));
  run_cmd->add_option("--dist", run_opts.dist, "mk | zhang | file")
      ->check(CLI::IsMember({"mk", "zhang", "file"}));
  run_cmd->add_option("--seed", seed, "master seed");
  run_cmd->add_flag("--log-paths", log_paths, "write the per-step path log");
  run_cmd->add_flag("--log-events", log_events, "write the status transition log");
  run_cmd->add_flag("--log-tasks", log_tasks, "write the per-task completion log");
  run_cmd->add_flag("--log-queues", log_queues, "write the generated task queues");
  run_cmd->add_flag("--log-cache-ops", log_cache_ops, "write the cache operation log");

  CommonOptions sweep_opts;
  std::vector<int> sweep_agents{32};
  std::vector<int> sweep_caches{-1};
  std::vector<std::string> sweep_policies{"lru"};
  std::vector<std::string> sweep_dists;
  std::vector<std::uint64_t> sweep_seeds{0};
  unsigned jobs = 1;
  auto* sweep_cmd = app.add_subcommand("sweep", "run the cross product of settings");
  add_common(sweep_cmd, sweep_opts);
  sweep_cmd->add_option("--agents", sweep_agents, "agent counts")->delimiter(',');
  sweep_cmd->add_option("--caches", sweep_caches, "cache counts")->delimiter(',');
  sweep_cmd->add_option("--policies,--policy", sweep_policies, "policies")
      ->delimiter(',')
      ->check(CLI::IsMember({"lru", "fifo", "random", "none"}));
  sweep_cmd->add_option("--dists,--dist", sweep_dists, "distributions")
      ->delimiter(',')
      ->check(CLI::IsMember({"mk", "zhang", "file"}));
  sweep_cmd->add_option("--seeds,--seed", sweep_seeds, "seeds")->delimiter(',');
  sweep_cmd->add_option("--jobs", jobs, "parallel runs")->check(CLI::PositiveNumber);

  std::string verify_map;
  std::string verify_paths_file;
  auto* verify_cmd = app.add_subcommand("verify", "re-validate a path log");
  verify_cmd->add_option("--map", verify_map, "warehouse map file")->required();
  verify_cmd->add_option("--paths", verify_paths_file, "path log")->required();

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*run_cmd) {
      const auto map = std::make_shared<const GridMap>(load_map(run_opts.map_path));
      SimConfig c = base_config(
          run_opts, map, maybe_load_table(run_opts, *map, run_opts.dist == "file"));
      c.agents = agents;
      c.caches = caches;
      c.policy = *parse_policy(policy);
      c.dist = *parse_dist(run_opts.dist);
      c.seed = seed;
      c.record_paths = log_paths;
      c.record_events = log_events;
      c.record_cache_ops = log_cache_ops;
      const RunResult r = run(c);
      const std::string metrics = metrics_json(c, r.metrics).dump();
      out << metrics << '\n';
      if (!run_opts.out_dir.empty()) {
        ensure_dir(run_opts.out_dir);
        const auto& d = run_opts.out_dir;
        write_file(join(d, "metrics.json"), metrics + "\n");
        if (run_opts.heatmap) write_file(join(d, "heatmap.csv"), heatmap_csv(r.metrics));
        if (log_paths) write_file(join(d, "paths.log"), path_log(*map, r.paths));
        if (log_events) write_file(join(d, "events.csv"), events_csv(r.events));
        if (log_tasks) write_file(join(d, "tasks.csv"), per_task_csv(r.metrics));
        if (log_queues) write_file(join(d, "queues.csv"), queues_csv(r.queues));
        if (log_cache_ops) write_file(join(d, "cache_ops.csv"), cache_ops_csv(r.cache_ops));
      }
      return 0;
    }

    if (*sweep_cmd) {
      if (sweep_dists.empty()) sweep_dists.push_back(sweep_opts.dist);
      const auto map = std::make_shared<const GridMap>(load_map(sweep_opts.map_path));
      bool needs_file = false;
      for (const auto& d : sweep_dists) needs_file = needs_file || d == "file";
      const auto table = maybe_load_table(sweep_opts, *map, needs_file);

      std::vector<SimConfig> combos;
      for (const int a : sweep_agents)
        for (const int cc : sweep_caches)
          for (const auto& p : sweep_policies)
            for (const auto& d : sweep_dists)
              for (const auto s : sweep_seeds) {
                SimConfig c = base_config(sweep_opts, map, table);
                c.agents = a;
                c.caches = cc < 0 ? static_cast<int>(map->caches().size()) : cc;
                c.policy = *parse_policy(p);
                c.dist = *parse_dist(d);
                c.seed = s;
                combos.push_back(std::move(c));
              }
      // every combination is checked before anything runs
      for (const auto& c : combos) {
        validate_config(c);
        (void)build_groups(select_cache_subset(*c.map, c.caches),
                           c.mode.value_or(c.map->ports().size() == 1
                                               ? GroupMode::SinglePort
                                               : GroupMode::MultiPort),
                           c.agents);
      }

      const std::string dir = sweep_opts.out_dir.empty() ? "." : sweep_opts.out_dir;
      ensure_dir(dir);
      std::ofstream lines(join(dir, "sweep.jsonl"), std::ios::binary);
      if (!lines) throw Error(ErrorCode::Io, "cannot write sweep.jsonl");

      // results are flushed in combination order as soon as a prefix is done
      std::mutex mu;
      std::map<std::size_t, std::string> pending;
      std::size_t next_flush = 0;
      std::atomic<std::size_t> next_job{0};
      std::optional<Error> failure;
      const auto worker = [&] {
        for (;;) {
          const std::size_t k = next_job.fetch_add(1);
          if (k >= combos.size()) return;
          std::string line;
          try {
            const RunResult r = run(combos[k]);
            line = metrics_json(combos[k], r.metrics).dump();
            if (sweep_opts.heatmap)
              write_file(join(dir, "heatmap_" + combo_tag(combos[k]) + ".csv"),
                         heatmap_csv(r.metrics));
          } catch (const Error& e) {
            std::lock_guard lock(mu);
            if (!failure) failure = e;
            nlohmann::ordered_json j;
            j["schema_version"] = kMetricsSchemaVersion;
            j["error"] = e.what();
            j["combo"] = combo_tag(combos[k]);
            line = j.dump();
          }
          std::lock_guard lock(mu);
          pending.emplace(k, std::move(line));
          while (!pending.empty() && pending.begin()->first == next_flush) {
            lines << pending.begin()->second << '\n';
            lines.flush();
            pending.erase(pending.begin());
            ++next_flush;
          }
        }
      };
      std::vector<std::thread> pool;
      const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(combos.size())));
      for (unsigned i = 1; i < n; ++i) pool.emplace_back(worker);
      worker();
      for (auto& t : pool) t.join();
      out << "wrote " << combos.size() << " runs to " << join(dir, "sweep.jsonl") << '\n';
      if (failure) return report(*failure, err);
      return 0;
    }

    if (*verify_cmd) {
      const GridMap map = load_map(verify_map);
      const auto paths = parse_path_log(map, read_file(verify_paths_file));
      const VerifyReport rep = verify_paths(map, paths);
      if (!rep.ok) {
        err << "conflict at step " << rep.failed_step << ": "
            << rep.conflict->describe() << '\n';
        return 1;
      }
      out << "ok: " << rep.steps << " steps, " << (paths.empty() ? 0 : paths.front().size())
          << " agents, collision-free\n";
      return 0;
    }
  } catch (const Error& e) {
    return report(e, err);
  }
  return 2;
}

}  // namespace calmapf
