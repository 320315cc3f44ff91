#include "calmapf/sim.hpp"

#include <chrono>

#include <spdlog/spdlog.h>

#include "calmapf/error.hpp"
#include "calmapf/rng.hpp"

namespace calmapf {

std::string_view to_string(DistKind kind)
{
  switch (kind) {
    case DistKind::MK: return "mk";
    case DistKind::Zhang: return "zhang";
    case DistKind::File: return "file";
  }
  return "mk";
}

std::optional<DistKind> parse_dist(std::string_view text)
{
  if (text == "mk") return DistKind::MK;
  if (text == "zhang") return DistKind::Zhang;
  if (text == "file") return DistKind::File;
  return std::nullopt;
}

std::string_view to_string(GroupMode mode)
{
  return mode == GroupMode::SinglePort ? "single" : "multi";
}

std::optional<GroupMode> parse_group_mode(std::string_view text)
{
  if (text == "single") return GroupMode::SinglePort;
  if (text == "multi") return GroupMode::MultiPort;
  return std::nullopt;
}

bool hit_accounting(Fulfillment fulfillment)
{
  return fulfillment == Fulfillment::CacheRead;
}

std::vector<double> heatmap(const RunMetrics& metrics)
{
  std::vector<double> out(metrics.wait_counts.size(), 0.0);
  if (metrics.makespan <= 0) return out;
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = static_cast<double>(metrics.wait_counts[i]) /
             static_cast<double>(metrics.makespan);
  return out;
}

namespace {

GroupMode effective_mode(const SimConfig& c)
{
  if (c.mode) return *c.mode;
  return c.map->ports().size() == 1 ? GroupMode::SinglePort : GroupMode::MultiPort;
}

std::vector<int> queue_lengths(const SimConfig& c, std::size_t groups)
{
  std::vector<int> out(groups, c.queue_len);
  if (c.queue_per_group) return out;
  const int g = static_cast<int>(groups);
  for (int k = 0; k < g; ++k)
    out[static_cast<std::size_t>(k)] = c.queue_len / g + (k < c.queue_len % g ? 1 : 0);
  return out;
}

std::vector<ItemId> generate_items(const SimConfig& c, int length, int universe,
                                   std::uint64_t seed)
{
  switch (c.dist) {
    case DistKind::MK:
      return gen_mk(c.mk_window, c.mk_kinds, length, universe, seed);
    case DistKind::Zhang:
      return gen_zhang(length, universe, seed);
    case DistKind::File:
      return gen_empirical(*c.frequency, length, seed);
  }
  return {};
}

}  // namespace

void validate_config(const SimConfig& c)
{
  if (!c.map) throw Error(ErrorCode::InvalidConfig, "no map");
  if (c.agents < 1) throw Error(ErrorCode::InvalidConfig, "need at least one agent");
  if (c.queue_len < 1) throw Error(ErrorCode::InvalidConfig, "queue length must be positive");
  if (c.step_cap < 0 || c.time_budget_ms < 0)
    throw Error(ErrorCode::InvalidConfig, "negative step cap or time budget");
  const int universe = c.map->item_count();
  if (c.dist == DistKind::MK &&
      (c.mk_kinds < 1 || c.mk_window < 1 || c.mk_kinds > c.mk_window ||
       c.mk_kinds > universe)) {
    throw Error(ErrorCode::InvalidParams,
                "M-K needs 1 <= K <= min(M, shelves)");
  }
  if (c.dist == DistKind::Zhang && universe < 10)
    throw Error(ErrorCode::InvalidParams, "7:2:1 distribution needs >= 10 shelves");
  if (c.dist == DistKind::File && (!c.frequency || c.frequency->entries.empty()))
    throw Error(ErrorCode::EmptyTable, "no frequency table for --dist file");
  if (c.dist == DistKind::File) {
    for (const auto& e : c.frequency->entries) {
      if (e.item >= universe)
        throw Error(ErrorCode::InvalidParams, "frequency table exceeds the shelf count");
    }
  }
  if (c.agents > static_cast<int>(c.map->aisles().size()))
    throw Error(ErrorCode::InvalidConfig, "more agents than aisle cells");
}

RunResult run(const SimConfig& config) { return run(config, nullptr); }

RunResult run(const SimConfig& c, const EventObserver& observer)
{
  validate_config(c);
  const GridMap map = assign_items(
      select_cache_subset(*c.map, c.caches < 0
                                      ? static_cast<int>(c.map->caches().size())
                                      : c.caches),
      derive_seed(c.seed, "placement"));
  std::vector<Group> groups = build_groups(map, effective_mode(c), c.agents);

  RunResult result;
  const auto lengths = queue_lengths(c, groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (lengths[g] < static_cast<int>(groups[g].agents.size())) {
      throw Error(ErrorCode::EmptyQueue,
                  "group " + std::to_string(g) + " gets " +
                      std::to_string(lengths[g]) + " tasks for " +
                      std::to_string(groups[g].agents.size()) + " agents");
    }
    const auto items = generate_items(c, lengths[g], map.item_count(),
                                      derive_seed(c.seed, "queue", g));
    for (std::size_t i = 0; i < items.size(); ++i)
      groups[g].queue.push_back({items[i], groups[g].port, static_cast<int>(i)});
    result.queues.push_back(groups[g].queue);
  }

  std::vector<CacheStore> stores;
  for (std::size_t g = 0; g < groups.size(); ++g)
    stores.emplace_back(groups[g].caches, c.policy, derive_seed(c.seed, "policy", g));
  if (c.record_cache_ops) {
    for (auto& s : stores) s.set_op_log(&result.cache_ops);
  }

  // distinct random aisle cells
  Config starts;
  {
    std::vector<Vertex> aisles = map.aisles();
    Rng rng(derive_seed(c.seed, "starts"));
    rng.shuffle(aisles);
    starts.assign(aisles.begin(), aisles.begin() + c.agents);
  }
  result.starts = starts;

  std::size_t total_tasks = 0;
  for (const auto& g : groups) total_tasks += g.queue.size();
  const std::int64_t cap =
      c.step_cap > 0 ? c.step_cap
                     : 100LL * (map.rows() + map.cols()) *
                           static_cast<std::int64_t>(total_tasks);

  TaskAssigner ta(map, std::move(groups), std::move(stores), starts);
  ta.set_record_events(c.record_events);
  ta.init_agents(0);

  DistTable dist(map);
  PibtPlanner planner(map, dist, derive_seed(c.seed, "planner"));
  PriorityState prio = PriorityState::initial(c.agents);
  Config config = starts;

  RunMetrics& m = result.metrics;
  m.rows = map.rows();
  m.cols = map.cols();
  m.wait_counts.assign(static_cast<std::size_t>(map.size()), 0);
  if (c.record_paths) result.paths.push_back(config);

  const auto started = std::chrono::steady_clock::now();
  Timestep t = 0;
  while (!ta.all_delivered()) {
    if (t >= cap) {
      throw Error(ErrorCode::LivelockSuspected,
                  "step cap " + std::to_string(cap) + " reached with " +
                      std::to_string(ta.deliveries().size()) + "/" +
                      std::to_string(total_tasks) + " tasks delivered");
    }
    if (c.time_budget_ms > 0 && (t & 63) == 0) {
      const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
          std::chrono::steady_clock::now() - started);
      if (elapsed.count() > c.time_budget_ms) {
        throw Error(ErrorCode::TimeoutExceeded,
                    "time budget of " + std::to_string(c.time_budget_ms) +
                        " ms exhausted at step " + std::to_string(t));
      }
    }
    const Config targets = ta.targets();
    const JointStep step = planner.plan_step(config, targets, prio);
    ++t;
    for (const AgentState& a : ta.agents()) {
      const auto i = static_cast<std::size_t>(a.id);
      if (!a.retired && step.to[i] == step.from[i]) {
        ++m.wait_counts[static_cast<std::size_t>(step.to[i])];
        ++m.total_waits;
      }
    }
    config = step.to;
    if (c.record_paths) result.paths.push_back(config);
    prio = update_priorities(std::move(prio), config, targets);
    ta.on_event(config, t);
    if (c.check_invariants) {
      ++result.invariant_checks;
      if (auto bad = ta.check_invariants()) {
        throw Error(ErrorCode::InvariantViolated,
                    "invariant violated at step " + std::to_string(t) + ": " + *bad);
      }
    }
    if (observer) observer(t, ta);
  }
  spdlog::debug("run finished after {} steps, {} tasks", t, total_tasks);

  m.steps = t;
  m.per_task = ta.deliveries();
  m.delivered = m.per_task.size();
  for (const Delivery& d : m.per_task) {
    m.makespan = std::max(m.makespan, d.delivered_at);
    if (hit_accounting(d.fulfillment))
      ++m.cache_hits;
    else
      ++m.cache_misses;
    switch (d.fulfillment) {
      case Fulfillment::CacheRead: ++m.fulfilled_cache_read; break;
      case Fulfillment::ShelfDirect: ++m.fulfilled_shelf_direct; break;
      case Fulfillment::ShelfThenCacheWrite: ++m.fulfilled_shelf_then_cache_write; break;
    }
  }
  m.hit_rate = m.delivered == 0 ? 0.0
                                : static_cast<double>(m.cache_hits) /
                                      static_cast<double>(m.delivered);
  result.events = ta.events();
  return result;
}

}  // namespace calmapf
