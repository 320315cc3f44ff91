#include <algorithm>
#include <map>
#include <numeric>

#include "calmapf/error.hpp"
#include "calmapf/io.hpp"
#include "calmapf/sim.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace calmapf;

namespace {

// one shelf, reachable from (1,2) and (2,1); cache (1,3); port (1,5)
const char* kOneShelf =
    "@@@@@@@\n"
    "@S.C.U@\n"
    "@.....@\n"
    "@@@@@@@\n";

std::shared_ptr<const GridMap> shared_map(const char* text)
{
  return std::make_shared<GridMap>(parse_map(text));
}

std::shared_ptr<const GridMap> shared_file(const std::string& name)
{
  return std::make_shared<GridMap>(load_map(test::map_path(name)));
}

ErrorCode code_of(const SimConfig& c)
{
  try {
    run(c);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::Io;
}

// recompute wait counts from the path log: an agent waits on a step while it
// still has work, i.e. before its last delivery
std::vector<std::uint64_t> waits_from_paths(const RunResult& r, int cells)
{
  std::map<AgentId, Timestep> last;
  for (const Delivery& d : r.metrics.per_task)
    last[d.agent] = std::max(last[d.agent], d.delivered_at);
  std::vector<std::uint64_t> out(static_cast<std::size_t>(cells), 0);
  for (std::size_t t = 0; t + 1 < r.paths.size(); ++t) {
    for (std::size_t a = 0; a < r.paths[t].size(); ++a) {
      if (static_cast<Timestep>(t) >= last[static_cast<AgentId>(a)]) continue;
      if (r.paths[t][a] == r.paths[t + 1][a])
        ++out[static_cast<std::size_t>(r.paths[t][a])];
    }
  }
  return out;
}

}  // namespace

TEST_CASE("one agent, one task: makespan matches the hand trace")
{
  const auto map = shared_map(kOneShelf);
  const auto g = test::split_rows(map->to_text());
  const auto to_shelf = test::brute_force_dist(g, 1, 1);
  for (const Policy policy : {Policy::LRU, Policy::NONE}) {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
      SimConfig c;
      c.map = map;
      c.policy = policy;
      c.mk_kinds = 1;
      c.queue_len = 1;
      c.seed = seed;
      c.record_paths = true;
      c.record_events = true;
      const RunResult r = run(c);
      const Pos s = map->pos(r.starts[0]);
      // start -> shelf, then shelf -> (1,3) -> port is 4 moves either way
      const Timestep expected = to_shelf[static_cast<std::size_t>(s.row)][static_cast<std::size_t>(s.col)] + 4;
      INFO("policy " << to_string(policy) << " start " << s.row << "," << s.col);
      CHECK(r.metrics.makespan == expected);
      CHECK(r.metrics.total_waits == 0);
      REQUIRE(r.metrics.per_task.size() == 1);
      CHECK(r.metrics.per_task[0].fulfillment ==
            (policy == Policy::NONE ? Fulfillment::ShelfDirect
                                    : Fulfillment::ShelfThenCacheWrite));
      std::vector<int> statuses;
      for (const StatusEvent& e : r.events) statuses.push_back(e.new_status);
      const std::vector<int> want = policy == Policy::NONE
                                        ? std::vector<int>{0, 3, -1}
                                        : std::vector<int>{0, 2, 4, -1};
      CHECK(statuses == want);
    }
  }
}

TEST_CASE("NONE never reads a cache; LRU does at K=1")
{
  SimConfig c;
  c.map = shared_map(test::kToyMap);
  c.agents = 3;
  c.mk_kinds = 1;
  c.queue_len = 60;
  c.seed = 4;
  c.record_events = true;
  c.policy = Policy::LRU;
  const RunResult lru = run(c);
  c.policy = Policy::NONE;
  const RunResult none = run(c);
  CHECK(none.metrics.fulfilled_cache_read == 0);
  CHECK(none.metrics.hit_rate == 0.0);
  CHECK(lru.metrics.fulfilled_cache_read >= none.metrics.fulfilled_cache_read);
  CHECK(lru.metrics.hit_rate > 0.5);
  for (const StatusEvent& e : none.events) {
    CHECK(e.new_status != 1);
    CHECK(e.new_status != 2);
  }
}

TEST_CASE("same config twice gives identical output")
{
  SimConfig c;
  c.map = shared_file("warehouse_multi.map");
  c.map_name = "warehouse_multi.map";
  c.agents = 8;
  c.dist = DistKind::Zhang;
  c.policy = Policy::RANDOM;
  c.queue_len = 60;
  c.seed = 11;
  c.record_paths = true;
  const RunResult a = run(c);
  const RunResult b = run(c);
  CHECK(metrics_json(c, a.metrics).dump() == metrics_json(c, b.metrics).dump());
  CHECK(path_log(*c.map, a.paths) == path_log(*c.map, b.paths));
  CHECK(per_task_csv(a.metrics) == per_task_csv(b.metrics));
  CHECK(heatmap_csv(a.metrics) == heatmap_csv(b.metrics));
}

TEST_CASE("accounting identities over seeded runs")
{
  const auto toy = shared_map(test::kToyMap);
  const auto multi = shared_file("warehouse_multi.map");
  const Policy policies[] = {Policy::LRU, Policy::FIFO, Policy::RANDOM, Policy::NONE};
  for (std::uint64_t seed = 0; seed < 24; ++seed) {
    SimConfig c;
    const bool big = seed % 3 == 0;
    c.map = big ? multi : toy;
    c.agents = big ? 8 : 1 + static_cast<int>(seed % 5);
    c.policy = policies[seed % 4];
    c.dist = big && seed % 2 ? DistKind::Zhang : DistKind::MK;
    c.mk_kinds = big ? 20 : 1 + static_cast<int>(seed % 3);
    c.queue_len = big ? 48 : 30;
    c.seed = seed;
    c.record_paths = true;
    c.check_invariants = true;
    const RunResult r = run(c);
    const RunMetrics& m = r.metrics;
    INFO("seed " << seed);
    CHECK(m.delivered == static_cast<std::uint64_t>(c.queue_len));
    CHECK(m.cache_hits + m.cache_misses == m.delivered);
    CHECK(m.fulfilled_cache_read == m.cache_hits);
    CHECK(m.fulfilled_cache_read + m.fulfilled_shelf_direct +
              m.fulfilled_shelf_then_cache_write == m.delivered);
    Timestep last = 0;
    for (const Delivery& d : m.per_task) {
      last = std::max(last, d.delivered_at);
      CHECK(d.assigned_at <= d.delivered_at);
    }
    CHECK(m.makespan == last);
    CHECK(m.steps == static_cast<Timestep>(r.paths.size()) - 1);
    CHECK(test::brute_force_paths_ok(*c.map, r.paths));
    CHECK(m.wait_counts == waits_from_paths(r, c.map->size()));
    CHECK(std::accumulate(m.wait_counts.begin(), m.wait_counts.end(), std::uint64_t{0}) ==
          m.total_waits);
    const auto h = heatmap(m);
    const double sum = std::accumulate(h.begin(), h.end(), 0.0);
    CHECK(sum * static_cast<double>(m.makespan) ==
          doctest::Approx(static_cast<double>(m.total_waits)).epsilon(1e-9));
    CHECK(r.invariant_checks == m.steps);
  }
}

TEST_CASE("queues split across port groups")
{
  SimConfig c;
  c.map = shared_file("warehouse_multi.map");
  c.agents = 8;
  c.queue_len = 42;
  c.seed = 3;
  const RunResult r = run(c);
  REQUIRE(r.queues.size() == 4);
  CHECK(r.queues[0].size() == 11);
  CHECK(r.queues[1].size() == 11);
  CHECK(r.queues[2].size() == 10);
  CHECK(r.queues[3].size() == 10);
  for (const Delivery& d : r.metrics.per_task) CHECK(d.agent % 4 == d.group);

  c.queue_per_group = true;
  c.queue_len = 10;
  const RunResult p = run(c);
  CHECK(p.metrics.delivered == 40u);
}

TEST_CASE("configuration errors surface before the run")
{
  SimConfig c;
  c.map = shared_file("warehouse_multi.map");
  c.agents = 6;
  CHECK(code_of(c) == ErrorCode::IndivisibleAgents);

  c.agents = 8;
  c.caches = 17;
  CHECK(code_of(c) == ErrorCode::InvalidCacheCount);

  c.caches = 16;
  c.queue_len = 4;
  CHECK(code_of(c) == ErrorCode::EmptyQueue);

  c.queue_len = 100;
  c.mode = GroupMode::SinglePort;
  CHECK(code_of(c) == ErrorCode::InvalidConfig);

  c.mode.reset();
  c.mk_kinds = 300;
  CHECK(code_of(c) == ErrorCode::InvalidParams);

  SimConfig toy;
  toy.map = shared_map(test::kToyMap);
  toy.dist = DistKind::Zhang;
  CHECK(code_of(toy) == ErrorCode::InvalidParams);
  toy.dist = DistKind::File;
  CHECK(code_of(toy) == ErrorCode::EmptyTable);
}

TEST_CASE("step cap and time budget")
{
  SimConfig c;
  c.map = shared_file("warehouse_single.map");
  c.agents = 4;
  c.queue_len = 50;
  c.step_cap = 5;
  CHECK(code_of(c) == ErrorCode::LivelockSuspected);

  c.step_cap = 0;
  c.agents = 32;
  c.queue_len = 5000;
  c.time_budget_ms = 1;
  CHECK(code_of(c) == ErrorCode::TimeoutExceeded);
}

TEST_CASE("only cache reads count as hits")
{
  CHECK(hit_accounting(Fulfillment::CacheRead));
  CHECK_FALSE(hit_accounting(Fulfillment::ShelfDirect));
  CHECK_FALSE(hit_accounting(Fulfillment::ShelfThenCacheWrite));
}
