/*
 * task assigner
 *
 * Agent statuses:
 *   0 -> item not cached at assignment, heading to its shelf
 *   1 -> item cached, heading to the cache grid (read lock held)
 *   2 -> item taken from shelf, heading to a cache grid to insert it (write lock held)
 *   3 -> item taken from shelf, no writable cache, heading to the port
 *   4 -> item read from / inserted into the cache, heading to the port
 *
 * Every event runs a release pass over all agents and then a get pass, both in
 * ascending agent id.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "calmapf/cachestore.hpp"
#include "calmapf/gridmap.hpp"
#include "calmapf/types.hpp"

namespace calmapf {

enum class Status : std::uint8_t {
  ToShelf = 0,
  ToCacheRead = 1,
  ToCacheWrite = 2,
  DirectToPort = 3,
  ToPort = 4,
};

inline int to_int(Status s) { return static_cast<int>(s); }

enum class Fulfillment { ShelfDirect, ShelfThenCacheWrite, CacheRead };

std::string_view to_string(Fulfillment f);

struct AgentState {
  AgentId id = 0;
  int group = 0;
  Vertex location = kNoVertex;
  Vertex target = kNoVertex;
  Status status = Status::ToShelf;
  std::optional<Task> task;
  bool retired = false;
  Timestep assigned_at = 0;
  bool read_cache = false;   // current task served from a cache grid
  bool wrote_cache = false;  // current task's item inserted into a cache grid
};

struct Delivery {
  Task task;
  int group = 0;
  AgentId agent = 0;
  Timestep assigned_at = 0;
  Timestep delivered_at = 0;
  Fulfillment fulfillment = Fulfillment::ShelfDirect;
};

// new_status == -1 marks retirement (queue exhausted)
struct StatusEvent {
  Timestep timestep = 0;
  AgentId agent = 0;
  int old_status = 0;
  int new_status = 0;
  Vertex target = kNoVertex;
  friend bool operator==(const StatusEvent&, const StatusEvent&) = default;
};

class TaskAssigner {
 public:
  // `groups` carry their task queues; stores[g] belongs to groups[g].
  TaskAssigner(const GridMap& map, std::vector<Group> groups,
               std::vector<CacheStore> stores, const Config& starts);

  // Pops one task per agent; status 0 with the item's shelf as target.
  // Throws Error{EmptyQueue} when a group has fewer tasks than agents.
  void init_agents(Timestep now = 0);

  // A TA event: record new locations, then release pass and get pass.
  void on_event(const Config& locations, Timestep now);

  void agent_release_locks(Timestep now);
  void agent_get_locks(Timestep now);
  void agent_reach_port(AgentState& agent, Timestep now);

  // Sentinel results map to status_a (shelf target after a check miss, port
  // after a direct-to-port insert); positional results to status_b.
  void check_target(AgentState& agent, const CheckResult& result,
                    Status status_a, Status status_b, Timestep now);
  void check_target(AgentState& agent, const InsertResult& result,
                    Status status_a, Status status_b, Timestep now);

  Config targets() const;
  bool all_delivered() const { return deliveries_.size() == total_tasks_; }
  std::size_t total_tasks() const { return total_tasks_; }

  const GridMap& map() const { return *map_; }
  const std::vector<AgentState>& agents() const { return agents_; }
  const std::vector<Group>& groups() const { return groups_; }
  const std::vector<CacheStore>& stores() const { return stores_; }
  std::vector<CacheStore>& stores() { return stores_; }
  const std::vector<Delivery>& deliveries() const { return deliveries_; }
  const std::vector<StatusEvent>& events() const { return events_; }
  void set_record_events(bool on) { record_events_ = on; }

  // First violated agent/lock invariant, nullopt when consistent.
  std::optional<std::string> check_invariants() const;

 private:
  void set_status(AgentState& agent, Status status, Vertex target, Timestep now);
  bool pop_task(AgentState& agent, Timestep now);
  void deliver(AgentState& agent, Timestep now);
  Vertex port_of(const AgentState& agent) const;
  CacheStore& store_of(const AgentState& agent);

  const GridMap* map_;
  std::vector<Group> groups_;
  std::vector<CacheStore> stores_;
  std::vector<std::size_t> queue_head_;
  std::vector<AgentState> agents_;
  std::vector<Delivery> deliveries_;
  std::vector<StatusEvent> events_;
  std::size_t total_tasks_ = 0;
  bool record_events_ = false;
};

}  // namespace calmapf
