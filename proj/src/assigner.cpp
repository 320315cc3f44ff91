#include "calmapf/assigner.hpp"

#include <sstream>

#include "calmapf/error.hpp"

namespace calmapf {

std::string_view to_string(Fulfillment f)
{
  switch (f) {
    case Fulfillment::ShelfDirect: return "shelf_direct";
    case Fulfillment::ShelfThenCacheWrite: return "shelf_then_cache_write";
    case Fulfillment::CacheRead: return "cache_read";
  }
  return "shelf_direct";
}

TaskAssigner::TaskAssigner(const GridMap& map, std::vector<Group> groups,
                           std::vector<CacheStore> stores, const Config& starts)
    : map_(&map), groups_(std::move(groups)), stores_(std::move(stores))
{
  if (stores_.size() != groups_.size())
    throw Error(ErrorCode::InvalidConfig, "one cache store per group required");
  queue_head_.assign(groups_.size(), 0);
  agents_.resize(starts.size());
  for (std::size_t i = 0; i < starts.size(); ++i) {
    agents_[i].id = static_cast<AgentId>(i);
    agents_[i].location = starts[i];
    agents_[i].target = starts[i];
  }
  for (const Group& g : groups_) {
    total_tasks_ += g.queue.size();
    for (const AgentId a : g.agents) agents_[static_cast<std::size_t>(a)].group = g.id;
  }
}

Vertex TaskAssigner::port_of(const AgentState& agent) const
{
  return groups_[static_cast<std::size_t>(agent.group)].port;
}

CacheStore& TaskAssigner::store_of(const AgentState& agent)
{
  return stores_[static_cast<std::size_t>(agent.group)];
}

void TaskAssigner::set_status(AgentState& agent, Status status, Vertex target,
                              Timestep now)
{
  if (record_events_ && (status != agent.status || target != agent.target)) {
    events_.push_back(
        {now, agent.id, to_int(agent.status), to_int(status), target});
  }
  agent.status = status;
  agent.target = target;
}

bool TaskAssigner::pop_task(AgentState& agent, Timestep now)
{
  auto& head = queue_head_[static_cast<std::size_t>(agent.group)];
  const auto& queue = groups_[static_cast<std::size_t>(agent.group)].queue;
  if (head >= queue.size()) {
    agent.task.reset();
    agent.retired = true;
    agent.target = agent.location;
    if (record_events_)
      events_.push_back({now, agent.id, to_int(agent.status), -1, agent.location});
    return false;
  }
  agent.task = queue[head++];
  agent.assigned_at = now;
  agent.read_cache = false;
  agent.wrote_cache = false;
  return true;
}

void TaskAssigner::init_agents(Timestep now)
{
  for (const Group& g : groups_) {
    if (g.queue.size() < g.agents.size()) {
      throw Error(ErrorCode::EmptyQueue,
                  "group " + std::to_string(g.id) + " has " +
                      std::to_string(g.queue.size()) + " tasks for " +
                      std::to_string(g.agents.size()) + " agents");
    }
  }
  for (AgentState& agent : agents_) {
    pop_task(agent, now);
    agent.status = Status::ToShelf;
    agent.target = map_->shelf_of_item(agent.task->item);
    if (record_events_)
      events_.push_back({now, agent.id, 0, 0, agent.target});
  }
}

void TaskAssigner::on_event(const Config& locations, Timestep now)
{
  for (AgentState& agent : agents_) {
    agent.location = locations[static_cast<std::size_t>(agent.id)];
    if (agent.retired) agent.target = agent.location;
  }
  agent_release_locks(now);
  agent_get_locks(now);
}

void TaskAssigner::agent_release_locks(Timestep now)
{
  for (AgentState& agent : agents_) {
    if (agent.retired || agent.location != agent.target) continue;
    if (agent.status != Status::ToCacheRead && agent.status != Status::ToCacheWrite)
      continue;
    store_of(agent).release_all_locks(agent.id, agent.task->item,
                                      agent.location, now);
    if (agent.status == Status::ToCacheRead)
      agent.read_cache = true;
    else
      agent.wrote_cache = true;
    set_status(agent, Status::ToPort, port_of(agent), now);
  }
}

void TaskAssigner::agent_get_locks(Timestep now)
{
  for (AgentState& agent : agents_) {
    if (agent.retired) continue;
    const bool arrived = agent.location == agent.target;
    switch (agent.status) {
      case Status::ToShelf:
        if (arrived) {
          const auto r = store_of(agent).insert(agent.id, agent.task->item, now);
          check_target(agent, r, Status::DirectToPort, Status::ToCacheWrite, now);
        } else {
          const auto r = store_of(agent).check(agent.id, agent.task->item, now,
                                               CheckMode::Recheck);
          check_target(agent, r, Status::ToShelf, Status::ToCacheRead, now);
        }
        break;
      case Status::DirectToPort:
        if (arrived) {
          agent_reach_port(agent, now);
        } else {
          const auto r = store_of(agent).insert(agent.id, agent.task->item, now);
          check_target(agent, r, Status::DirectToPort, Status::ToCacheWrite, now);
        }
        break;
      case Status::ToPort:
        if (arrived) agent_reach_port(agent, now);
        break;
      case Status::ToCacheRead:
      case Status::ToCacheWrite:
        break;
    }
  }
}

void TaskAssigner::deliver(AgentState& agent, Timestep now)
{
  Delivery d;
  d.task = *agent.task;
  d.group = agent.group;
  d.agent = agent.id;
  d.assigned_at = agent.assigned_at;
  d.delivered_at = now;
  d.fulfillment = agent.read_cache    ? Fulfillment::CacheRead
                  : agent.wrote_cache ? Fulfillment::ShelfThenCacheWrite
                                      : Fulfillment::ShelfDirect;
  deliveries_.push_back(d);
}

void TaskAssigner::agent_reach_port(AgentState& agent, Timestep now)
{
  deliver(agent, now);
  if (!pop_task(agent, now)) return;
  const auto r = store_of(agent).check(agent.id, agent.task->item, now,
                                       CheckMode::Assign);
  check_target(agent, r, Status::ToShelf, Status::ToCacheRead, now);
}

void TaskAssigner::check_target(AgentState& agent, const CheckResult& result,
                                Status status_a, Status status_b, Timestep now)
{
  if (result.hit)
    set_status(agent, status_b, result.position, now);
  else
    set_status(agent, status_a, map_->shelf_of_item(agent.task->item), now);
}

void TaskAssigner::check_target(AgentState& agent, const InsertResult& result,
                                Status status_a, Status status_b, Timestep now)
{
  if (result.write)
    set_status(agent, status_b, result.position, now);
  else
    set_status(agent, status_a, port_of(agent), now);
}

Config TaskAssigner::targets() const
{
  Config out(agents_.size());
  for (const AgentState& a : agents_) out[static_cast<std::size_t>(a.id)] = a.target;
  return out;
}

std::optional<std::string> TaskAssigner::check_invariants() const
{
  for (const CacheStore& s : stores_) {
    if (auto bad = s.check_invariants()) return bad;
  }
  for (const AgentState& a : agents_) {
    const CacheStore& store = stores_[static_cast<std::size_t>(a.group)];
    const auto lock = store.locked_grid_of(a.id);
    std::ostringstream who;
    who << "agent " << a.id << " (status " << to_int(a.status) << ")";
    if (a.retired) {
      if (lock) return who.str() + " retired while holding a lock";
      continue;
    }
    switch (a.status) {
      case Status::ToShelf:
        if (lock) return who.str() + " holds a lock while shelf-bound";
        if (a.target != map_->shelf_of_item(a.task->item))
          return who.str() + " does not target its item's shelf";
        break;
      case Status::ToCacheRead: {
        if (!lock || *lock != a.target || !store.holds_read_lock(a.id, a.target))
          return who.str() + " lacks a read lock on its target";
        for (const CacheGrid& g : store.grids()) {
          if (g.position == a.target && g.item != a.task->item)
            return who.str() + " reads a grid that no longer holds its item";
        }
        break;
      }
      case Status::ToCacheWrite:
        if (!lock || *lock != a.target || !store.holds_write_lock(a.id, a.target))
          return who.str() + " lacks a write lock on its target";
        break;
      case Status::DirectToPort:
      case Status::ToPort:
        if (lock) return who.str() + " holds a lock while port-bound";
        if (a.target != port_of(a)) return who.str() + " does not target its port";
        break;
    }
  }
  return std::nullopt;
}

}  // namespace calmapf
