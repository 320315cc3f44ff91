#include "calmapf/solver.hpp"

#include <algorithm>
#include <tuple>
#include <array>
#include <bit>
#include <numeric>
#include <sstream>

#include "calmapf/error.hpp"
#include "calmapf/rng.hpp"

namespace calmapf {

const DistanceField& DistTable::field(Vertex target)
{
  auto it = fields_.find(target);
  if (it == fields_.end())
    it = fields_.emplace(target, shortest_dist(*map_, target)).first;
  return it->second;
}

PriorityState PriorityState::initial(int agent_count)
{
  PriorityState p;
  p.values.resize(static_cast<std::size_t>(agent_count));
  for (AgentId i = 0; i < agent_count; ++i)
    p.values[static_cast<std::size_t>(i)] = p.base(i);
  return p;
}

PriorityState update_priorities(PriorityState prio, const Config& config,
                                const Config& targets)
{
  for (std::size_t i = 0; i < prio.values.size(); ++i) {
    if (config[i] == targets[i])
      prio.values[i] = prio.base(static_cast<AgentId>(i));
    else
      prio.values[i] += 1.0;
  }
  return prio;
}

std::string_view to_string(ConflictKind kind)
{
  switch (kind) {
    case ConflictKind::SizeMismatch: return "size";
    case ConflictKind::IllegalMove: return "move";
    case ConflictKind::VertexConflict: return "vertex";
    case ConflictKind::SwapConflict: return "swap";
  }
  return "unknown";
}

std::string ConflictReport::describe() const
{
  std::ostringstream os;
  os << to_string(kind) << " conflict: agent " << first;
  if (second >= 0) os << " and agent " << second;
  return os.str();
}

std::optional<ConflictReport> validate_step(const GridMap& map,
                                            const Config& from,
                                            const Config& to)
{
  if (from.size() != to.size()) return ConflictReport{ConflictKind::SizeMismatch, -1, -1};
  const auto n = from.size();
  for (std::size_t i = 0; i < n; ++i) {
    const bool inside = from[i] >= 0 && from[i] < map.size() && to[i] >= 0 &&
                        to[i] < map.size();
    if (!inside || !map.can_move(from[i], to[i]))
      return ConflictReport{ConflictKind::IllegalMove, static_cast<AgentId>(i), -1};
  }
  std::vector<AgentId> at_from(static_cast<std::size_t>(map.size()), -1);
  std::vector<AgentId> at_to(static_cast<std::size_t>(map.size()), -1);
  for (std::size_t i = 0; i < n; ++i) {
    auto& slot = at_to[static_cast<std::size_t>(to[i])];
    if (slot >= 0)
      return ConflictReport{ConflictKind::VertexConflict, slot, static_cast<AgentId>(i)};
    slot = static_cast<AgentId>(i);
    at_from[static_cast<std::size_t>(from[i])] = static_cast<AgentId>(i);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (from[i] == to[i]) continue;
    const AgentId j = at_from[static_cast<std::size_t>(to[i])];
    if (j >= 0 && j != static_cast<AgentId>(i) &&
        to[static_cast<std::size_t>(j)] == from[i]) {
      const auto a = std::min(static_cast<AgentId>(i), j);
      const auto b = std::max(static_cast<AgentId>(i), j);
      return ConflictReport{ConflictKind::SwapConflict, a, b};
    }
  }
  return std::nullopt;
}

PibtPlanner::PibtPlanner(const GridMap& map, DistTable& dist, std::uint64_t seed)
    : map_(&map),
      dist_(&dist),
      seed_(seed),
      occupied_now_(static_cast<std::size_t>(map.size()), -1),
      occupied_next_(static_cast<std::size_t>(map.size()), -1),
      moves_(static_cast<std::size_t>(map.size()))
{
  for (Vertex v = 0; v < map.size(); ++v) {
    if (!map.traversable(v)) continue;
    auto nbrs = map.neighbors(v);
    moves_[static_cast<std::size_t>(v)].assign(nbrs.begin() + 1, nbrs.end());
  }
}

bool PibtPlanner::swap_required(AgentId pusher, AgentId puller, Vertex pusher_at,
                                Vertex puller_at)
{
  // agents sharing a target (a port, a popular shelf) gain nothing by swapping
  if ((*targets_)[static_cast<std::size_t>(pusher)] ==
      (*targets_)[static_cast<std::size_t>(puller)])
    return false;
  Vertex v_pusher = pusher_at;
  Vertex v_puller = puller_at;
  Vertex tmp = kNoVertex;
  while (dist(pusher, v_puller) < dist(pusher, v_pusher)) {
    int n = static_cast<int>(moves(v_puller).size());
    for (const Vertex u : moves(v_puller)) {
      const AgentId k = occupied_now_[static_cast<std::size_t>(u)];
      if (u == v_pusher || (moves(u).size() == 1 && k >= 0 &&
                            (*targets_)[static_cast<std::size_t>(k)] == u))
        --n;
      else
        tmp = u;
    }
    if (n >= 2) return false;  // room to pass
    if (n <= 0) break;
    v_pusher = v_puller;
    v_puller = tmp;
  }
  return dist(puller, v_pusher) < dist(puller, v_puller) &&
         (dist(pusher, v_pusher) == 0 ||
          dist(pusher, v_puller) < dist(pusher, v_pusher));
}

bool PibtPlanner::swap_possible(Vertex pusher_at, Vertex puller_at)
{
  Vertex v_pusher = pusher_at;
  Vertex v_puller = puller_at;
  Vertex tmp = kNoVertex;
  while (v_puller != pusher_at) {
    int n = static_cast<int>(moves(v_puller).size());
    for (const Vertex u : moves(v_puller)) {
      const AgentId k = occupied_now_[static_cast<std::size_t>(u)];
      if (u == v_pusher || (moves(u).size() == 1 && k >= 0 &&
                            (*targets_)[static_cast<std::size_t>(k)] == u))
        --n;
      else
        tmp = u;
    }
    if (n >= 2) return true;
    if (n <= 0) return false;
    v_pusher = v_puller;
    v_puller = tmp;
  }
  return false;
}

AgentId PibtPlanner::swap_partner(AgentId ai, const std::array<Vertex, 5>& cand)
{
  const Vertex here = (*now_)[static_cast<std::size_t>(ai)];
  const Vertex best = cand[0];
  const AgentId j = occupied_now_[static_cast<std::size_t>(best)];
  if (j >= 0 && j != ai && next_[static_cast<std::size_t>(j)] == kNoVertex &&
      swap_required(ai, j, here, best) && swap_possible(best, here))
    return j;

  // clear operation: an agent behind us would have to swap one step later
  if (best != here) {
    for (const Vertex u : moves(here)) {
      const AgentId k = occupied_now_[static_cast<std::size_t>(u)];
      if (k >= 0 && best != (*now_)[static_cast<std::size_t>(k)] &&
          swap_required(k, ai, here, best) && swap_possible(best, here))
        return k;
    }
  }
  return -1;
}

bool PibtPlanner::push(AgentId ai)
{
  const auto i = static_cast<std::size_t>(ai);
  const Vertex here = (*now_)[i];
  const DistanceField& d = dist_->field((*targets_)[i]);

  // moves clockwise from north, then wait. Sorted by distance; ties avoid
  // dead ends we do not need, then cells someone stands on now, then go by a
  // seeded hash so symmetric standoffs do not repeat forever.
  std::array<Vertex, 5> cand{};
  std::size_t count = 0;
  for (const Vertex u : moves(here)) cand[count++] = u;
  cand[count++] = here;
  const Vertex target = (*targets_)[i];
  auto key = [&](Vertex v) {
    const auto vi = static_cast<std::size_t>(v);
    const int dead_end = (v != target && v != here && moves(v).size() <= 1) ? 1 : 0;
    const int busy = (occupied_now_[vi] >= 0 && v != here) ? 1 : 0;
    const std::uint64_t tie = mix64(step_hash_ ^ mix64((static_cast<std::uint64_t>(ai) << 32) |
                                                      static_cast<std::uint32_t>(v)));
    return std::tuple{d[vi], dead_end, busy, tie};
  };
  std::stable_sort(cand.begin(), cand.begin() + static_cast<long>(count),
                   [&](Vertex a, Vertex b) { return key(a) < key(b); });

  const AgentId swap_agent = swap_partner(ai, cand);
  if (swap_agent >= 0) std::reverse(cand.begin(), cand.begin() + static_cast<long>(count));

  for (std::size_t k = 0; k < count; ++k) {
    const Vertex u = cand[k];
    if (occupied_next_[static_cast<std::size_t>(u)] >= 0) continue;
    const AgentId ak = occupied_now_[static_cast<std::size_t>(u)];
    // the occupant is already moving into our cell
    if (ak >= 0 && next_[static_cast<std::size_t>(ak)] == here) continue;
    occupied_next_[static_cast<std::size_t>(u)] = ai;
    next_[i] = u;
    if (ak >= 0 && ak != ai && next_[static_cast<std::size_t>(ak)] == kNoVertex) {
      if (!push(ak)) continue;
    }
    // pull the swap partner into the cell we leave
    if (k == 0 && swap_agent >= 0 &&
        next_[static_cast<std::size_t>(swap_agent)] == kNoVertex &&
        occupied_next_[static_cast<std::size_t>(here)] < 0) {
      occupied_next_[static_cast<std::size_t>(here)] = swap_agent;
      next_[static_cast<std::size_t>(swap_agent)] = here;
    }
    return true;
  }
  occupied_next_[static_cast<std::size_t>(here)] = ai;
  next_[i] = here;
  return false;
}

JointStep PibtPlanner::plan_step(const Config& config, const Config& targets,
                                 const PriorityState& prio)
{
  now_ = &config;
  targets_ = &targets;
  const auto n = config.size();
  step_hash_ = mix64(seed_);
  for (std::size_t i = 0; i < n; ++i) {
    step_hash_ = mix64(step_hash_ ^ static_cast<std::uint32_t>(config[i]));
    step_hash_ = mix64(step_hash_ ^ std::bit_cast<std::uint64_t>(prio.values[i]));
  }
  next_.assign(n, kNoVertex);
  for (std::size_t i = 0; i < n; ++i)
    occupied_now_[static_cast<std::size_t>(config[i])] = static_cast<AgentId>(i);

  std::vector<AgentId> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](AgentId a, AgentId b) {
    return prio.values[static_cast<std::size_t>(a)] >
           prio.values[static_cast<std::size_t>(b)];
  });
  for (const AgentId a : order) {
    if (next_[static_cast<std::size_t>(a)] == kNoVertex) push(a);
  }

  JointStep step{config, next_};
  for (std::size_t i = 0; i < n; ++i) {
    occupied_now_[static_cast<std::size_t>(config[i])] = -1;
    occupied_next_[static_cast<std::size_t>(next_[i])] = -1;
  }
  now_ = nullptr;
  targets_ = nullptr;
  if (const auto bad = validate_step(*map_, step)) {
    throw Error(ErrorCode::NoStep, "planner produced an invalid step: " +
                                       bad->describe());
  }
  return step;
}

JointStep plan_step(const GridMap& map, const Config& config,
                    const Config& targets, const PriorityState& prio,
                    DistTable& dist, std::uint64_t seed)
{
  PibtPlanner planner(map, dist, seed);
  return planner.plan_step(config, targets, prio);
}

}  // namespace calmapf
