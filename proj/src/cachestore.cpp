#include "calmapf/cachestore.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "calmapf/error.hpp"

namespace calmapf {

std::string_view to_string(Policy policy)
{
  switch (policy) {
    case Policy::LRU: return "lru";
    case Policy::FIFO: return "fifo";
    case Policy::RANDOM: return "random";
    case Policy::NONE: return "none";
  }
  return "none";
}

std::optional<Policy> parse_policy(std::string_view text)
{
  if (text == "lru") return Policy::LRU;
  if (text == "fifo") return Policy::FIFO;
  if (text == "random") return Policy::RANDOM;
  if (text == "none") return Policy::NONE;
  return std::nullopt;
}

std::string to_csv_line(const CacheOpRecord& rec)
{
  static constexpr const char* kOps[] = {"check", "insert", "release"};
  std::ostringstream os;
  os << rec.timestep << ',' << kOps[static_cast<int>(rec.op)] << ','
     << rec.agent << ',' << rec.item << ',' << rec.grid << ','
     << (rec.success ? "ok" : "miss");
  return os.str();
}

std::vector<std::size_t> evict_order(Policy policy,
                                     const std::vector<const CacheGrid*>& occupied,
                                     Rng& rng)
{
  std::vector<std::size_t> order(occupied.size());
  std::iota(order.begin(), order.end(), 0);
  switch (policy) {
    case Policy::LRU:
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) {
                         return occupied[a]->last_used < occupied[b]->last_used;
                       });
      break;
    case Policy::FIFO:
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) {
                         return occupied[a]->inserted_at <
                                occupied[b]->inserted_at;
                       });
      break;
    case Policy::RANDOM:
      rng.shuffle(order);
      break;
    case Policy::NONE:
      break;
  }
  return order;
}

CacheStore::CacheStore(std::vector<Vertex> positions, Policy policy,
                       std::uint64_t seed)
    : policy_(policy), rng_(seed)
{
  grids_.reserve(positions.size());
  for (const Vertex v : positions) {
    by_position_.emplace(v, grids_.size());
    CacheGrid g;
    g.position = v;
    grids_.push_back(std::move(g));
  }
}

void CacheStore::record(Timestep t, CacheOp op, AgentId agent, ItemId item,
                        Vertex grid, bool success)
{
  if (op_log_ != nullptr) op_log_->push_back({t, op, agent, item, grid, success});
}

std::optional<Vertex> CacheStore::locked_grid_of(AgentId agent) const
{
  const auto it = lock_holder_.find(agent);
  if (it == lock_holder_.end()) return std::nullopt;
  return grids_[it->second].position;
}

bool CacheStore::holds_read_lock(AgentId agent, Vertex position) const
{
  const auto it = by_position_.find(position);
  return it != by_position_.end() &&
         grids_[it->second].read_locks.count(agent) > 0;
}

bool CacheStore::holds_write_lock(AgentId agent, Vertex position) const
{
  const auto it = by_position_.find(position);
  return it != by_position_.end() && grids_[it->second].write_lock == agent;
}

CheckResult CacheStore::check(AgentId agent, ItemId item, Timestep now,
                              CheckMode mode)
{
  if (lock_holder_.count(agent) > 0) {
    throw Error(ErrorCode::LockAlreadyHeld,
                "agent " + std::to_string(agent) + " checks while holding a lock");
  }
  const auto it = by_item_.find(item);
  if (policy_ != Policy::NONE && it != by_item_.end()) {
    CacheGrid& g = grids_[it->second];
    if (!g.write_lock) {
      g.read_locks.insert(agent);
      g.last_used = now;
      lock_holder_[agent] = it->second;
      ++hits_;
      record(now, CacheOp::Check, agent, item, g.position, true);
      return CheckResult::Hit(g.position);
    }
  }
  if (mode == CheckMode::Assign) ++misses_;
  record(now, CacheOp::Check, agent, item, kNoVertex, false);
  return CheckResult::Miss();
}

void CacheStore::grant_write(std::size_t index, AgentId agent, ItemId item)
{
  grids_[index].write_lock = agent;
  lock_holder_[agent] = index;
  incoming_.insert(item);
}

InsertResult CacheStore::insert(AgentId agent, ItemId item, Timestep now)
{
  if (lock_holder_.count(agent) > 0) {
    throw Error(ErrorCode::LockAlreadyHeld,
                "agent " + std::to_string(agent) + " inserts while holding a lock");
  }
  const auto direct = [&] {
    record(now, CacheOp::Insert, agent, item, kNoVertex, false);
    return InsertResult::DirectToPort();
  };
  if (policy_ == Policy::NONE) return direct();
  if (by_item_.count(item) > 0 || incoming_.count(item) > 0) return direct();

  for (std::size_t i = 0; i < grids_.size(); ++i) {
    const CacheGrid& g = grids_[i];
    if (!g.item && !g.write_lock && g.read_locks.empty()) {
      grant_write(i, agent, item);
      record(now, CacheOp::Insert, agent, item, g.position, true);
      return InsertResult::Write(g.position);
    }
  }

  std::vector<const CacheGrid*> occupied;
  std::vector<std::size_t> occupied_index;
  for (std::size_t i = 0; i < grids_.size(); ++i) {
    if (grids_[i].item) {
      occupied.push_back(&grids_[i]);
      occupied_index.push_back(i);
    }
  }
  for (const std::size_t k : evict_order(policy_, occupied, rng_)) {
    const CacheGrid& g = *occupied[k];
    if (g.read_locks.empty() && !g.write_lock) {
      grant_write(occupied_index[k], agent, item);
      record(now, CacheOp::Insert, agent, item, g.position, true);
      return InsertResult::Write(g.position);
    }
  }
  return direct();
}

void CacheStore::release_all_locks(AgentId agent, ItemId item, Vertex at,
                                   Timestep now)
{
  const auto pit = by_position_.find(at);
  const auto hit = lock_holder_.find(agent);
  if (pit == by_position_.end() || hit == lock_holder_.end() ||
      hit->second != pit->second) {
    throw Error(ErrorCode::LockNotHeld,
                "agent " + std::to_string(agent) + " holds no lock at vertex " +
                    std::to_string(at));
  }
  CacheGrid& g = grids_[pit->second];
  if (g.write_lock == agent) {
    if (g.item) by_item_.erase(*g.item);
    g.item = item;
    by_item_[item] = pit->second;
    g.inserted_at = now;
    g.last_used = now;
    g.write_lock.reset();
  } else {
    g.read_locks.erase(agent);
  }
  lock_holder_.erase(hit);
  incoming_.erase(item);
  record(now, CacheOp::Release, agent, item, at, true);
}

std::optional<std::string> CacheStore::check_invariants() const
{
  std::set<ItemId> stored;
  for (const CacheGrid& g : grids_) {
    std::ostringstream where;
    where << "grid at vertex " << g.position;
    if (g.write_lock && !g.read_locks.empty())
      return where.str() + " has both a write lock and read locks";
    if (!g.item && !g.read_locks.empty())
      return where.str() + " is empty but read-locked";
    if (g.item) {
      if (!stored.insert(*g.item).second)
        return "item " + std::to_string(*g.item) + " stored twice";
      if (incoming_.count(*g.item) > 0)
        return "item " + std::to_string(*g.item) + " both stored and incoming";
    }
  }
  std::size_t writers = 0;
  for (const CacheGrid& g : grids_) writers += g.write_lock ? 1 : 0;
  if (writers != incoming_.size())
    return "incoming set size differs from the number of write locks";
  return std::nullopt;
}

}  // namespace calmapf
