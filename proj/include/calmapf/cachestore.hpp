/*
 * per-group cache store
 *
 * Each cache grid holds at most one item kind and carries a shared read-lock
 * set and an exclusive write lock. `incoming` holds the items whose insertion
 * has been granted but not yet committed.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "calmapf/rng.hpp"
#include "calmapf/types.hpp"

namespace calmapf {

enum class Policy { LRU, FIFO, RANDOM, NONE };

std::string_view to_string(Policy policy);
std::optional<Policy> parse_policy(std::string_view text);

struct CacheGrid {
  Vertex position = kNoVertex;
  std::optional<ItemId> item;
  std::set<AgentId> read_locks;
  std::optional<AgentId> write_lock;
  Timestep inserted_at = 0;
  Timestep last_used = 0;
};

struct CheckResult {
  bool hit = false;
  Vertex position = kNoVertex;  // valid when hit

  static CheckResult Hit(Vertex v) { return {true, v}; }
  static CheckResult Miss() { return {}; }
  friend bool operator==(const CheckResult&, const CheckResult&) = default;
};

struct InsertResult {
  bool write = false;
  Vertex position = kNoVertex;  // valid when write

  static InsertResult Write(Vertex v) { return {true, v}; }
  static InsertResult DirectToPort() { return {}; }
  friend bool operator==(const InsertResult&, const InsertResult&) = default;
};

// Assign: the check made when a task is handed out (counts a miss).
// Recheck: the en-route recheck of a shelf-bound agent (misses not counted).
enum class CheckMode { Assign, Recheck };

enum class CacheOp { Check, Insert, Release };

struct CacheOpRecord {
  Timestep timestep = 0;
  CacheOp op = CacheOp::Check;
  AgentId agent = 0;
  ItemId item = 0;
  Vertex grid = kNoVertex;  // granted / released grid, kNoVertex on miss
  bool success = false;
  friend bool operator==(const CacheOpRecord&, const CacheOpRecord&) = default;
};

std::string to_csv_line(const CacheOpRecord& rec);

// Eviction candidates, best first, as indices into `occupied`.
// LRU: ascending last_used; FIFO: ascending inserted_at; RANDOM: seeded
// shuffle. Ties keep list order. NONE yields the list order.
std::vector<std::size_t> evict_order(Policy policy,
                                     const std::vector<const CacheGrid*>& occupied,
                                     Rng& rng);

class CacheStore {
 public:
  CacheStore() = default;
  CacheStore(std::vector<Vertex> positions, Policy policy, std::uint64_t seed);

  CheckResult check(AgentId agent, ItemId item, Timestep now,
                    CheckMode mode = CheckMode::Assign);
  InsertResult insert(AgentId agent, ItemId item, Timestep now);
  // Throws Error{LockNotHeld} when `agent` holds no lock on the grid at `at`.
  void release_all_locks(AgentId agent, ItemId item, Vertex at, Timestep now);

  const std::vector<CacheGrid>& grids() const { return grids_; }
  const std::set<ItemId>& incoming() const { return incoming_; }
  Policy policy() const { return policy_; }
  bool contains(Vertex position) const { return by_position_.count(position) > 0; }

  // grid on which `agent` currently holds a lock, if any
  std::optional<Vertex> locked_grid_of(AgentId agent) const;
  bool holds_read_lock(AgentId agent, Vertex position) const;
  bool holds_write_lock(AgentId agent, Vertex position) const;

  std::uint64_t hits() const { return hits_; }
  std::uint64_t misses() const { return misses_; }

  // Description of the first violated store invariant, nullopt when sound.
  // Checks lock exclusivity, empty grids unlocked, item uniqueness and
  // stored/incoming disjointness.
  std::optional<std::string> check_invariants() const;

  void set_op_log(std::vector<CacheOpRecord>* log) { op_log_ = log; }

 private:
  void record(Timestep t, CacheOp op, AgentId agent, ItemId item, Vertex grid,
              bool success);
  void grant_write(std::size_t index, AgentId agent, ItemId item);

  std::vector<CacheGrid> grids_;
  std::set<ItemId> incoming_;
  Policy policy_ = Policy::NONE;
  Rng rng_;
  std::unordered_map<Vertex, std::size_t> by_position_;
  std::unordered_map<ItemId, std::size_t> by_item_;
  std::unordered_map<AgentId, std::size_t> lock_holder_;
  std::uint64_t hits_ = 0;
  std::uint64_t misses_ = 0;
  std::vector<CacheOpRecord>* op_log_ = nullptr;
};

}  // namespace calmapf
