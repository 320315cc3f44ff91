/*
 * one-timestep joint planner and step validator
 *
 * The planner follows Priority Inheritance with Backtracking: agents are
 * handled in descending priority, each takes its best free successor and
 * pushes lower-priority occupants out of the way, falling back to waiting.
 * Head-on meetings in corridors and dead ends (shelves) are resolved with the
 * swap emulation of LaCAM*: the pusher steps back and pulls the other agent
 * after it.
 */
#pragma once

#include <array>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "calmapf/gridmap.hpp"
#include "calmapf/types.hpp"

namespace calmapf {

// Lazily computed distance fields, one per target vertex.
class DistTable {
 public:
  explicit DistTable(const GridMap& map) : map_(&map) {}

  const DistanceField& field(Vertex target);
  int get(Vertex target, Vertex from) { return field(target)[static_cast<std::size_t>(from)]; }
  std::size_t cached_fields() const { return fields_.size(); }

 private:
  const GridMap* map_;
  std::unordered_map<Vertex, DistanceField> fields_;
};

struct PriorityState {
  std::vector<double> values;

  // distinct bases: agent_id / N
  static PriorityState initial(int agent_count);
  double base(AgentId id) const
  {
    return static_cast<double>(id) / static_cast<double>(values.size());
  }
};

// Off-target agents gain 1, agents on their target reset to their base.
PriorityState update_priorities(PriorityState prio, const Config& config,
                                const Config& targets);

struct JointStep {
  Config from;
  Config to;
};

enum class ConflictKind { SizeMismatch, IllegalMove, VertexConflict, SwapConflict };

std::string_view to_string(ConflictKind kind);

struct ConflictReport {
  ConflictKind kind = ConflictKind::IllegalMove;
  AgentId first = -1;
  AgentId second = -1;  // -1 for single-agent violations
  std::string describe() const;
};

// nullopt iff every move is legal, `to` is injective and no pair swaps.
std::optional<ConflictReport> validate_step(const GridMap& map,
                                            const Config& from,
                                            const Config& to);
inline std::optional<ConflictReport> validate_step(const GridMap& map,
                                                   const JointStep& step)
{
  return validate_step(map, step.from, step.to);
}

class Planner {
 public:
  virtual ~Planner() = default;
  virtual JointStep plan_step(const Config& config, const Config& targets,
                              const PriorityState& prio) = 0;
};

class PibtPlanner final : public Planner {
 public:
  // `seed` drives the tie-break among equally good successors.
  PibtPlanner(const GridMap& map, DistTable& dist, std::uint64_t seed = 0);

  // Throws Error{NoStep} if the produced step fails validation.
  JointStep plan_step(const Config& config, const Config& targets,
                      const PriorityState& prio) override;

 private:
  bool push(AgentId ai);
  AgentId swap_partner(AgentId ai, const std::array<Vertex, 5>& cand);
  bool swap_required(AgentId pusher, AgentId puller, Vertex pusher_at,
                     Vertex puller_at);
  bool swap_possible(Vertex pusher_at, Vertex puller_at);
  // move targets of v, wait excluded
  const std::vector<Vertex>& moves(Vertex v) const
  {
    return moves_[static_cast<std::size_t>(v)];
  }
  int dist(AgentId a, Vertex v)
  {
    return dist_->get((*targets_)[static_cast<std::size_t>(a)], v);
  }

  const GridMap* map_;
  DistTable* dist_;
  std::uint64_t seed_ = 0;
  std::uint64_t step_hash_ = 0;  // seed mixed with the current config and priorities
  const Config* now_ = nullptr;
  const Config* targets_ = nullptr;
  Config next_;
  std::vector<AgentId> occupied_now_;
  std::vector<AgentId> occupied_next_;
  std::vector<std::vector<Vertex>> moves_;
};

// Convenience wrapper around PibtPlanner for a single step.
JointStep plan_step(const GridMap& map, const Config& config,
                    const Config& targets, const PriorityState& prio,
                    DistTable& dist, std::uint64_t seed = 0);

}  // namespace calmapf
