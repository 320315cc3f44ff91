/*
 * warehouse grid map
 *
 * Cell taxonomy: obstacle '@', aisle '.', shelf 'S', cache 'C', unloading
 * port 'U'. Shelves may only be entered from / left into aisle cells; caches
 * and ports are traversed like aisles.
 */
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "calmapf/types.hpp"

namespace calmapf {

enum class CellKind : std::uint8_t { Obstacle, Aisle, Shelf, Cache, Port };

char to_char(CellKind kind);

class GridMap {
 public:
  GridMap() = default;

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int size() const { return rows_ * cols_; }

  Vertex vertex(Pos p) const { return p.row * cols_ + p.col; }
  Pos pos(Vertex v) const { return {v / cols_, v % cols_}; }
  bool in_bounds(Pos p) const
  {
    return p.row >= 0 && p.row < rows_ && p.col >= 0 && p.col < cols_;
  }

  CellKind kind(Vertex v) const { return cells_[static_cast<std::size_t>(v)]; }
  CellKind kind(Pos p) const { return kind(vertex(p)); }
  bool traversable(Vertex v) const { return kind(v) != CellKind::Obstacle; }

  // Legality of a single move (including the wait move from == to).
  bool can_move(Vertex from, Vertex to) const;

  // Wait first, then legal 4-neighbor moves clockwise from north.
  std::vector<Vertex> neighbors(Vertex v) const;

  // cell lists in reading order
  const std::vector<Vertex>& shelves() const { return shelves_; }
  const std::vector<Vertex>& caches() const { return caches_; }
  const std::vector<Vertex>& ports() const { return ports_; }
  const std::vector<Vertex>& aisles() const { return aisles_; }

  // number of item kinds (== number of shelves)
  int item_count() const { return static_cast<int>(shelves_.size()); }
  bool items_assigned() const { return !item_of_shelf_.empty(); }
  // item stored on the shelf at shelves()[shelf_index]
  ItemId item_of_shelf(int shelf_index) const
  {
    return item_of_shelf_[static_cast<std::size_t>(shelf_index)];
  }
  Vertex shelf_of_item(ItemId item) const
  {
    return shelf_of_item_[static_cast<std::size_t>(item)];
  }
  std::optional<int> port_index(Vertex v) const;

  std::string to_text() const;

 private:
  friend GridMap parse_map(std::string_view text);
  friend GridMap assign_items(GridMap map, std::uint64_t seed);
  friend GridMap select_cache_subset(GridMap map, int n);

  void rebuild_lists();

  int rows_ = 0;
  int cols_ = 0;
  std::vector<CellKind> cells_;
  std::vector<Vertex> shelves_;
  std::vector<Vertex> caches_;
  std::vector<Vertex> ports_;
  std::vector<Vertex> aisles_;
  std::vector<ItemId> item_of_shelf_;
  std::vector<Vertex> shelf_of_item_;
};

// Throws Error{MalformedMap | UnreachableCell}. Items are not yet assigned.
GridMap parse_map(std::string_view text);
GridMap load_map(const std::filesystem::path& path);

std::vector<Pos> neighbors(const GridMap& map, Pos v);

// Seeded uniform permutation of item indices over shelves.
GridMap assign_items(GridMap map, std::uint64_t seed);

// Keep exactly n caches by turning whole cache columns into aisle, right to
// left, inside each port's cache block. Throws Error{InvalidCacheCount}.
GridMap select_cache_subset(GridMap map, int n);

// BFS distance (in moves) from every cell to `target` under the movement
// rule; kUnreachable for cells that cannot reach it.
using DistanceField = std::vector<int>;
DistanceField shortest_dist(const GridMap& map, Vertex target);

// Index of the nearest port (BFS distance, ties -> lower port index) for
// every cache in map.caches().
std::vector<int> nearest_port_of_caches(const GridMap& map);

enum class GroupMode { SinglePort, MultiPort };

struct Group {
  int id = 0;
  Vertex port = kNoVertex;
  std::vector<Vertex> caches;
  std::vector<AgentId> agents;
  std::vector<Task> queue;
};

// Throws Error{IndivisibleAgents} in multi-port mode when agent_count is not
// a multiple of the port count, Error{InvalidConfig} for single-port mode on
// a map with several ports.
std::vector<Group> build_groups(const GridMap& map, GroupMode mode,
                                int agent_count);

// Group of each agent id, from a group list.
std::vector<int> group_of_agents(const std::vector<Group>& groups,
                                 int agent_count);

}  // namespace calmapf
