/*
 * small value types shared across modules
 */
#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <vector>

namespace calmapf {

// dense cell index: row * cols + col
using Vertex = std::int32_t;
using AgentId = std::int32_t;
using ItemId = std::int32_t;
using Timestep = std::int64_t;

inline constexpr Vertex kNoVertex = -1;
inline constexpr int kUnreachable = std::numeric_limits<int>::max();

struct Pos {
  int row = 0;
  int col = 0;
  friend auto operator<=>(const Pos&, const Pos&) = default;
};

// one task queue entry: fetch `item`, deliver it to `destination`
struct Task {
  ItemId item = 0;
  Vertex destination = kNoVertex;
  int seq = 0;
  friend bool operator==(const Task&, const Task&) = default;
};

// agent id -> location
using Config = std::vector<Vertex>;

}  // namespace calmapf
