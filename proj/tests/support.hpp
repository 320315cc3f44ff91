/*
 * shared test fixtures and independent oracles
 */
#pragma once

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "calmapf/gridmap.hpp"
#include "calmapf/io.hpp"

namespace calmapf::test {

inline const char* kToyMap =
    "@@@@@@@\n"
    "@S.C.U@\n"
    "@S....@\n"
    "@S.C..@\n"
    "@@@@@@@\n";

inline std::string map_path(const std::string& name)
{
  return std::string(CALMAPF_SOURCE_DIR) + "/maps/" + name;
}

inline Vertex at(const GridMap& m, int r, int c) { return m.vertex(Pos{r, c}); }

// Movement rule re-derived from the raw characters, independent of GridMap.
inline bool char_move_ok(const std::vector<std::string>& g, int r0, int c0,
                         int r1, int c1)
{
  const char a = g[r0][c0];
  const char b = g[r1][c1];
  if (a == '@' || b == '@') return false;
  if (r0 == r1 && c0 == c1) return true;
  if (std::abs(r0 - r1) + std::abs(c0 - c1) != 1) return false;
  if (b == 'S') return a == '.';
  if (a == 'S') return b == '.';
  return true;
}

inline std::vector<std::string> split_rows(const std::string& text)
{
  std::vector<std::string> rows;
  std::string line;
  for (const char c : text) {
    if (c == '\n') {
      if (!line.empty() && line[0] != '#') rows.push_back(line);
      line.clear();
    } else {
      line.push_back(c);
    }
  }
  if (!line.empty() && line[0] != '#') rows.push_back(line);
  return rows;
}

// Bellman-Ford style relaxation over every ordered cell pair: distance from
// (r, c) to the target in moves. -1 when unreachable.
inline std::vector<std::vector<int>> brute_force_dist(
    const std::vector<std::string>& g, int tr, int tc)
{
  const int rows = static_cast<int>(g.size());
  const int cols = static_cast<int>(g[0].size());
  const int inf = 1 << 29;
  std::vector<std::vector<int>> d(rows, std::vector<int>(cols, inf));
  d[tr][tc] = 0;
  for (bool changed = true; changed;) {
    changed = false;
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c)
        for (int r2 = 0; r2 < rows; ++r2)
          for (int c2 = 0; c2 < cols; ++c2) {
            if (d[r2][c2] == inf || !char_move_ok(g, r, c, r2, c2)) continue;
            if (d[r2][c2] + 1 < d[r][c]) {
              d[r][c] = d[r2][c2] + 1;
              changed = true;
            }
          }
  }
  for (auto& row : d)
    for (int& v : row)
      if (v == inf) v = -1;
  return d;
}

// Brute-force window scan with a fresh set per window.
inline int brute_force_max_distinct(const std::vector<ItemId>& items, int window)
{
  int best = 0;
  const int n = static_cast<int>(items.size());
  for (int s = 0; s + window <= n; ++s) {
    std::set<ItemId> kinds(items.begin() + s, items.begin() + s + window);
    best = std::max(best, static_cast<int>(kinds.size()));
  }
  if (n < window) best = static_cast<int>(std::set<ItemId>(items.begin(), items.end()).size());
  return best;
}

// Independent collision check on a configuration sequence: per step, the
// move rule from raw characters, distinct targets, no pairwise swaps.
inline bool brute_force_paths_ok(const GridMap& map,
                                 const std::vector<Config>& paths)
{
  const auto g = split_rows(map.to_text());
  for (std::size_t t = 0; t + 1 < paths.size(); ++t) {
    const auto& a = paths[t];
    const auto& b = paths[t + 1];
    for (std::size_t i = 0; i < a.size(); ++i) {
      const Pos p = map.pos(a[i]);
      const Pos q = map.pos(b[i]);
      if (!char_move_ok(g, p.row, p.col, q.row, q.col)) return false;
      for (std::size_t j = i + 1; j < a.size(); ++j) {
        if (b[i] == b[j]) return false;
        if (b[i] == a[j] && b[j] == a[i] && a[i] != b[i]) return false;
      }
    }
  }
  return true;
}

}  // namespace calmapf::test
