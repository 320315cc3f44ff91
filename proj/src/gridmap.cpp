#include "calmapf/gridmap.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <numeric>
#include <queue>
#include <sstream>

#include "calmapf/error.hpp"
#include "calmapf/rng.hpp"

namespace calmapf {

namespace {

// clockwise from north
constexpr std::array<Pos, 4> kDirections{{{-1, 0}, {0, 1}, {1, 0}, {0, -1}}};

std::optional<CellKind> kind_of_char(char c)
{
  switch (c) {
    case '@': return CellKind::Obstacle;
    case '.': return CellKind::Aisle;
    case 'S': return CellKind::Shelf;
    case 'C': return CellKind::Cache;
    case 'U': return CellKind::Port;
    default: return std::nullopt;
  }
}

std::string describe(const GridMap& map, Vertex v)
{
  const Pos p = map.pos(v);
  std::ostringstream os;
  os << "(" << p.row << "," << p.col << ")";
  return os.str();
}

}  // namespace

char to_char(CellKind kind)
{
  switch (kind) {
    case CellKind::Obstacle: return '@';
    case CellKind::Aisle: return '.';
    case CellKind::Shelf: return 'S';
    case CellKind::Cache: return 'C';
    case CellKind::Port: return 'U';
  }
  return '?';
}

bool GridMap::can_move(Vertex from, Vertex to) const
{
  if (!traversable(from) || !traversable(to)) return false;
  if (from == to) return true;
  const Pos a = pos(from);
  const Pos b = pos(to);
  if (std::abs(a.row - b.row) + std::abs(a.col - b.col) != 1) return false;
  const CellKind kf = kind(from);
  const CellKind kt = kind(to);
  if (kt == CellKind::Shelf) return kf == CellKind::Aisle;
  if (kf == CellKind::Shelf) return kt == CellKind::Aisle;
  return true;
}

std::vector<Vertex> GridMap::neighbors(Vertex v) const
{
  std::vector<Vertex> out;
  out.reserve(5);
  out.push_back(v);
  const Pos p = pos(v);
  for (const Pos d : kDirections) {
    const Pos q{p.row + d.row, p.col + d.col};
    if (!in_bounds(q)) continue;
    const Vertex u = vertex(q);
    if (can_move(v, u)) out.push_back(u);
  }
  return out;
}

std::optional<int> GridMap::port_index(Vertex v) const
{
  const auto it = std::find(ports_.begin(), ports_.end(), v);
  if (it == ports_.end()) return std::nullopt;
  return static_cast<int>(it - ports_.begin());
}

std::string GridMap::to_text() const
{
  std::string out;
  out.reserve(static_cast<std::size_t>(rows_ * (cols_ + 1)));
  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < cols_; ++c) out.push_back(to_char(kind(Pos{r, c})));
    out.push_back('\n');
  }
  return out;
}

void GridMap::rebuild_lists()
{
  shelves_.clear();
  caches_.clear();
  ports_.clear();
  aisles_.clear();
  for (Vertex v = 0; v < size(); ++v) {
    switch (kind(v)) {
      case CellKind::Shelf: shelves_.push_back(v); break;
      case CellKind::Cache: caches_.push_back(v); break;
      case CellKind::Port: ports_.push_back(v); break;
      case CellKind::Aisle: aisles_.push_back(v); break;
      case CellKind::Obstacle: break;
    }
  }
}

GridMap parse_map(std::string_view text)
{
  std::vector<std::string> lines;
  {
    std::size_t start = 0;
    while (start <= text.size()) {
      std::size_t end = text.find('\n', start);
      if (end == std::string_view::npos) end = text.size();
      std::string line(text.substr(start, end - start));
      if (!line.empty() && line.back() == '\r') line.pop_back();
      lines.push_back(std::move(line));
      start = end + 1;
    }
  }
  // leading '#' header lines, trailing blank lines
  std::size_t first = 0;
  while (first < lines.size() && !lines[first].empty() && lines[first][0] == '#')
    ++first;
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (first >= lines.size()) throw Error(ErrorCode::MalformedMap, "empty map");

  GridMap map;
  map.rows_ = static_cast<int>(lines.size() - first);
  map.cols_ = static_cast<int>(lines[first].size());
  if (map.cols_ == 0) throw Error(ErrorCode::MalformedMap, "empty first row");
  map.cells_.reserve(static_cast<std::size_t>(map.rows_ * map.cols_));
  for (std::size_t i = first; i < lines.size(); ++i) {
    const auto& line = lines[i];
    const int row = static_cast<int>(i - first);
    if (static_cast<int>(line.size()) != map.cols_) {
      throw Error(ErrorCode::MalformedMap,
                  "row " + std::to_string(row) + " has length " +
                      std::to_string(line.size()) + ", expected " +
                      std::to_string(map.cols_));
    }
    for (std::size_t c = 0; c < line.size(); ++c) {
      const auto k = kind_of_char(line[c]);
      if (!k) {
        throw Error(ErrorCode::MalformedMap,
                    std::string("unknown character '") + line[c] + "' at (" +
                        std::to_string(row) + "," + std::to_string(c) + ")");
      }
      map.cells_.push_back(*k);
    }
  }
  map.rebuild_lists();
  if (map.ports_.empty()) throw Error(ErrorCode::MalformedMap, "no ports");
  if (map.shelves_.empty()) throw Error(ErrorCode::MalformedMap, "no shelves");
  if (map.aisles_.empty()) throw Error(ErrorCode::MalformedMap, "no aisles");

  // The move relation is symmetric, so one BFS from an aisle finds the
  // component every aisle must share with all shelves, caches and ports.
  std::vector<char> seen(static_cast<std::size_t>(map.size()), 0);
  std::queue<Vertex> open;
  open.push(map.aisles_.front());
  seen[static_cast<std::size_t>(map.aisles_.front())] = 1;
  while (!open.empty()) {
    const Vertex v = open.front();
    open.pop();
    for (const Vertex u : map.neighbors(v)) {
      if (!seen[static_cast<std::size_t>(u)]) {
        seen[static_cast<std::size_t>(u)] = 1;
        open.push(u);
      }
    }
  }
  for (Vertex v = 0; v < map.size(); ++v) {
    if (map.traversable(v) && !seen[static_cast<std::size_t>(v)]) {
      throw Error(ErrorCode::UnreachableCell,
                  std::string(1, to_char(map.kind(v))) + " cell " +
                      describe(map, v) + " is not reachable from the aisles");
    }
  }
  return map;
}

GridMap load_map(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open map " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_map(buf.str());
}

std::vector<Pos> neighbors(const GridMap& map, Pos v)
{
  std::vector<Pos> out;
  for (const Vertex u : map.neighbors(map.vertex(v))) out.push_back(map.pos(u));
  return out;
}

GridMap assign_items(GridMap map, std::uint64_t seed)
{
  const auto n = map.shelves_.size();
  map.item_of_shelf_.resize(n);
  std::iota(map.item_of_shelf_.begin(), map.item_of_shelf_.end(), 0);
  Rng rng(seed);
  rng.shuffle(map.item_of_shelf_);
  map.shelf_of_item_.assign(n, kNoVertex);
  for (std::size_t i = 0; i < n; ++i) {
    map.shelf_of_item_[static_cast<std::size_t>(map.item_of_shelf_[i])] =
        map.shelves_[i];
  }
  return map;
}

DistanceField shortest_dist(const GridMap& map, Vertex target)
{
  DistanceField dist(static_cast<std::size_t>(map.size()), kUnreachable);
  if (!map.traversable(target)) return dist;
  std::queue<Vertex> open;
  dist[static_cast<std::size_t>(target)] = 0;
  open.push(target);
  while (!open.empty()) {
    const Vertex u = open.front();
    open.pop();
    const int d = dist[static_cast<std::size_t>(u)] + 1;
    // predecessors of u: cells w with a legal move w -> u
    const Pos p = map.pos(u);
    for (const Pos dir : kDirections) {
      const Pos q{p.row + dir.row, p.col + dir.col};
      if (!map.in_bounds(q)) continue;
      const Vertex w = map.vertex(q);
      if (dist[static_cast<std::size_t>(w)] != kUnreachable) continue;
      if (!map.can_move(w, u)) continue;
      dist[static_cast<std::size_t>(w)] = d;
      open.push(w);
    }
  }
  return dist;
}

std::vector<int> nearest_port_of_caches(const GridMap& map)
{
  std::vector<DistanceField> port_dist;
  port_dist.reserve(map.ports().size());
  for (const Vertex p : map.ports()) port_dist.push_back(shortest_dist(map, p));
  std::vector<int> out;
  out.reserve(map.caches().size());
  for (const Vertex c : map.caches()) {
    int best = 0;
    for (std::size_t k = 1; k < port_dist.size(); ++k) {
      if (port_dist[k][static_cast<std::size_t>(c)] <
          port_dist[static_cast<std::size_t>(best)][static_cast<std::size_t>(c)])
        best = static_cast<int>(k);
    }
    out.push_back(best);
  }
  return out;
}

GridMap select_cache_subset(GridMap map, int n)
{
  const int total = static_cast<int>(map.caches_.size());
  if (n < 0 || n > total) {
    throw Error(ErrorCode::InvalidCacheCount,
                "requested " + std::to_string(n) + " of " +
                    std::to_string(total) + " caches");
  }
  if (n == total) return map;
  const int groups = static_cast<int>(map.ports_.size());
  if (n % groups != 0) {
    throw Error(ErrorCode::InvalidCacheCount,
                std::to_string(n) + " caches cannot be split evenly over " +
                    std::to_string(groups) + " groups");
  }
  const int per_group = n / groups;
  const auto owner = nearest_port_of_caches(map);
  for (int g = 0; g < groups; ++g) {
    // column -> caches of this group in that column
    std::map<int, std::vector<Vertex>, std::greater<>> by_column;
    int count = 0;
    for (std::size_t i = 0; i < map.caches_.size(); ++i) {
      if (owner[i] != g) continue;
      by_column[map.pos(map.caches_[i]).col].push_back(map.caches_[i]);
      ++count;
    }
    for (const auto& [col, cells] : by_column) {
      if (count <= per_group) break;
      for (const Vertex v : cells)
        map.cells_[static_cast<std::size_t>(v)] = CellKind::Aisle;
      count -= static_cast<int>(cells.size());
    }
    if (count != per_group) {
      throw Error(ErrorCode::InvalidCacheCount,
                  "group " + std::to_string(g) + " cannot keep exactly " +
                      std::to_string(per_group) +
                      " caches by removing whole columns");
    }
  }
  map.rebuild_lists();
  return map;
}

std::vector<Group> build_groups(const GridMap& map, GroupMode mode,
                                int agent_count)
{
  const int nports = static_cast<int>(map.ports().size());
  if (agent_count < 1)
    throw Error(ErrorCode::InvalidConfig, "need at least one agent");
  std::vector<Group> groups;
  if (mode == GroupMode::SinglePort) {
    if (nports != 1) {
      throw Error(ErrorCode::InvalidConfig,
                  "single-port mode needs a map with exactly one port, got " +
                      std::to_string(nports));
    }
    Group g;
    g.id = 0;
    g.port = map.ports().front();
    g.caches = map.caches();
    for (AgentId i = 0; i < agent_count; ++i) g.agents.push_back(i);
    groups.push_back(std::move(g));
    return groups;
  }
  if (agent_count % nports != 0) {
    throw Error(ErrorCode::IndivisibleAgents,
                std::to_string(agent_count) +
                    " agents cannot be split evenly over " +
                    std::to_string(nports) + " ports");
  }
  groups.resize(static_cast<std::size_t>(nports));
  for (int k = 0; k < nports; ++k) {
    groups[static_cast<std::size_t>(k)].id = k;
    groups[static_cast<std::size_t>(k)].port =
        map.ports()[static_cast<std::size_t>(k)];
  }
  const auto owner = nearest_port_of_caches(map);
  for (std::size_t i = 0; i < map.caches().size(); ++i)
    groups[static_cast<std::size_t>(owner[i])].caches.push_back(map.caches()[i]);
  for (AgentId i = 0; i < agent_count; ++i)
    groups[static_cast<std::size_t>(i % nports)].agents.push_back(i);
  return groups;
}

std::vector<int> group_of_agents(const std::vector<Group>& groups,
                                 int agent_count)
{
  std::vector<int> out(static_cast<std::size_t>(agent_count), -1);
  for (const auto& g : groups)
    for (const AgentId a : g.agents) out[static_cast<std::size_t>(a)] = g.id;
  return out;
}

}  // namespace calmapf
