#include "calmapf/taskgen.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "calmapf/error.hpp"
#include "calmapf/rng.hpp"

namespace calmapf {

std::vector<ItemId> gen_mk(int window, int kinds, int length, int universe,
                           std::uint64_t seed)
{
  if (window < 1 || kinds < 1 || length < 0 || kinds > universe ||
      kinds > window) {
    throw Error(ErrorCode::InvalidParams,
                "M-K needs 1 <= K <= min(M, universe); got M=" +
                    std::to_string(window) + " K=" + std::to_string(kinds) +
                    " universe=" + std::to_string(universe));
  }
  Rng rng(seed);
  std::vector<ItemId> pool(static_cast<std::size_t>(universe));
  std::iota(pool.begin(), pool.end(), 0);
  rng.shuffle(pool);
  // pool[0, kinds) is the active set; the rest are candidates for rotation
  constexpr Timestep kNever = std::numeric_limits<Timestep>::min();
  std::vector<Timestep> last_use(static_cast<std::size_t>(kinds), kNever);

  std::vector<ItemId> out;
  out.reserve(static_cast<std::size_t>(length));
  const double rotate_p = 1.0 / window;
  for (int t = 0; t < length; ++t) {
    if (universe > kinds && rng.bernoulli(rotate_p)) {
      const auto oldest = static_cast<std::size_t>(
          std::min_element(last_use.begin(), last_use.end()) - last_use.begin());
      if (last_use[oldest] == kNever || last_use[oldest] <= t - window) {
        const auto fresh = static_cast<std::size_t>(kinds) +
                           static_cast<std::size_t>(rng.below(
                               static_cast<std::uint64_t>(universe - kinds)));
        std::swap(pool[oldest], pool[fresh]);
        last_use[oldest] = kNever;
      }
    }
    const auto slot = static_cast<std::size_t>(
        rng.below(static_cast<std::uint64_t>(kinds)));
    out.push_back(pool[slot]);
    last_use[slot] = t;
  }
  return out;
}

ZhangPartition zhang_partition(int universe, std::uint64_t seed)
{
  if (universe < 10) {
    throw Error(ErrorCode::InvalidParams,
                "7:2:1 distribution needs at least 10 item kinds, got " +
                    std::to_string(universe));
  }
  Rng rng(seed);
  std::vector<ItemId> kinds(static_cast<std::size_t>(universe));
  std::iota(kinds.begin(), kinds.end(), 0);
  rng.shuffle(kinds);
  const auto hot = static_cast<std::size_t>(universe / 10);
  const auto warm = static_cast<std::size_t>(universe / 5);
  ZhangPartition p;
  p.hot.assign(kinds.begin(), kinds.begin() + static_cast<long>(hot));
  p.warm.assign(kinds.begin() + static_cast<long>(hot),
                kinds.begin() + static_cast<long>(hot + warm));
  p.cold.assign(kinds.begin() + static_cast<long>(hot + warm), kinds.end());
  return p;
}

std::vector<ItemId> gen_zhang(int length, int universe, std::uint64_t seed)
{
  const ZhangPartition p = zhang_partition(universe, seed);
  Rng rng(derive_seed(seed, "zhang-draws"));
  std::vector<ItemId> out;
  out.reserve(static_cast<std::size_t>(std::max(length, 0)));
  for (int t = 0; t < length; ++t) {
    const double u = rng.uniform();
    const auto& bucket = u < kZhangHotMass                  ? p.hot
                         : u < kZhangHotMass + kZhangWarmMass ? p.warm
                                                              : p.cold;
    out.push_back(bucket[static_cast<std::size_t>(rng.below(bucket.size()))]);
  }
  return out;
}

namespace {

std::string trim(std::string s)
{
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

}  // namespace

FrequencyTable parse_frequency_csv(const std::string& text, int universe)
{
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool header_seen = false;
  struct Row {
    std::string label;
    double count;
  };
  std::vector<Row> rows;
  std::unordered_set<std::string> labels;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != "item,count") {
        throw Error(ErrorCode::MalformedCsv,
                    "expected header 'item,count', got '" + line + "'");
      }
      header_seen = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw Error(ErrorCode::MalformedCsv,
                  "line " + std::to_string(lineno) + ": expected two fields");
    }
    std::string label = trim(line.substr(0, comma));
    const std::string count_text = trim(line.substr(comma + 1));
    double count = 0.0;
    const auto [ptr, ec] = std::from_chars(
        count_text.data(), count_text.data() + count_text.size(), count);
    if (label.empty() || ec != std::errc{} ||
        ptr != count_text.data() + count_text.size() || !std::isfinite(count) ||
        count < 0.0) {
      throw Error(ErrorCode::MalformedCsv,
                  "line " + std::to_string(lineno) + ": bad row '" + line + "'");
    }
    if (!labels.insert(label).second) {
      throw Error(ErrorCode::MalformedCsv,
                  "line " + std::to_string(lineno) + ": duplicate item '" +
                      label + "'");
    }
    rows.push_back({std::move(label), count});
  }
  if (!header_seen) throw Error(ErrorCode::MalformedCsv, "missing header");
  std::stable_sort(rows.begin(), rows.end(),
                   [](const Row& a, const Row& b) { return a.count > b.count; });
  if (universe >= 0 && rows.size() > static_cast<std::size_t>(universe))
    rows.resize(static_cast<std::size_t>(universe));
  double total = 0.0;
  for (const Row& r : rows) total += r.count;
  if (rows.empty() || total <= 0.0)
    throw Error(ErrorCode::EmptyTable, "frequency table has no mass");
  FrequencyTable table;
  table.entries.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    table.entries.push_back(
        {static_cast<ItemId>(i), rows[i].count / total, std::move(rows[i].label)});
  }
  return table;
}

FrequencyTable load_frequency_csv(const std::filesystem::path& path,
                                  int universe)
{
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_frequency_csv(buf.str(), universe);
}

std::vector<ItemId> gen_empirical(const FrequencyTable& table, int length,
                                  std::uint64_t seed)
{
  if (table.entries.empty())
    throw Error(ErrorCode::EmptyTable, "frequency table is empty");
  std::vector<double> cdf;
  cdf.reserve(table.entries.size());
  double acc = 0.0;
  for (const auto& e : table.entries) {
    acc += e.probability;
    cdf.push_back(acc);
  }
  Rng rng(seed);
  std::vector<ItemId> out;
  out.reserve(static_cast<std::size_t>(std::max(length, 0)));
  for (int t = 0; t < length; ++t) {
    const double u = rng.uniform() * acc;
    auto k = static_cast<std::size_t>(
        std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    k = std::min(k, cdf.size() - 1);
    // skip zero-probability entries that share the cdf step
    while (table.entries[k].probability <= 0.0 && k > 0) --k;
    out.push_back(table.entries[k].item);
  }
  return out;
}

int max_distinct_in_windows(const std::vector<ItemId>& items, int window)
{
  if (items.empty() || window < 1) return 0;
  const auto w = std::min(static_cast<std::size_t>(window), items.size());
  std::unordered_map<ItemId, int> counts;
  int best = 0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    ++counts[items[i]];
    if (i >= w) {
      auto it = counts.find(items[i - w]);
      if (--it->second == 0) counts.erase(it);
    }
    if (i + 1 >= w) best = std::max(best, static_cast<int>(counts.size()));
  }
  return best;
}

}  // namespace calmapf
