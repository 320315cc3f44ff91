/*
 * task queue generators
 *
 * All generators are pure functions of their parameters and seed and return
 * item indices in [0, universe).
 */
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "calmapf/types.hpp"

namespace calmapf {

// Every window of `window` consecutive items holds at most `kinds` distinct
// items. Keeps an active set of `kinds` items, samples uniformly from it and,
// with probability 1/window per step, swaps the active item whose last use is
// oldest for a fresh one when that use lies at least `window` steps back.
// Throws Error{InvalidParams}.
std::vector<ItemId> gen_mk(int window, int kinds, int length, int universe,
                           std::uint64_t seed);

// 7:2:1 split of the item universe.
struct ZhangPartition {
  std::vector<ItemId> cold;  // 70% of kinds, 10% of the mass
  std::vector<ItemId> warm;  // 20% of kinds, 20% of the mass
  std::vector<ItemId> hot;   // 10% of kinds, 70% of the mass
};

inline constexpr double kZhangColdMass = 0.10;
inline constexpr double kZhangWarmMass = 0.20;
inline constexpr double kZhangHotMass = 0.70;

// Throws Error{InvalidParams} when universe < 10.
ZhangPartition zhang_partition(int universe, std::uint64_t seed);
std::vector<ItemId> gen_zhang(int length, int universe, std::uint64_t seed);

struct FrequencyTable {
  // in rank order: entries[i].item == i, highest frequency first
  struct Entry {
    ItemId item = 0;
    double probability = 0.0;
    std::string label;
  };
  std::vector<Entry> entries;
};

// CSV with header `item,count`. Items are ranked by descending count (ties in
// file order) and mapped to item indices 0, 1, ...; ranks >= universe are
// dropped and the rest renormalized. Throws Error{MalformedCsv | EmptyTable}.
FrequencyTable parse_frequency_csv(const std::string& text, int universe);
FrequencyTable load_frequency_csv(const std::filesystem::path& path,
                                  int universe);

// Inverse-CDF sampling.
std::vector<ItemId> gen_empirical(const FrequencyTable& table, int length,
                                  std::uint64_t seed);

// Exhaustive scan: largest number of distinct items in any window.
int max_distinct_in_windows(const std::vector<ItemId>& items, int window);

}  // namespace calmapf
