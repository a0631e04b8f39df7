#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <utility>

#include "cnbt/error.hpp"

namespace cnbt {

/// Adjusted Rand index from the contingency table of two labelings.
///
/// When both labelings are a single cluster the index is 0/0; it is reported
/// as 1 (the partitions coincide).
inline double ari(std::span<const int> a, std::span<const int> b) {
  detail::require(a.size() == b.size(), "ari: labelings have different lengths");
  detail::require(a.size() >= 2, "ari: need at least two items");
  auto choose2 = [](std::int64_t x) { return static_cast<double>(x) * static_cast<double>(x - 1) / 2.0; };

  std::map<std::pair<int, int>, std::int64_t> cells;
  std::map<int, std::int64_t> rows, cols;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++cells[{a[i], b[i]}];
    ++rows[a[i]];
    ++cols[b[i]];
  }
  double index = 0.0, sum_a = 0.0, sum_b = 0.0;
  for (const auto& [_, c] : cells) index += choose2(c);
  for (const auto& [_, c] : rows) sum_a += choose2(c);
  for (const auto& [_, c] : cols) sum_b += choose2(c);
  const double expected = sum_a * sum_b / choose2(static_cast<std::int64_t>(a.size()));
  const double max_index = 0.5 * (sum_a + sum_b);
  if (max_index == expected) return 1.0;
  return (index - expected) / (max_index - expected);
}

}  // namespace cnbt
