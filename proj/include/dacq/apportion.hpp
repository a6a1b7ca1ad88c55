#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace dacq {

// Largest-remainder apportionment of `total` units across non-negative
// weights; the outputs sum to total exactly. All-zero weights fall back to an
// even split. Ties favour the earlier entry.
inline std::vector<long long> largest_remainder_split(const std::vector<double>& weights,
                                                      long long total) {
  std::vector<long long> out(weights.size(), 0);
  if (weights.empty() || total <= 0) return out;
  std::vector<double> w = weights;
  double wsum = std::accumulate(w.begin(), w.end(), 0.0);
  if (wsum <= 0.0) {
    w.assign(w.size(), 1.0);
    wsum = static_cast<double>(w.size());
  }
  std::vector<double> remainder(w.size());
  long long assigned = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    double share = static_cast<double>(total) * w[i] / wsum;
    out[i] = static_cast<long long>(std::floor(share));
    remainder[i] = share - static_cast<double>(out[i]);
    assigned += out[i];
  }
  std::vector<std::size_t> order(w.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t i = 0; assigned < total; ++assigned, ++i)
    out[order[i % order.size()]] += 1;
  return out;
}

}  // namespace dacq
