#pragma once

#include <variant>
#include <vector>

#include "dacq/dataset.hpp"

namespace dacq {

struct LabelEquals {
  int label = 0;
};

// Axis-aligned box. Each dimension is half-open [lo, hi) except the topmost
// sub-range of the grid, which is closed so that a full grid covers every
// record exactly once.
struct Cell {
  std::vector<Interval> bounds;
  std::vector<bool> closed_hi;
};

struct Predicate {
  std::variant<LabelEquals, Cell> selector;
  std::size_t index = 0;
};

struct Query {
  Predicate predicate;
  long long count = 0;  // requested record count I
};

bool matches(const Predicate& predicate, const Record& record);

// One LabelEquals predicate per supplied label, indexed in supplied order.
std::vector<Predicate> build_label_predicates(const Schema& schema,
                                              const std::vector<int>& labels);

// n_per_dim^dimension equal-width cells over feature_ranges, row-major.
std::vector<Predicate> build_grid_predicates(const Schema& schema,
                                             std::size_t n_per_dim);

}  // namespace dacq
