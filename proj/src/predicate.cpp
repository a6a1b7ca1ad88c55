#include "dacq/predicate.hpp"

#include <set>
#include <stdexcept>

namespace dacq {

bool matches(const Predicate& predicate, const Record& record) {
  if (const auto* eq = std::get_if<LabelEquals>(&predicate.selector)) {
    if (!record.label)
      throw std::invalid_argument("matches: label predicate against a record without a label");
    return *record.label == eq->label;
  }
  const auto& cell = std::get<Cell>(predicate.selector);
  if (record.features.size() != cell.bounds.size())
    throw std::invalid_argument("matches: record dimension differs from the cell's");
  for (std::size_t d = 0; d < cell.bounds.size(); ++d) {
    double v = record.features[d];
    const Interval& b = cell.bounds[d];
    if (v < b.lo) return false;
    if (cell.closed_hi[d] ? v > b.hi : v >= b.hi) return false;
  }
  return true;
}

std::vector<Predicate> build_label_predicates(const Schema& schema,
                                              const std::vector<int>& labels) {
  if (schema.task != Task::Classification)
    throw std::invalid_argument("label predicates need a classification schema");
  if (labels.empty()) throw std::invalid_argument("label predicates: empty label list");
  std::set<int> known(schema.labels.begin(), schema.labels.end());
  std::set<int> seen;
  std::vector<Predicate> out;
  out.reserve(labels.size());
  for (int label : labels) {
    if (!known.count(label))
      throw std::invalid_argument("label predicates: unknown class id " + std::to_string(label));
    if (!seen.insert(label).second)
      throw std::invalid_argument("label predicates: duplicate class id " + std::to_string(label));
    out.push_back(Predicate{LabelEquals{label}, out.size()});
  }
  return out;
}

std::vector<Predicate> build_grid_predicates(const Schema& schema, std::size_t n_per_dim) {
  if (schema.task != Task::Regression)
    throw std::invalid_argument("grid predicates need a regression schema");
  if (n_per_dim == 0) throw std::invalid_argument("grid predicates: n_per_dim must be >= 1");

  std::size_t total = 1;
  for (std::size_t d = 0; d < schema.dimension; ++d) total *= n_per_dim;

  std::vector<Predicate> out;
  out.reserve(total);
  std::vector<std::size_t> idx(schema.dimension, 0);
  for (std::size_t cell_i = 0; cell_i < total; ++cell_i) {
    Cell cell;
    cell.bounds.resize(schema.dimension);
    cell.closed_hi.resize(schema.dimension);
    // Row-major: the last dimension varies fastest.
    std::size_t rem = cell_i;
    for (std::size_t d = schema.dimension; d-- > 0;) {
      idx[d] = rem % n_per_dim;
      rem /= n_per_dim;
    }
    for (std::size_t d = 0; d < schema.dimension; ++d) {
      const Interval& range = schema.feature_ranges[d];
      double width = (range.hi - range.lo) / static_cast<double>(n_per_dim);
      cell.bounds[d].lo = range.lo + width * static_cast<double>(idx[d]);
      cell.bounds[d].hi = (idx[d] + 1 == n_per_dim)
                              ? range.hi
                              : range.lo + width * static_cast<double>(idx[d] + 1);
      cell.closed_hi[d] = (idx[d] + 1 == n_per_dim);
    }
    out.push_back(Predicate{std::move(cell), cell_i});
  }
  return out;
}

}  // namespace dacq
