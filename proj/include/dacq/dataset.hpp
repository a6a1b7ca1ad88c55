#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dacq {

enum class Task { Classification, Regression };

// One labeled example. Exactly one of label/target is set, matching the
// owning dataset's task.
struct Record {
  std::uint64_t id = 0;
  std::vector<double> features;
  std::optional<int> label;
  std::optional<double> target;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct Schema {
  std::size_t dimension = 0;
  Task task = Task::Classification;
  std::vector<int> labels;                // sorted unique class ids (classification)
  std::vector<Interval> feature_ranges;   // one per dimension, lo <= hi
  Interval target_range{0.0, 0.0};        // regression only

  double mean_feature_span() const;
  void validate() const;
};

struct Dataset {
  Schema schema;
  std::vector<Record> records;
};

// CSV format: header "f0,...,f{d-1},label" (int) or "...,target" (real);
// no missing values. Feature ranges and the label set are inferred, ids are
// assigned by row order starting at 0.
Dataset load_dataset(std::istream& in);
Dataset load_dataset_file(const std::string& path);
void save_dataset(const Dataset& data, std::ostream& out);
void save_dataset_file(const Dataset& data, const std::string& path);

}  // namespace dacq
