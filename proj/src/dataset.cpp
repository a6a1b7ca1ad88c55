#include "dacq/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace dacq {

double Schema::mean_feature_span() const {
  if (feature_ranges.empty()) return 0.0;
  double total = 0.0;
  for (const auto& r : feature_ranges) total += r.hi - r.lo;
  return total / static_cast<double>(feature_ranges.size());
}

void Schema::validate() const {
  if (dimension == 0) throw std::invalid_argument("schema: dimension must be positive");
  if (feature_ranges.size() != dimension)
    throw std::invalid_argument("schema: feature_ranges must have one entry per dimension");
  for (const auto& r : feature_ranges)
    if (!(r.lo <= r.hi)) throw std::invalid_argument("schema: feature range with min > max");
  if (task == Task::Classification && labels.empty())
    throw std::invalid_argument("schema: classification needs a non-empty label set");
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, std::size_t row, std::size_t col) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    std::ostringstream msg;
    msg << "csv: non-numeric value '" << s << "' at row " << row << ", column " << col;
    throw std::runtime_error(msg.str());
  }
  return v;
}

int parse_int(const std::string& s, std::size_t row, std::size_t col) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    std::ostringstream msg;
    msg << "csv: non-integer label '" << s << "' at row " << row << ", column " << col;
    throw std::runtime_error(msg.str());
  }
  return v;
}

}  // namespace

Dataset load_dataset(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("csv: empty input");
  auto header = split_csv_line(line);
  if (header.size() < 2)
    throw std::runtime_error("csv: header needs at least one feature and a label/target column");

  const std::string& last = header.back();
  Task task;
  if (last == "label") {
    task = Task::Classification;
  } else if (last == "target") {
    task = Task::Regression;
  } else {
    throw std::runtime_error("csv: final column must be named 'label' or 'target', got '" +
                             last + "'");
  }
  const std::size_t dim = header.size() - 1;
  for (std::size_t i = 0; i < dim; ++i) {
    std::string want = "f" + std::to_string(i);
    if (header[i] != want)
      throw std::runtime_error("csv: feature column " + std::to_string(i) +
                               " must be named '" + want + "', got '" + header[i] + "'");
  }

  Dataset data;
  data.schema.dimension = dim;
  data.schema.task = task;
  std::set<int> labels;
  std::vector<Interval> ranges(dim, Interval{0, 0});
  Interval target_range{0, 0};
  bool first = true;

  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      std::ostringstream msg;
      msg << "csv: row " << row << " has " << cells.size() << " columns, expected "
          << header.size();
      throw std::runtime_error(msg.str());
    }
    Record r;
    r.id = data.records.size();
    r.features.resize(dim);
    for (std::size_t c = 0; c < dim; ++c) {
      double v = parse_double(cells[c], row, c);
      r.features[c] = v;
      if (first) {
        ranges[c] = {v, v};
      } else {
        ranges[c].lo = std::min(ranges[c].lo, v);
        ranges[c].hi = std::max(ranges[c].hi, v);
      }
    }
    if (task == Task::Classification) {
      int label = parse_int(cells[dim], row, dim);
      if (label < 0)
        throw std::runtime_error("csv: negative class id at row " + std::to_string(row));
      r.label = label;
      labels.insert(label);
    } else {
      double t = parse_double(cells[dim], row, dim);
      r.target = t;
      if (first) {
        target_range = {t, t};
      } else {
        target_range.lo = std::min(target_range.lo, t);
        target_range.hi = std::max(target_range.hi, t);
      }
    }
    first = false;
    data.records.push_back(std::move(r));
  }
  if (data.records.empty()) throw std::runtime_error("csv: no data rows");

  data.schema.feature_ranges = std::move(ranges);
  data.schema.labels.assign(labels.begin(), labels.end());
  data.schema.target_range = target_range;
  data.schema.validate();
  return data;
}

Dataset load_dataset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);
  return load_dataset(in);
}

void save_dataset(const Dataset& data, std::ostream& out) {
  for (std::size_t i = 0; i < data.schema.dimension; ++i) out << "f" << i << ",";
  out << (data.schema.task == Task::Classification ? "label" : "target") << "\n";
  char buf[64];
  for (const auto& r : data.records) {
    for (double v : r.features) {
      std::snprintf(buf, sizeof(buf), "%.9g", v);
      out << buf << ",";
    }
    if (data.schema.task == Task::Classification) {
      out << *r.label << "\n";
    } else {
      std::snprintf(buf, sizeof(buf), "%.9g", *r.target);
      out << buf << "\n";
    }
  }
}

void save_dataset_file(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  save_dataset(data, out);
  if (!out.good()) throw std::runtime_error("write failed: " + path);
}

}  // namespace dacq
