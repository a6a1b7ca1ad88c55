#include "dacq/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dacq {

namespace {

// count_i proportional to (i+1)^-skew, summing to total exactly.
std::vector<long long> skewed_counts(int groups, long long total, double skew) {
  std::vector<double> w(groups);
  for (int i = 0; i < groups; ++i) w[i] = std::pow(static_cast<double>(i + 1), -skew);
  double wsum = std::accumulate(w.begin(), w.end(), 0.0);
  std::vector<long long> out(groups);
  std::vector<double> rem(groups);
  long long assigned = 0;
  for (int i = 0; i < groups; ++i) {
    double share = static_cast<double>(total) * w[i] / wsum;
    out[i] = static_cast<long long>(std::floor(share));
    rem[i] = share - static_cast<double>(out[i]);
    assigned += out[i];
  }
  std::vector<int> order(groups);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return rem[a] > rem[b]; });
  for (int i = 0; assigned < total; ++assigned, ++i) out[order[i % groups]] += 1;
  return out;
}

// Smooth except for one step along x, so nearest-neighbour models can track it.
double surface(double x, double y) {
  double z = std::sin(2.5 * x) * std::cos(2.5 * y) + 0.5 * x;
  if (x > 0.5) z += 1.0;
  return z;
}

}  // namespace

Dataset gen_synth(const SynthSpec& spec, Rng& rng) {
  if (spec.size < 1) throw std::invalid_argument("gen_synth: size must be positive");
  const int groups = spec.task == Task::Classification
                         ? spec.classes
                         : spec.cells_per_dim * spec.cells_per_dim;
  if (groups < 1) throw std::invalid_argument("gen_synth: need at least one class/cell");
  if (spec.size < 10 * groups)
    throw std::invalid_argument("gen_synth: pool must be >= 10x the number of predicates");
  if (spec.noise < 0.0) throw std::invalid_argument("gen_synth: negative noise");

  Dataset data;
  data.schema.dimension = 2;
  data.schema.task = spec.task;

  auto counts = skewed_counts(groups, spec.size, spec.skew);

  if (spec.task == Task::Classification) {
    if (spec.noise > 1.0)
      throw std::invalid_argument("gen_synth: label-flip noise must be in [0,1]");
    // Unit-variance components on a circle; adjacent centers 2*separation
    // apart.
    double radius = spec.classes == 1
                        ? 0.0
                        : spec.separation / std::sin(M_PI / static_cast<double>(spec.classes));
    std::vector<std::pair<double, double>> centers(spec.classes);
    for (int c = 0; c < spec.classes; ++c) {
      double angle = 2.0 * M_PI * static_cast<double>(c) / static_cast<double>(spec.classes);
      centers[c] = {radius * std::cos(angle), radius * std::sin(angle)};
    }
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::uniform_int_distribution<int> any_label(0, spec.classes - 1);
    for (int c = 0; c < spec.classes; ++c) {
      for (long long i = 0; i < counts[c]; ++i) {
        Record r;
        r.id = data.records.size();
        r.features = {centers[c].first + gauss(rng), centers[c].second + gauss(rng)};
        int label = c;
        if (spec.noise > 0.0 && unif(rng) < spec.noise) label = any_label(rng);
        r.label = label;
        data.records.push_back(std::move(r));
      }
      data.schema.labels.push_back(c);
    }
  } else {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int n = spec.cells_per_dim;
    for (int cell = 0; cell < groups; ++cell) {
      int cx = cell / n, cy = cell % n;
      for (long long i = 0; i < counts[cell]; ++i) {
        double x = (static_cast<double>(cx) + unif(rng)) / static_cast<double>(n);
        double y = (static_cast<double>(cy) + unif(rng)) / static_cast<double>(n);
        Record r;
        r.id = data.records.size();
        r.features = {x, y};
        r.target = surface(x, y) + spec.noise * gauss(rng);
        data.records.push_back(std::move(r));
      }
    }
  }

  // Ranges are inferred from the generated data, as a CSV round trip would.
  data.schema.feature_ranges.assign(2, Interval{0, 0});
  for (std::size_t d = 0; d < 2; ++d) {
    data.schema.feature_ranges[d] = {data.records.front().features[d],
                                     data.records.front().features[d]};
    for (const auto& r : data.records) {
      data.schema.feature_ranges[d].lo = std::min(data.schema.feature_ranges[d].lo, r.features[d]);
      data.schema.feature_ranges[d].hi = std::max(data.schema.feature_ranges[d].hi, r.features[d]);
    }
  }
  if (spec.task == Task::Regression) {
    data.schema.target_range = {*data.records.front().target, *data.records.front().target};
    for (const auto& r : data.records) {
      data.schema.target_range.lo = std::min(data.schema.target_range.lo, *r.target);
      data.schema.target_range.hi = std::max(data.schema.target_range.hi, *r.target);
    }
  }
  data.schema.validate();
  return data;
}

}  // namespace dacq
