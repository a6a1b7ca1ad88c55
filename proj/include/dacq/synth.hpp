#pragma once

#include "dacq/dataset.hpp"
#include "dacq/rng.hpp"

namespace dacq {

// Synthetic dataset generator.
//
// Classification: a 2-D Gaussian mixture with unit-variance components placed
// on a circle so that adjacent class centers are 2*separation apart (each
// cluster extends ~separation sigmas to the midpoint). noise is a label-flip
// probability.
//
// Regression: points on [0,1]^2 with a piecewise-smooth target surface plus
// Gaussian noise of the given sigma.
//
// skew > 0 makes per-class (or per-cell, for regression) counts follow a
// power law: count_i proportional to (i+1)^-skew. skew 0 is uniform.
struct SynthSpec {
  Task task = Task::Classification;
  int classes = 5;
  int cells_per_dim = 4;  // regression: skew granularity
  long long size = 10000;
  double separation = 3.0;
  double noise = 0.0;
  double skew = 0.0;
};

Dataset gen_synth(const SynthSpec& spec, Rng& rng);

}  // namespace dacq
