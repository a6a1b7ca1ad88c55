#pragma once

#include <cstdint>
#include <vector>

namespace dacq {

enum class Phase { Init, Estimation, Allocation, Round };

struct Interaction {
  std::size_t predicate = 0;
  long long requested = 0;
  long long received = 0;
  Phase phase = Phase::Round;
  std::vector<std::uint64_t> ids;
};

enum class RunStatus { Completed, PoolExhausted };

// Full record of one strategy run: the ordered interaction sequence plus
// budget accounting. total_charged never exceeds the budget.
struct AcquisitionLog {
  std::vector<Interaction> interactions;
  long long total_charged = 0;
  RunStatus status = RunStatus::Completed;
};

const char* phase_name(Phase phase);

}  // namespace dacq
