#include "dacq/ea.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dacq {

std::vector<long long> allocate(std::span<const UtilityEstimate> estimates,
                                long long total_budget,
                                std::span<const long long> spent,
                                Allocation strategy) {
  if (estimates.size() != spent.size())
    throw std::invalid_argument("allocate: estimates and spent must align");
  long long spent_total = 0;
  for (long long s : spent) spent_total += s;
  if (spent_total > total_budget)
    throw std::invalid_argument("allocate: spent exceeds the total budget");
  const long long target = total_budget - spent_total;
  const std::size_t m = estimates.size();

  std::vector<double> w(m);
  for (std::size_t i = 0; i < m; ++i)
    w[i] = strategy == Allocation::Linear ? estimates[i].u_hat
                                          : std::sqrt(estimates[i].u_hat);
  double wsum = std::accumulate(w.begin(), w.end(), 0.0);

  std::vector<long long> out(m, 0);
  std::vector<double> remainder(m, 0.0);
  long long assigned = 0;
  if (wsum <= 0.0) {
    // No utility signal: uniform split of the remainder.
    for (std::size_t i = 0; i < m; ++i) {
      out[i] = target / static_cast<long long>(m);
      assigned += out[i];
    }
    for (std::size_t i = 0; assigned < target; ++assigned, ++i) out[i] += 1;
    return out;
  }

  for (std::size_t i = 0; i < m; ++i) {
    double raw = static_cast<double>(total_budget) * w[i] / wsum -
                 static_cast<double>(spent[i]);
    if (raw < 0.0) raw = 0.0;
    out[i] = static_cast<long long>(std::floor(raw));
    remainder[i] = raw - static_cast<double>(out[i]);
    assigned += out[i];
  }

  // Rank by utility, high first; used for handing out surplus and, in the
  // opposite direction, for absorbing overshoot introduced by the clamping.
  std::vector<std::size_t> rank(m);
  std::iota(rank.begin(), rank.end(), 0);
  std::stable_sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) {
    return estimates[a].u_hat > estimates[b].u_hat;
  });

  if (assigned < target) {
    std::vector<std::size_t> by_rem(m);
    std::iota(by_rem.begin(), by_rem.end(), 0);
    std::stable_sort(by_rem.begin(), by_rem.end(), [&](std::size_t a, std::size_t b) {
      if (remainder[a] != remainder[b]) return remainder[a] > remainder[b];
      return estimates[a].u_hat > estimates[b].u_hat;
    });
    for (std::size_t i = 0; assigned < target; ++assigned, ++i) out[by_rem[i % m]] += 1;
  } else if (assigned > target) {
    for (auto it = rank.rbegin(); it != rank.rend() && assigned > target; ++it) {
      long long take = std::min(out[*it], assigned - target);
      out[*it] -= take;
      assigned -= take;
    }
  }
  return out;
}

namespace {

struct EARun {
  Provider& provider;
  ConsumerHoldings& holdings;
  AcquisitionLog& log;
  long long remaining;
  std::vector<std::vector<Record>> acquired;  // estimation-stage fresh sets
  std::vector<char> dead;                     // predicate exhausted

  // Issues one query, clamped to the remaining budget; merges the records
  // into the holdings and the per-predicate fresh set.
  long long issue(std::size_t p, long long want, Phase phase) {
    want = std::min(want, remaining);
    if (want <= 0 || dead[p]) return 0;
    auto result = provider.answer(Query{holdings.predicates()[p], want});
    auto got = static_cast<long long>(result.records.size());
    if (got < want) dead[p] = 1;
    Interaction inter;
    inter.predicate = p;
    inter.requested = want;
    inter.received = got;
    inter.phase = phase;
    for (const auto& r : result.records) inter.ids.push_back(r.id);
    log.interactions.push_back(std::move(inter));
    log.total_charged += result.charged;
    remaining -= result.charged;
    holdings.add_all(result.records);
    for (auto& r : result.records) acquired[p].push_back(std::move(r));
    return got;
  }
};

}  // namespace

AcquisitionLog run_ea(Provider& provider, ConsumerHoldings& holdings,
                      const EAConfig& config, long long budget, Rng& rng) {
  (void)rng;  // EA itself is deterministic; randomness lives in the provider
  if (!(config.l_percent > 0.0 && config.l_percent <= 100.0))
    throw std::invalid_argument("ea: l must be in (0,100]");
  if (!(config.delta > 0.0 && config.delta < 1.0))
    throw std::invalid_argument("ea: delta must be in (0,1)");
  if (config.grid_size < 1) throw std::invalid_argument("ea: grid_size must be >= 1");
  if (budget < 0) throw std::invalid_argument("ea: negative budget");

  const auto& meta = provider.metadata();
  const std::size_t m = meta.predicate_counts.size();

  AcquisitionLog log;
  if (budget == 0) return log;

  EARun run{provider, holdings, log, budget,
            std::vector<std::vector<Record>>(m), std::vector<char>(m, 0)};

  // Snapshot of the pre-run holdings: the novelty class-0 sets. The fresh
  // sets acquired below must stay disjoint from them.
  std::vector<std::vector<Record>> owned0(m);
  for (std::size_t p = 0; p < m; ++p) {
    auto span = holdings.for_predicate(p);
    owned0[p].assign(span.begin(), span.end());
  }

  // Initialization: l% of each predicate's pool, at least 2 records so the
  // t machinery has a degree of freedom to work with.
  for (std::size_t p = 0; p < m && run.remaining > 0; ++p) {
    if (meta.predicate_counts[p] == 0) {
      run.dead[p] = 1;
      continue;
    }
    auto want = static_cast<long long>(std::ceil(
        config.l_percent / 100.0 * static_cast<double>(meta.predicate_counts[p])));
    run.issue(p, std::max<long long>(want, 2), Phase::Init);
  }

  std::vector<UtilityEstimate> estimates(m);
  auto refresh = [&](std::size_t p) {
    auto n = static_cast<long long>(run.acquired[p].size());
    double u = 0.0;
    if (n > 0) {
      auto clf = BinaryClassifier::train(config.clf, holdings.schema(), owned0[p],
                                         run.acquired[p]);
      u = novelty(clf, run.acquired[p]);
    }
    double a0 = estimates[p].a0, s0 = estimates[p].s0;
    estimates[p] = make_estimate(p, u, n, a0, s0);
  };
  for (std::size_t p = 0; p < m; ++p) refresh(p);
  // Freeze A and S at their initialization values; they approximate the
  // population quantities for the record-requirement projections.
  for (std::size_t p = 0; p < m; ++p) {
    estimates[p].a0 = estimates[p].n >= 2
                          ? -t_ppf(config.delta / 2.0,
                                   static_cast<double>(estimates[p].n - 1))
                          : 0.0;
    estimates[p].s0 = estimates[p].s;
  }

  // Estimation stage: keep buying while a smaller error bound is predicted to
  // pay for itself in heuristic reward.
  while (run.remaining > 0) {
    auto decision = optimize_epsilon(estimates, run.remaining, config.delta,
                                     config.grid_size);
    if (decision.reward_now >= decision.reward_star) break;
    auto deficits = record_deficits(estimates, decision.eps_star);
    long long bought = 0;
    for (std::size_t p = 0; p < m; ++p) {
      if (deficits[p] <= 0 || run.dead[p]) continue;
      bought += run.issue(p, deficits[p], Phase::Estimation);
      refresh(p);
    }
    if (bought == 0) break;  // every deficient predicate is exhausted
  }

  // Allocation stage.
  std::vector<long long> spent(m);
  for (std::size_t p = 0; p < m; ++p) spent[p] = static_cast<long long>(run.acquired[p].size());
  auto shares = allocate(estimates, budget, spent, config.allocation);

  std::vector<std::size_t> rank(m);
  std::iota(rank.begin(), rank.end(), 0);
  std::stable_sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) {
    return estimates[a].u_hat > estimates[b].u_hat;
  });
  for (std::size_t p : rank) {
    if (run.remaining <= 0) break;
    run.issue(p, shares[p], Phase::Allocation);
  }
  // Shortfalls from exhausted predicates flow down the utility ranking until
  // the budget is spent or the pool is empty.
  while (run.remaining > 0) {
    bool progressed = false;
    for (std::size_t p : rank) {
      if (run.remaining <= 0) break;
      if (run.dead[p]) continue;
      progressed |= run.issue(p, run.remaining, Phase::Allocation) > 0;
    }
    if (!progressed) break;
  }

  log.status = run.remaining > 0 ? RunStatus::PoolExhausted : RunStatus::Completed;
  return log;
}

}  // namespace dacq
