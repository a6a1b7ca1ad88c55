#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace dacq {

// Student-t distribution via the regularized incomplete beta function.
// Real-valued df is accepted (needed for Welch tests).
double t_pdf(double x, double df);
double t_cdf(double x, double df);
// Inverse of t_cdf, |cdf(result) - q| <= ~1e-12. Requires 0 < q < 1.
double t_ppf(double q, double df);

// Two-tail mass of the estimation-error test statistic: the probability that
// an estimate from n samples with sample sd s misses the truth by eps or
// more. Requires n >= 2; s == 0 returns 0 (any eps trivially rejects).
double z_score(double eps, long long n, double s);

// Smallest eps whose null hypothesis is rejected at level delta with the
// current sample: A * s / sqrt(n), A = -t_ppf(delta/2, n-1).
double min_epsilon(long long n, double s, double delta);

// Least number of records needed to reach error bound eps_b, given the
// frozen initialization-time A and s values: ceil((a0*s0/eps_b)^2), floor 1.
long long required_records(double a0, double s0, double eps_b);

// Per-predicate utility estimate. s is always sqrt(u_hat*(1-u_hat)); a0 and
// s0 are frozen at the end of strategy initialization and never updated.
struct UtilityEstimate {
  std::size_t predicate = 0;
  double u_hat = 0.0;
  long long n = 0;
  double s = 0.0;
  double a0 = 0.0;
  double s0 = 0.0;
};

UtilityEstimate make_estimate(std::size_t predicate, double u_hat, long long n,
                              double a0, double s0);

// Per-predicate record deficits to reach eps_b: max(0, required - n).
std::vector<long long> record_deficits(std::span<const UtilityEstimate> estimates,
                                       double eps_b);
// Sum of the deficits.
long long delta_budget(std::span<const UtilityEstimate> estimates, double eps_b);

struct EpsilonDecision {
  double eps0 = 0.0;       // minimal eps rejecting all null hypotheses now
  double eps_star = 0.0;   // candidate error bound with the best reward
  long long delta_b = 0;   // records to buy to reach eps_star
  double reward_now = 0.0;   // B' * (1 - eps0)
  double reward_star = 0.0;  // (B' - delta_b) * (1 - eps_star)
};

// Scans grid_size evenly spaced candidates in (0, eps0) and picks the one
// maximizing (B' - dB) * (1 - eps_b) among candidates that are affordable and
// actually require a purchase. Falls back to eps_star = eps0 when none exist.
EpsilonDecision optimize_epsilon(std::span<const UtilityEstimate> estimates,
                                 long long remaining_budget, double delta,
                                 int grid_size);

// Welch's unequal-variance one-sided test of H_A: mean(a) > mean(b).
// Identical degenerate samples give 0.5.
double one_sided_t_test(std::span<const double> a, std::span<const double> b);

}  // namespace dacq
