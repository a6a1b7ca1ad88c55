#include "dacq/stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dacq {

namespace {

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

// Continued fraction for the incomplete beta function (modified Lentz).
double ibeta_cf(double a, double b, double x) {
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-16;
  constexpr int kMaxIter = 500;

  double qab = a + b;
  double qap = a + 1.0;
  double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  return h;  // converged to working precision in practice
}

double reg_inc_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double bt = std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b));
  if (x < (a + 1.0) / (a + b + 2.0)) return bt * ibeta_cf(a, b, x) / a;
  return 1.0 - bt * ibeta_cf(b, a, 1.0 - x) / b;
}

}  // namespace

double t_pdf(double x, double df) {
  if (!(df > 0.0)) throw std::invalid_argument("t_pdf: df must be positive");
  double lognorm = std::lgamma((df + 1.0) / 2.0) - std::lgamma(df / 2.0) -
                   0.5 * std::log(df * M_PI);
  return std::exp(lognorm - (df + 1.0) / 2.0 * std::log1p(x * x / df));
}

double t_cdf(double x, double df) {
  if (!(df > 0.0)) throw std::invalid_argument("t_cdf: df must be positive");
  if (std::isnan(x)) return std::numeric_limits<double>::quiet_NaN();
  if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
  double tail = reg_inc_beta(df / 2.0, 0.5, df / (df + x * x)) / 2.0;
  return x <= 0.0 ? tail : 1.0 - tail;
}

double t_ppf(double q, double df) {
  if (!(df > 0.0)) throw std::invalid_argument("t_ppf: df must be positive");
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("t_ppf: q must be in (0,1)");
  if (q == 0.5) return 0.0;
  if (q > 0.5) return -t_ppf(1.0 - q, df);

  double lo = -1.0;
  while (t_cdf(lo, df) > q) {
    lo *= 2.0;
    if (lo < -1e300) break;
  }
  double hi = 0.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (t_cdf(mid, df) < q) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double z_score(double eps, long long n, double s) {
  if (!(eps > 0.0)) throw std::invalid_argument("z_score: eps must be positive");
  if (n < 2) throw std::invalid_argument("z_score: need n >= 2");
  if (s < 0.0) throw std::invalid_argument("z_score: negative sample sd");
  if (s == 0.0) return 0.0;
  double t = -eps * std::sqrt(static_cast<double>(n)) / s;
  return 2.0 * t_cdf(t, static_cast<double>(n - 1));
}

double min_epsilon(long long n, double s, double delta) {
  if (n < 2) throw std::invalid_argument("min_epsilon: need n >= 2");
  if (s < 0.0) throw std::invalid_argument("min_epsilon: negative sample sd");
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("min_epsilon: delta must be in (0,1)");
  if (s == 0.0) return 0.0;
  double a = -t_ppf(delta / 2.0, static_cast<double>(n - 1));
  return a * s / std::sqrt(static_cast<double>(n));
}

long long required_records(double a0, double s0, double eps_b) {
  if (!(eps_b > 0.0)) throw std::invalid_argument("required_records: eps_b must be positive");
  double raw = a0 * s0 / eps_b;
  // Guard against 16.000000000000004-style float noise before the ceiling.
  auto needed = static_cast<long long>(std::ceil(raw * raw - 1e-9));
  return std::max<long long>(needed, 1);
}

UtilityEstimate make_estimate(std::size_t predicate, double u_hat, long long n,
                              double a0, double s0) {
  if (u_hat < 0.0 || u_hat > 1.0)
    throw std::invalid_argument("estimate: u_hat must be in [0,1]");
  UtilityEstimate e;
  e.predicate = predicate;
  e.u_hat = u_hat;
  e.n = n;
  e.s = std::sqrt(u_hat * (1.0 - u_hat));
  e.a0 = a0;
  e.s0 = s0;
  return e;
}

std::vector<long long> record_deficits(std::span<const UtilityEstimate> estimates,
                                       double eps_b) {
  std::vector<long long> out;
  out.reserve(estimates.size());
  for (const auto& e : estimates)
    out.push_back(std::max<long long>(0, required_records(e.a0, e.s0, eps_b) - e.n));
  return out;
}

long long delta_budget(std::span<const UtilityEstimate> estimates, double eps_b) {
  long long total = 0;
  for (long long d : record_deficits(estimates, eps_b)) total += d;
  return total;
}

EpsilonDecision optimize_epsilon(std::span<const UtilityEstimate> estimates,
                                 long long remaining_budget, double delta,
                                 int grid_size) {
  if (remaining_budget < 0) throw std::invalid_argument("optimize_epsilon: negative budget");
  if (grid_size < 1) throw std::invalid_argument("optimize_epsilon: grid_size must be >= 1");

  EpsilonDecision d;
  for (const auto& e : estimates)
    if (e.n >= 2) d.eps0 = std::max(d.eps0, min_epsilon(e.n, e.s, delta));
  d.eps_star = d.eps0;
  d.reward_now = static_cast<double>(remaining_budget) * (1.0 - d.eps0);
  d.reward_star = d.reward_now;
  if (d.eps0 <= 0.0 || remaining_budget <= 0) return d;

  bool found = false;
  double best_reward = -std::numeric_limits<double>::infinity();
  for (int i = 1; i <= grid_size; ++i) {
    double eps_b = d.eps0 * static_cast<double>(i) / static_cast<double>(grid_size + 1);
    long long db = delta_budget(estimates, eps_b);
    // Candidates must buy at least one record (db == 0 means the frozen
    // estimates already claim eps_b is attained) and must be affordable.
    if (db < 1 || db > remaining_budget) continue;
    double reward = static_cast<double>(remaining_budget - db) * (1.0 - eps_b);
    if (reward > best_reward) {
      best_reward = reward;
      d.eps_star = eps_b;
      d.delta_b = db;
      found = true;
    }
  }
  if (found) d.reward_star = best_reward;
  return d;
}

namespace {

void mean_var(std::span<const double> xs, double& mean, double& var) {
  mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= static_cast<double>(xs.size() - 1);
}

}  // namespace

double one_sided_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2)
    throw std::invalid_argument("one_sided_t_test: need at least 2 samples per side");
  double ma, va, mb, vb;
  mean_var(a, ma, va);
  mean_var(b, mb, vb);
  double na = static_cast<double>(a.size());
  double nb = static_cast<double>(b.size());
  double se2 = va / na + vb / nb;
  if (se2 == 0.0) {
    if (ma == mb) return 0.5;
    return ma > mb ? 0.0 : 1.0;
  }
  double t = (ma - mb) / std::sqrt(se2);
  double df = se2 * se2 / ((va / na) * (va / na) / (na - 1.0) +
                           (vb / nb) * (vb / nb) / (nb - 1.0));
  return t_cdf(-t, df);
}

}  // namespace dacq
