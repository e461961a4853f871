#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "molprop/rng.hpp"
#include "molprop/stats.hpp"

namespace molprop::eval {

// Deterministic k-fold assignment: a seeded permutation chopped into k
// near-equal folds (sizes differ by at most one).
struct FoldAssignment {
  int n = 0;
  int k = 0;
  std::uint64_t seed = 0;
  std::vector<int> assignment;  // per-sample fold index

  std::vector<int> train_indices(int fold) const {
    std::vector<int> idx;
    for (int i = 0; i < n; ++i)
      if (assignment[static_cast<std::size_t>(i)] != fold) idx.push_back(i);
    return idx;
  }
  std::vector<int> test_indices(int fold) const {
    std::vector<int> idx;
    for (int i = 0; i < n; ++i)
      if (assignment[static_cast<std::size_t>(i)] == fold) idx.push_back(i);
    return idx;
  }
};

inline FoldAssignment kfold_split(int n, int k, std::uint64_t seed) {
  if (k < 2 || k > n) throw std::invalid_argument("kfold_split: need 2 <= k <= n");
  FoldAssignment fa;
  fa.n = n;
  fa.k = k;
  fa.seed = seed;
  fa.assignment.resize(static_cast<std::size_t>(n));
  rng::SplitMix64 gen(seed);
  const auto perm = rng::permutation(n, gen);
  // First (n mod k) folds get the extra sample.
  const int base = n / k;
  const int extra = n % k;
  int pos = 0;
  for (int fold = 0; fold < k; ++fold) {
    const int size = base + (fold < extra ? 1 : 0);
    for (int j = 0; j < size; ++j)
      fa.assignment[static_cast<std::size_t>(perm[static_cast<std::size_t>(pos++)])] = fold;
  }
  return fa;
}

struct MetricSet {
  double r2 = 0.0;
  double rmse = 0.0;
  double mae = 0.0;
  double mse = 0.0;
};

inline MetricSet compute_metrics(const std::vector<double>& y_true,
                                 const std::vector<double>& y_pred) {
  if (y_true.size() != y_pred.size() || y_true.size() < 2)
    throw std::invalid_argument("compute_metrics: need equal lengths >= 2");
  const auto n = static_cast<double>(y_true.size());
  const double mean_y = stats::mean(y_true);
  double ss_res = 0.0, ss_tot = 0.0, abs_sum = 0.0;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const double r = y_true[i] - y_pred[i];
    ss_res += r * r;
    abs_sum += std::fabs(r);
    ss_tot += (y_true[i] - mean_y) * (y_true[i] - mean_y);
  }
  if (ss_tot == 0.0)
    throw std::invalid_argument("compute_metrics: R^2 undefined for constant y_true");
  MetricSet m;
  m.mse = ss_res / n;
  m.rmse = std::sqrt(m.mse);
  m.mae = abs_sum / n;
  m.r2 = 1.0 - ss_res / ss_tot;
  return m;
}

// Two-sided paired t-test on per-fold scores; differences are b - a.
struct SignificanceResult {
  double t_stat = 0.0;
  double p_value = 1.0;
  double mean_diff = 0.0;
  double ci95_low = 0.0;
  double ci95_high = 0.0;
  bool degenerate_variance = false;
};

inline SignificanceResult paired_t_test(const std::vector<double>& a,
                                        const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2)
    throw std::invalid_argument("paired_t_test: need equal lengths >= 2");
  const int k = static_cast<int>(a.size());
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = b[i] - a[i];

  SignificanceResult r;
  r.mean_diff = stats::mean(d);
  const double sd = stats::sample_stddev(d);
  if (sd == 0.0) {
    r.degenerate_variance = true;
    if (r.mean_diff == 0.0) {
      r.t_stat = 0.0;
      r.p_value = 1.0;
    } else {
      r.t_stat = r.mean_diff > 0 ? std::numeric_limits<double>::infinity()
                                 : -std::numeric_limits<double>::infinity();
      r.p_value = 0.0;
    }
    r.ci95_low = r.ci95_high = r.mean_diff;
    return r;
  }
  const double se = sd / std::sqrt(static_cast<double>(k));
  r.t_stat = r.mean_diff / se;
  const double dof = static_cast<double>(k - 1);
  r.p_value = stats::student_t_two_sided_p(r.t_stat, dof);
  const double tcrit = stats::student_t_quantile(0.975, dof);
  r.ci95_low = r.mean_diff - tcrit * se;
  r.ci95_high = r.mean_diff + tcrit * se;
  return r;
}

// Y-randomization: permute the targets with a seeded generator, rerun the
// full CV pipeline, and collect the aggregated metrics per shuffle. The
// pipeline callback receives the shuffled targets and must return the mean
// cross-validated metrics.
inline std::vector<MetricSet> y_randomization(
    const std::function<MetricSet(const std::vector<double>&)>& pipeline,
    const std::vector<double>& targets, int n_shuffles, std::uint64_t seed) {
  if (n_shuffles < 1) throw std::invalid_argument("y_randomization: n_shuffles >= 1");
  rng::SplitMix64 gen(seed);
  std::vector<MetricSet> out;
  out.reserve(static_cast<std::size_t>(n_shuffles));
  for (int s = 0; s < n_shuffles; ++s) {
    std::vector<double> shuffled = targets;
    rng::shuffle(shuffled, gen);
    out.push_back(pipeline(shuffled));
  }
  return out;
}

}  // namespace molprop::eval
