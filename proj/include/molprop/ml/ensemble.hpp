#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "molprop/ml/feature_matrix.hpp"
#include "molprop/ml/tree.hpp"
#include "molprop/rng.hpp"

namespace molprop::ml {

enum class EnsembleKind { gradient_boosting, random_forest };

struct TreeEnsemble {
  EnsembleKind kind = EnsembleKind::gradient_boosting;
  double base_prediction = 0.0;
  double learning_rate = 1.0;  // boosting only
  std::vector<RegressionTree> trees;
  std::vector<std::string> feature_names;
  // Random forest: per-tree in-bag row masks (for out-of-bag estimates).
  std::vector<std::vector<char>> in_bag;
};

struct GbmParams {
  int n_trees = 300;
  double learning_rate = 0.05;
  int max_depth = 3;
  int min_leaf = 5;
};

struct RfParams {
  int n_trees = 300;
  int max_features = 0;  // 0 = ceil(p / 3)
  int min_leaf = 2;
  int max_depth = 30;
  bool bootstrap = true;
  std::uint64_t seed = 42;
};

// Stagewise boosting: F_m = F_{m-1} + lr * h_m, each h_m a depth-limited
// regression tree fit to the current residuals. F_0 is the target mean; a
// constant target yields an ensemble with no trees.
inline TreeEnsemble fit_gradient_boosting(const FeatureMatrix& X, const std::vector<double>& y,
                                          const GbmParams& params = {}) {
  if (params.n_trees < 1) throw std::invalid_argument("fit_gradient_boosting: n_trees >= 1");
  if (params.learning_rate <= 0.0 || params.learning_rate > 1.0)
    throw std::invalid_argument("fit_gradient_boosting: learning rate in (0, 1]");
  if (X.rows() != y.size()) throw std::invalid_argument("fit_gradient_boosting: row count mismatch");
  X.validate_finite();

  TreeEnsemble ens;
  ens.kind = EnsembleKind::gradient_boosting;
  ens.learning_rate = params.learning_rate;
  ens.feature_names = X.names();

  const std::size_t n = X.rows();
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(n);
  ens.base_prediction = mean;

  bool constant = true;
  for (double v : y)
    if (v != y.front()) {
      constant = false;
      break;
    }
  if (constant) return ens;

  const auto binary = X.binary_columns();
  std::vector<int> all_rows(n);
  for (std::size_t i = 0; i < n; ++i) all_rows[i] = static_cast<int>(i);

  TreeParams tp;
  tp.max_depth = params.max_depth;
  tp.min_leaf = params.min_leaf;

  std::vector<double> residual(n);
  for (std::size_t i = 0; i < n; ++i) residual[i] = y[i] - mean;

  for (int m = 0; m < params.n_trees; ++m) {
    RegressionTree tree;
    tree.fit(X, residual, all_rows, tp, binary);
    for (std::size_t i = 0; i < n; ++i)
      residual[i] -= params.learning_rate * tree.predict_row(X.row(i));
    ens.trees.push_back(std::move(tree));
  }
  return ens;
}

// Breiman-style forest: bootstrap rows per tree, sample max_features split
// candidates per node, average tree predictions. Deterministic for a given
// seed; per-tree seeds are drawn up front from the master generator.
inline TreeEnsemble fit_random_forest(const FeatureMatrix& X, const std::vector<double>& y,
                                      const RfParams& params = {}) {
  if (params.n_trees < 1) throw std::invalid_argument("fit_random_forest: n_trees >= 1");
  if (X.rows() != y.size()) throw std::invalid_argument("fit_random_forest: row count mismatch");
  X.validate_finite();

  TreeEnsemble ens;
  ens.kind = EnsembleKind::random_forest;
  ens.feature_names = X.names();
  ens.learning_rate = 1.0;

  const std::size_t n = X.rows();
  const int p = static_cast<int>(X.cols());
  const int mf = params.max_features > 0 ? params.max_features : (p + 2) / 3;
  ens.base_prediction = 0.0;  // forest predictions are plain tree means

  const auto binary = X.binary_columns();
  TreeParams tp;
  tp.max_depth = params.max_depth;
  tp.min_leaf = params.min_leaf;
  tp.max_features = mf;

  rng::SplitMix64 master(params.seed);
  std::vector<std::uint64_t> tree_seeds(static_cast<std::size_t>(params.n_trees));
  for (auto& s : tree_seeds) s = master.next();

  for (int t = 0; t < params.n_trees; ++t) {
    rng::SplitMix64 gen(tree_seeds[static_cast<std::size_t>(t)]);
    std::vector<int> rows;
    std::vector<char> mask(n, 0);
    rows.reserve(n);
    if (params.bootstrap) {
      for (std::size_t i = 0; i < n; ++i) {
        const int r = static_cast<int>(gen.below(n));
        rows.push_back(r);
        mask[static_cast<std::size_t>(r)] = 1;
      }
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        rows.push_back(static_cast<int>(i));
        mask[i] = 1;
      }
    }
    RegressionTree tree;
    tree.fit(X, y, rows, tp, binary, &gen);
    ens.trees.push_back(std::move(tree));
    ens.in_bag.push_back(std::move(mask));
  }
  return ens;
}

inline std::vector<double> predict(const TreeEnsemble& ens, const FeatureMatrix& X) {
  detail::check_features(ens.feature_names, X.names());
  std::vector<double> out(X.rows(), 0.0);
  if (ens.kind == EnsembleKind::gradient_boosting) {
    for (std::size_t i = 0; i < X.rows(); ++i) {
      double v = ens.base_prediction;
      for (const auto& tree : ens.trees) v += ens.learning_rate * tree.predict_row(X.row(i));
      out[i] = v;
    }
  } else {
    if (ens.trees.empty()) return out;
    for (std::size_t i = 0; i < X.rows(); ++i) {
      double v = 0.0;
      for (const auto& tree : ens.trees) v += tree.predict_row(X.row(i));
      out[i] = v / static_cast<double>(ens.trees.size());
    }
  }
  return out;
}

// Mean prediction over trees whose bootstrap sample excluded each row.
// Rows that were in-bag for every tree get the in-bag mean instead.
inline std::vector<double> oob_predictions(const TreeEnsemble& ens, const FeatureMatrix& X) {
  if (ens.kind != EnsembleKind::random_forest || ens.in_bag.size() != ens.trees.size())
    throw std::invalid_argument("oob_predictions: random forest with in-bag masks required");
  std::vector<double> out(X.rows(), 0.0);
  for (std::size_t i = 0; i < X.rows(); ++i) {
    double sum = 0.0;
    int cnt = 0;
    for (std::size_t t = 0; t < ens.trees.size(); ++t) {
      if (ens.in_bag[t][i]) continue;
      sum += ens.trees[t].predict_row(X.row(i));
      ++cnt;
    }
    if (cnt == 0) {
      for (const auto& tree : ens.trees) sum += tree.predict_row(X.row(i));
      cnt = static_cast<int>(ens.trees.size());
    }
    out[i] = sum / cnt;
  }
  return out;
}

// Impurity-reduction importances, normalized to sum to one. An ensemble with
// no splits reports a uniform distribution.
inline std::vector<double> feature_importances(const TreeEnsemble& ens) {
  if (ens.feature_names.empty()) throw std::invalid_argument("feature_importances: unfitted ensemble");
  std::vector<double> total(ens.feature_names.size(), 0.0);
  for (const auto& tree : ens.trees)
    for (std::size_t j = 0; j < total.size(); ++j) total[j] += tree.importance.empty() ? 0.0 : tree.importance[j];
  double sum = 0.0;
  for (double v : total) sum += v;
  if (sum <= 0.0) {
    std::fill(total.begin(), total.end(), 1.0 / static_cast<double>(total.size()));
    return total;
  }
  for (double& v : total) v /= sum;
  return total;
}

}  // namespace molprop::ml
