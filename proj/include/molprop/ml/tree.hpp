#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "molprop/ml/feature_matrix.hpp"
#include "molprop/rng.hpp"

namespace molprop::ml {

struct TreeParams {
  int max_depth = 3;
  int min_leaf = 5;
  int max_features = 0;  // 0 = use all features
};

// Regression tree with exhaustive variance-reduction split search. Ties are
// broken toward the lowest feature index, then the lowest threshold.
class RegressionTree {
 public:
  struct Node {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;
  };

  std::vector<Node> nodes;

  bool empty() const { return nodes.empty(); }

  double predict_row(const double* row) const {
    int cur = 0;
    while (nodes[static_cast<std::size_t>(cur)].feature >= 0) {
      const Node& nd = nodes[static_cast<std::size_t>(cur)];
      cur = (row[nd.feature] <= nd.threshold) ? nd.left : nd.right;
    }
    return nodes[static_cast<std::size_t>(cur)].value;
  }

  // Per-feature total impurity reduction accumulated during fitting.
  std::vector<double> importance;

  void fit(const FeatureMatrix& X, const std::vector<double>& y, const std::vector<int>& rows,
           const TreeParams& params, const std::vector<char>& binary_cols,
           rng::SplitMix64* feature_rng = nullptr) {
    nodes.clear();
    importance.assign(X.cols(), 0.0);
    std::vector<int> work = rows;
    build(X, y, work, 0, static_cast<int>(work.size()), 0, params, binary_cols, feature_rng);
  }

 private:
  struct Split {
    bool found = false;
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;
    double left_sum = 0.0;
    int left_count = 0;
  };

  int build(const FeatureMatrix& X, const std::vector<double>& y, std::vector<int>& rows, int begin,
            int end, int depth, const TreeParams& params, const std::vector<char>& binary_cols,
            rng::SplitMix64* feature_rng) {
    const int count = end - begin;
    double sum = 0.0;
    for (int i = begin; i < end; ++i) sum += y[static_cast<std::size_t>(rows[static_cast<std::size_t>(i)])];
    const double mean = sum / count;

    const int node_index = static_cast<int>(nodes.size());
    nodes.push_back(Node{});
    nodes[static_cast<std::size_t>(node_index)].value = mean;

    if (depth >= params.max_depth || count < 2 * params.min_leaf) return node_index;

    const Split split = find_split(X, y, rows, begin, end, sum, params, binary_cols, feature_rng);
    if (!split.found) return node_index;

    importance[static_cast<std::size_t>(split.feature)] += split.gain;

    // Partition rows in place: left side <= threshold.
    int mid = begin;
    for (int i = begin; i < end; ++i) {
      const int r = rows[static_cast<std::size_t>(i)];
      if (X.at(static_cast<std::size_t>(r), static_cast<std::size_t>(split.feature)) <= split.threshold) {
        std::swap(rows[static_cast<std::size_t>(i)], rows[static_cast<std::size_t>(mid)]);
        ++mid;
      }
    }

    const int left = build(X, y, rows, begin, mid, depth + 1, params, binary_cols, feature_rng);
    const int right = build(X, y, rows, mid, end, depth + 1, params, binary_cols, feature_rng);
    Node& nd = nodes[static_cast<std::size_t>(node_index)];
    nd.feature = split.feature;
    nd.threshold = split.threshold;
    nd.left = left;
    nd.right = right;
    return node_index;
  }

  Split find_split(const FeatureMatrix& X, const std::vector<double>& y, const std::vector<int>& rows,
                   int begin, int end, double total_sum, const TreeParams& params,
                   const std::vector<char>& binary_cols, rng::SplitMix64* feature_rng) {
    const int count = end - begin;
    const int p = static_cast<int>(X.cols());

    // Candidate features, always scanned in ascending index order so that
    // equal gains resolve deterministically.
    candidate_features_.clear();
    if (params.max_features > 0 && params.max_features < p && feature_rng) {
      sample_pool_.resize(static_cast<std::size_t>(p));
      for (int j = 0; j < p; ++j) sample_pool_[static_cast<std::size_t>(j)] = j;
      for (int j = 0; j < params.max_features; ++j) {
        const int pick = j + static_cast<int>(feature_rng->below(static_cast<std::uint64_t>(p - j)));
        std::swap(sample_pool_[static_cast<std::size_t>(j)], sample_pool_[static_cast<std::size_t>(pick)]);
      }
      candidate_features_.assign(sample_pool_.begin(), sample_pool_.begin() + params.max_features);
      std::sort(candidate_features_.begin(), candidate_features_.end());
    } else {
      for (int j = 0; j < p; ++j) candidate_features_.push_back(j);
    }

    Split best;
    const double parent_score = total_sum * total_sum / count;

    for (int feature : candidate_features_) {
      if (binary_cols[static_cast<std::size_t>(feature)]) {
        // Counting pass: only split point is 0|1.
        double sum0 = 0.0;
        int n0 = 0;
        for (int i = begin; i < end; ++i) {
          const int r = rows[static_cast<std::size_t>(i)];
          if (X.at(static_cast<std::size_t>(r), static_cast<std::size_t>(feature)) == 0.0) {
            sum0 += y[static_cast<std::size_t>(r)];
            ++n0;
          }
        }
        const int n1 = count - n0;
        if (n0 < params.min_leaf || n1 < params.min_leaf) continue;
        const double sum1 = total_sum - sum0;
        const double gain = sum0 * sum0 / n0 + sum1 * sum1 / n1 - parent_score;
        if (gain > best.gain) {
          best = Split{true, feature, 0.5, gain, sum0, n0};
        }
        continue;
      }

      sorted_.clear();
      for (int i = begin; i < end; ++i) {
        const int r = rows[static_cast<std::size_t>(i)];
        sorted_.emplace_back(X.at(static_cast<std::size_t>(r), static_cast<std::size_t>(feature)),
                             y[static_cast<std::size_t>(r)]);
      }
      std::sort(sorted_.begin(), sorted_.end());

      double left_sum = 0.0;
      for (int i = 0; i + 1 < count; ++i) {
        left_sum += sorted_[static_cast<std::size_t>(i)].second;
        const int nl = i + 1;
        const int nr = count - nl;
        if (nl < params.min_leaf) continue;
        if (nr < params.min_leaf) break;
        if (sorted_[static_cast<std::size_t>(i)].first == sorted_[static_cast<std::size_t>(i + 1)].first)
          continue;
        const double right_sum = total_sum - left_sum;
        const double gain = left_sum * left_sum / nl + right_sum * right_sum / nr - parent_score;
        if (gain > best.gain) {
          const double threshold = 0.5 * (sorted_[static_cast<std::size_t>(i)].first +
                                          sorted_[static_cast<std::size_t>(i + 1)].first);
          best = Split{true, feature, threshold, gain, left_sum, nl};
        }
      }
    }
    return best;
  }

  // scratch buffers reused across nodes
  std::vector<std::pair<double, double>> sorted_;
  std::vector<int> candidate_features_;
  std::vector<int> sample_pool_;
};

}  // namespace molprop::ml
