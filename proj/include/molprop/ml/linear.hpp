#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "molprop/eval.hpp"
#include "molprop/ml/feature_matrix.hpp"

namespace molprop::ml {

enum class Regularization { none, ridge, lasso };

// Linear model in raw feature space: prediction = intercept + x . coefficients.
// Regularized fits standardize internally and fold the scaling back into the
// stored coefficients, so prediction never needs the training statistics.
struct LinearModel {
  double intercept = 0.0;
  std::vector<double> coefficients;
  std::vector<std::string> feature_names;
  Regularization regularization = Regularization::none;
  double lambda = 0.0;
  bool converged = true;
};

namespace detail {

inline void check_features(const std::vector<std::string>& model_names,
                           const std::vector<std::string>& data_names) {
  if (model_names == data_names) return;
  std::string missing, extra;
  for (const auto& n : model_names)
    if (std::find(data_names.begin(), data_names.end(), n) == data_names.end())
      missing += (missing.empty() ? "" : ", ") + n;
  for (const auto& n : data_names)
    if (std::find(model_names.begin(), model_names.end(), n) == model_names.end())
      extra += (extra.empty() ? "" : ", ") + n;
  throw std::invalid_argument("feature mismatch; missing: [" + missing + "] extra: [" + extra +
                              "] (order must match training)");
}

inline Eigen::MatrixXd to_eigen(const FeatureMatrix& X) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(X.rows()), static_cast<Eigen::Index>(X.cols()));
  for (std::size_t i = 0; i < X.rows(); ++i)
    for (std::size_t j = 0; j < X.cols(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = X.at(i, j);
  return m;
}

}  // namespace detail

// Ordinary least squares with intercept, solved by a rank-revealing complete
// orthogonal decomposition (minimum-norm solution under rank deficiency).
inline LinearModel fit_ols(const FeatureMatrix& X, const std::vector<double>& y) {
  if (X.rows() != y.size()) throw std::invalid_argument("fit_ols: row count mismatch");
  if (X.rows() <= X.cols())
    throw std::invalid_argument(
        "fit_ols: more columns than rows; use fit_ridge for p >= n problems");
  X.validate_finite();

  const auto n = static_cast<Eigen::Index>(X.rows());
  const auto p = static_cast<Eigen::Index>(X.cols());
  Eigen::MatrixXd A(n, p + 1);
  A.col(0).setOnes();
  A.rightCols(p) = detail::to_eigen(X);
  Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(y.data(), n);

  Eigen::VectorXd beta = A.completeOrthogonalDecomposition().solve(b);

  LinearModel m;
  m.intercept = beta(0);
  m.coefficients.assign(beta.data() + 1, beta.data() + 1 + p);
  m.feature_names = X.names();
  m.regularization = Regularization::none;
  return m;
}

// Ridge regression: minimizes ||y - Xb||^2 + lambda * ||b||^2 on standardized
// features with an unpenalized intercept.
inline LinearModel fit_ridge(const FeatureMatrix& X, const std::vector<double>& y, double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("fit_ridge: lambda must be >= 0");
  if (X.rows() != y.size()) throw std::invalid_argument("fit_ridge: row count mismatch");
  if (X.rows() < 2) throw std::invalid_argument("fit_ridge: need at least 2 rows");
  X.validate_finite();

  const auto n = static_cast<Eigen::Index>(X.rows());
  const auto p = static_cast<Eigen::Index>(X.cols());
  const Standardization s = X.fit_standardization();
  const double y_mean = stats::mean(y);

  Eigen::MatrixXd Z(n, p);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < p; ++j) {
      const double sd = s.stddev[static_cast<std::size_t>(j)];
      Z(i, j) = sd > 0.0
                    ? (X.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) -
                       s.mean[static_cast<std::size_t>(j)]) / sd
                    : 0.0;
    }
  Eigen::VectorXd yc(n);
  for (Eigen::Index i = 0; i < n; ++i) yc(i) = y[static_cast<std::size_t>(i)] - y_mean;

  Eigen::VectorXd beta_std;
  if (lambda == 0.0) {
    beta_std = Z.completeOrthogonalDecomposition().solve(yc);
  } else {
    Eigen::MatrixXd gram = Z.transpose() * Z;
    gram.diagonal().array() += lambda;
    beta_std = gram.ldlt().solve(Z.transpose() * yc);
  }

  LinearModel m;
  m.feature_names = X.names();
  m.regularization = Regularization::ridge;
  m.lambda = lambda;
  m.coefficients.resize(static_cast<std::size_t>(p), 0.0);
  double shift = 0.0;
  for (Eigen::Index j = 0; j < p; ++j) {
    const double sd = s.stddev[static_cast<std::size_t>(j)];
    const double raw = sd > 0.0 ? beta_std(j) / sd : 0.0;
    m.coefficients[static_cast<std::size_t>(j)] = raw;
    shift += raw * s.mean[static_cast<std::size_t>(j)];
  }
  m.intercept = y_mean - shift;
  return m;
}

inline std::vector<double> predict(const LinearModel& m, const FeatureMatrix& X) {
  detail::check_features(m.feature_names, X.names());
  std::vector<double> out(X.rows());
  for (std::size_t i = 0; i < X.rows(); ++i) {
    double v = m.intercept;
    const double* row = X.row(i);
    for (std::size_t j = 0; j < X.cols(); ++j) v += m.coefficients[j] * row[j];
    out[i] = v;
  }
  return out;
}

// Ridge with the penalty chosen from a grid by inner k-fold cross-validation
// (minimum mean validation MSE; ties keep the earliest grid entry).
inline LinearModel fit_ridge_cv(const FeatureMatrix& X, const std::vector<double>& y,
                                const std::vector<double>& lambda_grid, int folds,
                                std::uint64_t seed) {
  if (lambda_grid.empty()) throw std::invalid_argument("fit_ridge_cv: empty grid");
  const int n = static_cast<int>(X.rows());
  const int k = std::min(folds, n);
  if (k < 2) return fit_ridge(X, y, lambda_grid.front());

  const auto fa = eval::kfold_split(n, k, seed);
  std::vector<double> mse(lambda_grid.size(), 0.0);
  for (int fold = 0; fold < k; ++fold) {
    const auto train = fa.train_indices(fold);
    const auto test = fa.test_indices(fold);
    FeatureMatrix Xtr = X.subset_rows(train);
    FeatureMatrix Xte = X.subset_rows(test);
    std::vector<double> ytr, yte;
    for (int i : train) ytr.push_back(y[static_cast<std::size_t>(i)]);
    for (int i : test) yte.push_back(y[static_cast<std::size_t>(i)]);
    for (std::size_t g = 0; g < lambda_grid.size(); ++g) {
      const LinearModel m = fit_ridge(Xtr, ytr, lambda_grid[g]);
      const auto pred = predict(m, Xte);
      double ss = 0.0;
      for (std::size_t i = 0; i < yte.size(); ++i) ss += (yte[i] - pred[i]) * (yte[i] - pred[i]);
      mse[g] += ss / static_cast<double>(yte.size());
    }
  }
  std::size_t best = 0;
  for (std::size_t g = 1; g < mse.size(); ++g)
    if (mse[g] < mse[best]) best = g;
  return fit_ridge(X, y, lambda_grid[best]);
}

inline std::vector<double> default_ridge_grid() {
  return {1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3};
}

}  // namespace molprop::ml
