#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "molprop/eval.hpp"
#include "molprop/log.hpp"
#include "molprop/ml/linear.hpp"

namespace molprop::ml {

// Lasso objective: (1/2n) ||y - Xb||^2 + lambda * ||b||_1 on standardized
// features (population scaling, so each column has sum of squares = n).
// With this normalization the kill condition is lambda >= max|X^T y| / n and
// the single-feature solution is the soft threshold sign(rho)*max(|rho|-lambda, 0)
// with rho = X^T y / n.

namespace lasso_detail {

inline double soft_threshold(double x, double t) {
  if (x > t) return x - t;
  if (x < -t) return x + t;
  return 0.0;
}

struct PathFit {
  std::vector<std::vector<double>> beta_per_lambda;  // standardized space
  bool converged = true;
};

// Coordinate descent with warm starts along a descending lambda path.
// Z must be standardized column-major, yc centered.
inline PathFit coordinate_descent_path(const std::vector<std::vector<double>>& z,
                                       const std::vector<double>& yc,
                                       const std::vector<double>& lambdas, int max_sweeps,
                                       double tol) {
  const std::size_t p = z.size();
  const std::size_t n = yc.size();
  PathFit out;
  out.beta_per_lambda.reserve(lambdas.size());

  std::vector<double> beta(p, 0.0);
  std::vector<double> residual = yc;
  for (double lambda : lambdas) {
    bool ok = false;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
      double max_delta = 0.0;
      for (std::size_t j = 0; j < p; ++j) {
        const auto& zj = z[j];
        double rho = 0.0;
        for (std::size_t i = 0; i < n; ++i) rho += zj[i] * residual[i];
        rho = rho / static_cast<double>(n) + beta[j];  // columns have ||z_j||^2 = n
        const double updated = soft_threshold(rho, lambda);
        const double delta = updated - beta[j];
        if (delta != 0.0) {
          beta[j] = updated;
          for (std::size_t i = 0; i < n; ++i) residual[i] -= delta * zj[i];
          max_delta = std::max(max_delta, std::fabs(delta));
        }
      }
      if (max_delta < tol) {
        ok = true;
        break;
      }
    }
    if (!ok) out.converged = false;
    out.beta_per_lambda.push_back(beta);
  }
  return out;
}

struct StandardizedView {
  std::vector<std::vector<double>> z;  // column-major, constant columns zeroed
  Standardization stats;
  double y_mean = 0.0;
  std::vector<double> yc;
};

inline StandardizedView standardize(const FeatureMatrix& X, const std::vector<double>& y) {
  StandardizedView v;
  v.stats = X.fit_standardization();
  v.y_mean = stats::mean(y);
  const std::size_t n = X.rows();
  const std::size_t p = X.cols();
  v.z.assign(p, std::vector<double>(n, 0.0));
  for (std::size_t j = 0; j < p; ++j) {
    const double sd = v.stats.stddev[j];
    if (sd <= 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) v.z[j][i] = (X.at(i, j) - v.stats.mean[j]) / sd;
  }
  v.yc.resize(n);
  for (std::size_t i = 0; i < n; ++i) v.yc[i] = y[i] - v.y_mean;
  return v;
}

inline double lambda_max(const StandardizedView& v) {
  double m = 0.0;
  for (const auto& zj : v.z) {
    double dot = 0.0;
    for (std::size_t i = 0; i < v.yc.size(); ++i) dot += zj[i] * v.yc[i];
    m = std::max(m, std::fabs(dot) / static_cast<double>(v.yc.size()));
  }
  return m;
}

inline LinearModel to_model(const std::vector<double>& beta_std, const StandardizedView& v,
                            const std::vector<std::string>& names, double lambda, bool converged) {
  LinearModel m;
  m.feature_names = names;
  m.regularization = Regularization::lasso;
  m.lambda = lambda;
  m.converged = converged;
  m.coefficients.resize(beta_std.size(), 0.0);
  double shift = 0.0;
  for (std::size_t j = 0; j < beta_std.size(); ++j) {
    const double sd = v.stats.stddev[j];
    const double raw = sd > 0.0 ? beta_std[j] / sd : 0.0;
    m.coefficients[j] = raw;
    shift += raw * v.stats.mean[j];
  }
  m.intercept = v.y_mean - shift;
  return m;
}

}  // namespace lasso_detail

inline constexpr int kLassoMaxSweeps = 10000;
inline constexpr double kLassoTol = 1e-6;

// 100 log-spaced penalties from lambda_max down to 1e-4 * lambda_max.
inline std::vector<double> lasso_lambda_grid(double lambda_max, int count = 100,
                                             double ratio = 1e-4) {
  std::vector<double> grid;
  if (lambda_max <= 0.0) return {0.0};
  grid.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(count - 1);
    grid.push_back(lambda_max * std::pow(ratio, f));
  }
  return grid;
}

// Single lasso fit at a fixed penalty.
inline LinearModel fit_lasso(const FeatureMatrix& X, const std::vector<double>& y, double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("fit_lasso: lambda must be >= 0");
  if (X.rows() != y.size()) throw std::invalid_argument("fit_lasso: row count mismatch");
  X.validate_finite();
  auto v = lasso_detail::standardize(X, y);
  auto path = lasso_detail::coordinate_descent_path(v.z, v.yc, {lambda}, kLassoMaxSweeps, kLassoTol);
  if (!path.converged) log::warn("fit_lasso: coordinate descent did not fully converge");
  return lasso_detail::to_model(path.beta_per_lambda.back(), v, X.names(), lambda, path.converged);
}

// Pathwise lasso with the penalty picked by k-fold cross-validation
// (minimum mean validation MSE), then refit on the full data. An empty grid
// selects the default 100-point path from the data's lambda_max.
inline LinearModel fit_lasso_cv(const FeatureMatrix& X, const std::vector<double>& y,
                                std::vector<double> lambda_grid = {}, int folds = 5,
                                std::uint64_t seed = 42) {
  if (X.rows() != y.size()) throw std::invalid_argument("fit_lasso_cv: row count mismatch");
  X.validate_finite();
  const int n = static_cast<int>(X.rows());

  if (lambda_grid.empty()) {
    auto full = lasso_detail::standardize(X, y);
    lambda_grid = lasso_lambda_grid(lasso_detail::lambda_max(full));
  }
  std::sort(lambda_grid.begin(), lambda_grid.end(), std::greater<double>());

  const int k = std::min(folds, n);
  if (k < 2) return fit_lasso(X, y, lambda_grid.back());

  const auto fa = eval::kfold_split(n, k, seed);
  std::vector<double> cv_mse(lambda_grid.size(), 0.0);
  for (int fold = 0; fold < k; ++fold) {
    const auto train = fa.train_indices(fold);
    const auto test = fa.test_indices(fold);
    FeatureMatrix Xtr = X.subset_rows(train);
    std::vector<double> ytr;
    for (int i : train) ytr.push_back(y[static_cast<std::size_t>(i)]);

    auto v = lasso_detail::standardize(Xtr, ytr);
    auto path = lasso_detail::coordinate_descent_path(v.z, v.yc, lambda_grid, kLassoMaxSweeps,
                                                      kLassoTol);
    for (std::size_t g = 0; g < lambda_grid.size(); ++g) {
      const LinearModel m =
          lasso_detail::to_model(path.beta_per_lambda[g], v, X.names(), lambda_grid[g], true);
      double ss = 0.0;
      for (int i : test) {
        double pred = m.intercept;
        const double* row = X.row(static_cast<std::size_t>(i));
        for (std::size_t j = 0; j < X.cols(); ++j) pred += m.coefficients[j] * row[j];
        const double r = y[static_cast<std::size_t>(i)] - pred;
        ss += r * r;
      }
      cv_mse[g] += ss / static_cast<double>(test.size());
    }
  }
  std::size_t best = 0;
  for (std::size_t g = 1; g < cv_mse.size(); ++g)
    if (cv_mse[g] < cv_mse[best]) best = g;

  auto v = lasso_detail::standardize(X, y);
  auto path = lasso_detail::coordinate_descent_path(v.z, v.yc, lambda_grid, kLassoMaxSweeps,
                                                    kLassoTol);
  if (!path.converged) log::warn("fit_lasso_cv: coordinate descent did not fully converge");
  return lasso_detail::to_model(path.beta_per_lambda[best], v, X.names(), lambda_grid[best],
                                path.converged);
}

}  // namespace molprop::ml
