#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

namespace molprop::ml {

// Per-feature statistics recorded when a matrix has been standardized.
struct Standardization {
  std::vector<double> mean;
  std::vector<double> stddev;  // population stddev; 0 marks a constant column
};

// Row-major numeric feature matrix with named, unique columns. All entries
// must be finite; non-finite rows are the caller's problem to drop.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::vector<std::string> names, std::size_t rows)
      : names_(std::move(names)), rows_(rows), data_(rows * names_.size(), 0.0) {
    check_unique_names();
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }

  double at(std::size_t i, std::size_t j) const { return data_[i * cols() + j]; }
  double& at(std::size_t i, std::size_t j) { return data_[i * cols() + j]; }
  const double* row(std::size_t i) const { return data_.data() + i * cols(); }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  const std::optional<Standardization>& standardization() const { return standardization_; }

  void validate_finite() const {
    for (double v : data_)
      if (!std::isfinite(v)) throw std::invalid_argument("feature matrix contains non-finite value");
  }

  int column_index(const std::string& name) const {
    for (std::size_t j = 0; j < names_.size(); ++j)
      if (names_[j] == name) return static_cast<int>(j);
    return -1;
  }

  FeatureMatrix subset_rows(const std::vector<int>& rows) const {
    FeatureMatrix out(names_, rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (std::size_t j = 0; j < cols(); ++j)
        out.at(r, j) = at(static_cast<std::size_t>(rows[r]), j);
    out.standardization_ = standardization_;
    return out;
  }

  // Fit standardization on this matrix and return the transformed copy with
  // metadata attached. Constant columns map to zero.
  FeatureMatrix standardized() const {
    Standardization s = fit_standardization();
    FeatureMatrix out = *this;
    out.apply(s);
    return out;
  }

  Standardization fit_standardization() const {
    Standardization s;
    s.mean.resize(cols(), 0.0);
    s.stddev.resize(cols(), 0.0);
    if (rows_ == 0) return s;
    for (std::size_t j = 0; j < cols(); ++j) {
      double m = 0.0;
      for (std::size_t i = 0; i < rows_; ++i) m += at(i, j);
      m /= static_cast<double>(rows_);
      double ss = 0.0;
      for (std::size_t i = 0; i < rows_; ++i) {
        const double d = at(i, j) - m;
        ss += d * d;
      }
      s.mean[j] = m;
      s.stddev[j] = std::sqrt(ss / static_cast<double>(rows_));
    }
    return s;
  }

  void apply(const Standardization& s) {
    if (s.mean.size() != cols()) throw std::invalid_argument("standardization size mismatch");
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols(); ++j) {
        const double sd = s.stddev[j];
        at(i, j) = (sd > 0.0) ? (at(i, j) - s.mean[j]) / sd : 0.0;
      }
    standardization_ = s;
  }

  void append_column(const std::string& name, const std::vector<double>& values) {
    if (values.size() != rows_ && !(rows_ == 0 && cols() == 0))
      throw std::invalid_argument("append_column: row count mismatch");
    if (cols() == 0 && rows_ == 0) rows_ = values.size();
    std::vector<double> next(rows_ * (cols() + 1));
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols(); ++j) next[i * (cols() + 1) + j] = at(i, j);
      next[i * (cols() + 1) + cols()] = values[i];
    }
    names_.push_back(name);
    data_ = std::move(next);
    check_unique_names();
  }

  // True when the column takes only values 0 and 1 (fingerprint bits); the
  // tree split finder uses a counting fast path for these.
  std::vector<char> binary_columns() const {
    std::vector<char> binary(cols(), 1);
    for (std::size_t j = 0; j < cols(); ++j) {
      for (std::size_t i = 0; i < rows_; ++i) {
        const double v = at(i, j);
        if (v != 0.0 && v != 1.0) {
          binary[j] = 0;
          break;
        }
      }
    }
    return binary;
  }

 private:
  std::vector<std::string> names_;
  std::size_t rows_ = 0;
  std::vector<double> data_;
  std::optional<Standardization> standardization_;

  void check_unique_names() const {
    std::unordered_set<std::string> seen;
    for (const auto& n : names_)
      if (!seen.insert(n).second)
        throw std::invalid_argument("duplicate feature name: " + n);
  }
};

}  // namespace molprop::ml
