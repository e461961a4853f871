#pragma once

#include <array>
#include <string>
#include <vector>

#include "molprop/ml/feature_matrix.hpp"

namespace molprop::ml {

// Degree-3 basis in (D, zeta) used by the baseline polynomial model:
// [D, z, D^2, D*z, z^2, D^2*z, D*z^2, z^3]. The intercept is the model's job.
inline std::array<double, 8> polynomial_basis(double D, double zeta) {
  return {D,        zeta,        D * D,        D * zeta,
          zeta * zeta, D * D * zeta, D * zeta * zeta, zeta * zeta * zeta};
}

inline const std::array<const char*, 8>& polynomial_basis_names() {
  static const std::array<const char*, 8> names = {"D",      "zeta",    "D^2",    "D*zeta",
                                                   "zeta^2", "D^2*zeta", "D*zeta^2", "zeta^3"};
  return names;
}

// Expand a two-column (D, zeta) matrix into the 8-term polynomial basis.
inline FeatureMatrix expand_polynomial(const FeatureMatrix& activity) {
  const int d_col = activity.column_index("D");
  const int z_col = activity.column_index("zeta");
  if (d_col < 0 || z_col < 0)
    throw std::invalid_argument("expand_polynomial: needs 'D' and 'zeta' columns");
  std::vector<std::string> names(polynomial_basis_names().begin(), polynomial_basis_names().end());
  FeatureMatrix out(names, activity.rows());
  for (std::size_t i = 0; i < activity.rows(); ++i) {
    const auto basis = polynomial_basis(activity.at(i, static_cast<std::size_t>(d_col)),
                                        activity.at(i, static_cast<std::size_t>(z_col)));
    for (std::size_t j = 0; j < basis.size(); ++j) out.at(i, j) = basis[j];
  }
  return out;
}

}  // namespace molprop::ml
