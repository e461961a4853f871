#pragma once

#include <algorithm>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "molprop/molecule.hpp"

namespace molprop::graph {

// Unweighted hop distances on the heavy-atom graph.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(int n) : n_(n), d_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0) {}

  int size() const { return n_; }
  int at(int i, int j) const { return d_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j)]; }
  int& at(int i, int j) { return d_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j)]; }

  // Distance row sum S_v, used by the Balaban index.
  long long row_sum(int i) const {
    long long s = 0;
    for (int j = 0; j < n_; ++j) s += at(i, j);
    return s;
  }

 private:
  int n_ = 0;
  std::vector<int> d_;
};

// BFS from every vertex. The molecule must be a single component; callers
// reduce multi-component molecules to the largest one first.
inline DistanceMatrix all_pairs_shortest_paths(const Molecule& mol) {
  if (!mol.connected()) {
    auto sizes = mol.component_sizes();
    std::string msg = "disconnected molecule; component sizes:";
    for (int s : sizes) msg += " " + std::to_string(s);
    throw std::invalid_argument(msg);
  }
  const int n = mol.atom_count();
  DistanceMatrix dm(n);
  std::vector<int> dist(static_cast<std::size_t>(n));
  for (int src = 0; src < n; ++src) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[static_cast<std::size_t>(src)] = 0;
    std::queue<int> q;
    q.push(src);
    while (!q.empty()) {
      int a = q.front();
      q.pop();
      for (const auto& e : mol.neighbors(a)) {
        if (dist[static_cast<std::size_t>(e.neighbor)] < 0) {
          dist[static_cast<std::size_t>(e.neighbor)] = dist[static_cast<std::size_t>(a)] + 1;
          q.push(e.neighbor);
        }
      }
    }
    for (int j = 0; j < n; ++j) dm.at(src, j) = dist[static_cast<std::size_t>(j)];
  }
  return dm;
}

struct EccentricityProfile {
  std::vector<int> eccentricity;
  int diameter = 0;
  int radius = 0;
};

inline EccentricityProfile eccentricity_profile(const DistanceMatrix& dm) {
  const int n = dm.size();
  EccentricityProfile p;
  p.eccentricity.resize(static_cast<std::size_t>(n), 0);
  p.radius = (n > 0) ? std::numeric_limits<int>::max() : 0;
  for (int i = 0; i < n; ++i) {
    int ecc = 0;
    for (int j = 0; j < n; ++j) ecc = std::max(ecc, dm.at(i, j));
    p.eccentricity[static_cast<std::size_t>(i)] = ecc;
    p.diameter = std::max(p.diameter, ecc);
    p.radius = std::min(p.radius, ecc);
  }
  if (n == 0) p.radius = 0;
  return p;
}

// External vertices have degree 1, internal degree >= 2. Isolated vertices
// (degree 0, possible only for single-atom components) belong to neither set.
struct VertexPartition {
  std::vector<int> external;
  std::vector<int> internal;
};

inline VertexPartition partition_vertices(const Molecule& mol) {
  VertexPartition part;
  for (int v = 0; v < mol.atom_count(); ++v) {
    const int deg = mol.degree(v);
    if (deg == 1) part.external.push_back(v);
    else if (deg >= 2) part.internal.push_back(v);
  }
  return part;
}

}  // namespace molprop::graph
