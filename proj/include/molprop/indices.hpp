#pragma once

#include <array>
#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "molprop/graph.hpp"
#include "molprop/molecule.hpp"

namespace molprop::indices {

// The irregularity index t(v) is named but not defined by the source model,
// so it is a pluggable strategy. The default counts neighbors whose degree
// differs from v's, which keeps t(v)/deg(v) in [0,1].
enum class IrregularityKind {
  differing_neighbor_count,  // |{u in N(v) : deg(u) != deg(v)}|
  albertson_local,           // sum over N(v) of |deg(u) - deg(v)|
};

inline double irregularity(const Molecule& mol, int v, IrregularityKind kind) {
  const int dv = mol.degree(v);
  double t = 0.0;
  for (const auto& e : mol.neighbors(v)) {
    const int du = mol.degree(e.neighbor);
    switch (kind) {
      case IrregularityKind::differing_neighbor_count:
        if (du != dv) t += 1.0;
        break;
      case IrregularityKind::albertson_local:
        t += std::abs(du - dv);
        break;
    }
  }
  return t;
}

// Vertex score: external vertices accumulate distances to the other external
// vertices; internal vertices weigh eccentricity by local irregularity.
inline double score(int v, const Molecule& mol, const graph::DistanceMatrix& dm,
                    const graph::VertexPartition& part,
                    IrregularityKind kind = IrregularityKind::differing_neighbor_count) {
  const int deg = mol.degree(v);
  if (deg == 1) {
    double s = 0.0;
    for (int u : part.external) s += dm.at(u, v);
    return s;
  }
  if (deg == 0) return 0.0;
  int ecc = 0;
  for (int j = 0; j < dm.size(); ++j) ecc = std::max(ecc, dm.at(v, j));
  return irregularity(mol, v, kind) / static_cast<double>(deg) * static_cast<double>(ecc);
}

struct ActivityIndices {
  double D = 0.0;     // external activity
  double zeta = 0.0;  // internal activity
  int n = 0;          // heavy-atom count
};

// D(G) = sum of external scores / n^3, zeta(G) = sum of internal scores / n^2.
// Empty vertex classes contribute zero.
inline ActivityIndices activity_indices(const Molecule& mol, const graph::DistanceMatrix& dm,
                                        const graph::VertexPartition& part,
                                        IrregularityKind kind = IrregularityKind::differing_neighbor_count) {
  ActivityIndices out;
  out.n = mol.atom_count();
  if (out.n == 0) return out;
  const double n = static_cast<double>(out.n);
  double ext = 0.0;
  for (int v : part.external) ext += score(v, mol, dm, part, kind);
  double internal = 0.0;
  for (int v : part.internal) internal += score(v, mol, dm, part, kind);
  out.D = ext / (n * n * n);
  out.zeta = internal / (n * n);
  return out;
}

struct GraphDescriptors {
  double wiener = 0.0;
  double zagreb_m1 = 0.0;
  double zagreb_m2 = 0.0;
  double randic = 0.0;
  double balaban_j = 0.0;
  int diameter = 0;
  int radius = 0;
  double density = 0.0;
  double avg_clustering = 0.0;
};

// Classical topological index suite on the heavy-atom skeleton (bond orders
// ignored). Degenerate single-atom graphs yield all zeros.
inline GraphDescriptors classical_indices(const Molecule& mol, const graph::DistanceMatrix& dm) {
  GraphDescriptors g;
  const int n = mol.atom_count();
  const int m = mol.bond_count();
  if (n == 0) return g;

  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.wiener += dm.at(i, j);

  for (int v = 0; v < n; ++v) {
    const double deg = mol.degree(v);
    g.zagreb_m1 += deg * deg;
  }
  for (const auto& b : mol.bonds) {
    const double du = mol.degree(b.a);
    const double dv = mol.degree(b.b);
    g.zagreb_m2 += du * dv;
    g.randic += 1.0 / std::sqrt(du * dv);
  }

  // Balaban J: cyclomatic number mu = m - n + 1 for a connected graph.
  const int mu = m - n + 1;
  double jsum = 0.0;
  for (const auto& b : mol.bonds) {
    const double su = static_cast<double>(dm.row_sum(b.a));
    const double sv = static_cast<double>(dm.row_sum(b.b));
    if (su > 0.0 && sv > 0.0) jsum += 1.0 / std::sqrt(su * sv);
  }
  g.balaban_j = (m > 0) ? static_cast<double>(m) / static_cast<double>(mu + 1) * jsum : 0.0;

  const auto ecc = graph::eccentricity_profile(dm);
  g.diameter = ecc.diameter;
  g.radius = ecc.radius;

  g.density = (n >= 2) ? 2.0 * m / (static_cast<double>(n) * (n - 1)) : 0.0;

  double csum = 0.0;
  for (int v = 0; v < n; ++v) {
    const auto& nb = mol.neighbors(v);
    const int deg = static_cast<int>(nb.size());
    if (deg < 2) continue;
    int links = 0;
    for (int i = 0; i < deg; ++i) {
      for (int j = i + 1; j < deg; ++j) {
        const int u = nb[static_cast<std::size_t>(i)].neighbor;
        const int w = nb[static_cast<std::size_t>(j)].neighbor;
        for (const auto& e : mol.neighbors(u))
          if (e.neighbor == w) {
            ++links;
            break;
          }
      }
    }
    csum += 2.0 * links / (static_cast<double>(deg) * (deg - 1));
  }
  g.avg_clustering = csum / n;
  return g;
}

inline const std::array<const char*, 9>& graph_feature_names() {
  static const std::array<const char*, 9> names = {"wiener",    "zagreb_m1", "zagreb_m2",
                                                   "randic",    "balaban_j", "diameter",
                                                   "radius",    "density",   "clustering"};
  return names;
}

inline std::array<double, 9> graph_feature_values(const GraphDescriptors& g) {
  return {g.wiener,  g.zagreb_m1, g.zagreb_m2,
          g.randic,  g.balaban_j, static_cast<double>(g.diameter),
          static_cast<double>(g.radius), g.density, g.avg_clustering};
}

}  // namespace molprop::indices
