#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "molprop/elements.hpp"
#include "molprop/log.hpp"
#include "molprop/molecule.hpp"

namespace molprop::physchem {

struct PhyschemDescriptors {
  double mol_weight = 0.0;
  double tpsa = 0.0;
  int hbd = 0;
  int hba = 0;
  int rotatable_bonds = 0;
  int aromatic_atoms = 0;
  int aromatic_rings = 0;
  int heavy_atoms = 0;
};

inline double molecular_weight(const Molecule& mol) {
  double w = 0.0;
  int hydrogens = 0;
  for (const auto& a : mol.atoms) {
    auto m = element_mass(a.element);
    if (!m) throw std::runtime_error(std::string("no atomic mass for element ") + element_symbol(a.element));
    w += *m;
    hydrogens += a.implicit_h;
  }
  return w + 1.008 * hydrogens;
}

// Lipinski convention: donors are N/O with at least one hydrogen, acceptors
// are all N/O atoms.
inline std::pair<int, int> hbond_counts(const Molecule& mol) {
  int hbd = 0, hba = 0;
  for (const auto& a : mol.atoms) {
    if (a.element == element::N || a.element == element::O) {
      ++hba;
      if (a.implicit_h > 0) ++hbd;
    }
  }
  return {hbd, hba};
}

namespace detail {

// True if the carbon end of a C-N single bond carries a double bond to
// oxygen, i.e. the C-N bond is an amide linkage.
inline bool is_amide_cn(const Molecule& mol, int carbon, int nitrogen) {
  if (mol.atoms[static_cast<std::size_t>(carbon)].element != element::C) return false;
  if (mol.atoms[static_cast<std::size_t>(nitrogen)].element != element::N) return false;
  for (const auto& e : mol.neighbors(carbon)) {
    const Bond& b = mol.bonds[static_cast<std::size_t>(e.bond)];
    if (b.order == BondOrder::double_ &&
        mol.atoms[static_cast<std::size_t>(e.neighbor)].element == element::O)
      return true;
  }
  return false;
}

}  // namespace detail

inline int rotatable_bond_count(const Molecule& mol) {
  int count = 0;
  for (const auto& b : mol.bonds) {
    if (b.order != BondOrder::single || b.in_ring) continue;
    if (mol.degree(b.a) < 2 || mol.degree(b.b) < 2) continue;
    if (detail::is_amide_cn(mol, b.a, b.b) || detail::is_amide_cn(mol, b.b, b.a)) continue;
    ++count;
  }
  return count;
}

namespace detail {

struct PolarEnvironment {
  std::uint8_t z;
  bool aromatic;
  int charge;
  int h;
  int single;    // explicit single bonds
  int double_;   // double bonds
  int triple;
  int aromatic_bonds;
  bool in_3ring;
};

inline bool in_three_ring(const Molecule& mol, int v) {
  const auto& nb = mol.neighbors(v);
  for (std::size_t i = 0; i < nb.size(); ++i) {
    for (std::size_t j = i + 1; j < nb.size(); ++j) {
      for (const auto& e : mol.neighbors(nb[i].neighbor))
        if (e.neighbor == nb[j].neighbor) return true;
    }
  }
  return false;
}

inline PolarEnvironment polar_environment(const Molecule& mol, int v) {
  PolarEnvironment env{};
  const Atom& a = mol.atoms[static_cast<std::size_t>(v)];
  env.z = a.element;
  env.aromatic = a.aromatic;
  env.charge = a.formal_charge;
  env.h = a.implicit_h;
  for (const auto& e : mol.neighbors(v)) {
    switch (mol.bonds[static_cast<std::size_t>(e.bond)].order) {
      case BondOrder::single: env.single++; break;
      case BondOrder::double_: env.double_++; break;
      case BondOrder::triple: env.triple++; break;
      case BondOrder::aromatic: env.aromatic_bonds++; break;
    }
  }
  env.in_3ring = in_three_ring(mol, v);
  return env;
}

// Ertl fragment contributions for nitrogen and oxygen environments
// (J. Med. Chem. 43 (2000) 3714). Sulfur/phosphorus terms are omitted.
inline double ertl_contribution(const PolarEnvironment& e, bool& matched) {
  matched = true;
  const int s = e.single, d = e.double_, t = e.triple, ar = e.aromatic_bonds;
  if (e.z == element::O) {
    if (!e.aromatic && e.charge == 0) {
      if (e.h == 0 && s == 2 && d == 0 && t == 0 && ar == 0) return e.in_3ring ? 12.53 : 9.23;
      if (e.h == 0 && s == 0 && d == 1 && t == 0 && ar == 0) return 17.07;
      if (e.h == 1 && s == 1 && d == 0 && t == 0 && ar == 0) return 20.23;
    }
    if (!e.aromatic && e.charge == -1 && e.h == 0 && s == 1 && d == 0 && t == 0 && ar == 0) return 23.06;
    if (e.aromatic && e.charge == 0 && e.h == 0 && ar == 2 && s == 0 && d == 0) return 13.14;
  } else if (e.z == element::N) {
    if (!e.aromatic && e.charge == 0) {
      if (e.h == 0 && s == 3 && d == 0 && t == 0 && ar == 0) return e.in_3ring ? 3.01 : 3.24;
      if (e.h == 0 && s == 1 && d == 1 && t == 0 && ar == 0) return 12.36;
      if (e.h == 0 && s == 0 && d == 0 && t == 1 && ar == 0) return 23.79;
      if (e.h == 0 && s == 1 && d == 2 && t == 0 && ar == 0) return 11.68;
      if (e.h == 0 && s == 0 && d == 1 && t == 1 && ar == 0) return 13.60;
      if (e.h == 1 && s == 2 && d == 0 && t == 0 && ar == 0) return e.in_3ring ? 21.94 : 12.03;
      if (e.h == 1 && s == 0 && d == 1 && t == 0 && ar == 0) return 23.85;
      if (e.h == 2 && s == 1 && d == 0 && t == 0 && ar == 0) return 26.02;
    }
    if (!e.aromatic && e.charge == 1) {
      if (e.h == 0 && s == 4 && d == 0 && t == 0 && ar == 0) return 0.00;
      if (e.h == 0 && s == 2 && d == 1 && t == 0 && ar == 0) return 3.01;
      if (e.h == 0 && s == 1 && d == 0 && t == 1 && ar == 0) return 4.36;
      if (e.h == 1 && s == 3 && d == 0 && t == 0 && ar == 0) return 4.44;
      if (e.h == 1 && s == 1 && d == 1 && t == 0 && ar == 0) return 13.97;
      if (e.h == 2 && s == 2 && d == 0 && t == 0 && ar == 0) return 16.61;
      if (e.h == 2 && s == 0 && d == 1 && t == 0 && ar == 0) return 25.59;
      if (e.h == 3 && s == 1 && d == 0 && t == 0 && ar == 0) return 27.64;
    }
    if (e.aromatic && e.charge == 0) {
      if (e.h == 0 && ar == 2 && s == 0 && d == 0) return 12.89;
      if (e.h == 0 && ar == 3 && s == 0 && d == 0) return 4.41;
      if (e.h == 0 && ar == 2 && s == 1 && d == 0) return 4.93;
      if (e.h == 0 && ar == 2 && s == 0 && d == 1) return 8.39;
      if (e.h == 1 && ar == 2 && s == 0 && d == 0) return 15.79;
    }
    if (e.aromatic && e.charge == 1) {
      if (e.h == 0 && ar == 3 && s == 0 && d == 0) return 4.10;
      if (e.h == 0 && ar == 2 && s == 1 && d == 0) return 3.88;
      if (e.h == 1 && ar == 2 && s == 0 && d == 0) return 14.14;
    }
  }
  matched = false;
  return 0.0;
}

// Nearest generic environment when the exact bond pattern is not tabulated.
inline double ertl_fallback(const PolarEnvironment& e) {
  if (e.z == element::O) {
    if (e.aromatic) return 13.14;
    if (e.charge < 0) return 23.06;
    if (e.h >= 1) return 20.23;
    if (e.double_ >= 1) return 17.07;
    return 9.23;
  }
  if (e.aromatic) {
    if (e.charge > 0) return e.h >= 1 ? 14.14 : 4.10;
    return e.h >= 1 ? 15.79 : 4.41;
  }
  if (e.charge > 0) {
    if (e.h >= 3) return 27.64;
    if (e.h == 2) return 16.61;
    if (e.h == 1) return 4.44;
    return 0.00;
  }
  if (e.h >= 2) return 26.02;
  if (e.h == 1) return 12.03;
  return 3.24;
}

}  // namespace detail

// Topological polar surface area from Ertl fragment contributions over N and
// O atoms. Unknown polar environments fall back to the nearest generic entry
// with a warning.
inline double tpsa(const Molecule& mol) {
  double area = 0.0;
  for (int v = 0; v < mol.atom_count(); ++v) {
    const std::uint8_t z = mol.atoms[static_cast<std::size_t>(v)].element;
    if (z != element::N && z != element::O) continue;
    const auto env = detail::polar_environment(mol, v);
    bool matched = false;
    double c = detail::ertl_contribution(env, matched);
    if (!matched) {
      c = detail::ertl_fallback(env);
      log::warn("tpsa: untabulated " + std::string(element_symbol(z)) +
                " environment, using generic contribution " + std::to_string(c));
    }
    area += c;
  }
  return area;
}

// Aromatic ring count = cyclomatic number of the aromatic-bond subgraph,
// which equals the number of rings in any cycle basis of that subgraph.
inline std::pair<int, int> aromaticity_counts(const Molecule& mol) {
  int aromatic_atoms = 0;
  for (const auto& a : mol.atoms)
    if (a.aromatic) ++aromatic_atoms;

  const int n = mol.atom_count();
  std::vector<int> comp(static_cast<std::size_t>(n), -1);
  int ncomp = 0;
  std::vector<int> stack;
  for (int root = 0; root < n; ++root) {
    if (comp[static_cast<std::size_t>(root)] != -1 || !mol.atoms[static_cast<std::size_t>(root)].aromatic)
      continue;
    comp[static_cast<std::size_t>(root)] = ncomp;
    stack.push_back(root);
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (const auto& e : mol.neighbors(v)) {
        if (mol.bonds[static_cast<std::size_t>(e.bond)].order != BondOrder::aromatic) continue;
        if (comp[static_cast<std::size_t>(e.neighbor)] == -1) {
          comp[static_cast<std::size_t>(e.neighbor)] = ncomp;
          stack.push_back(e.neighbor);
        }
      }
    }
    ++ncomp;
  }
  std::vector<int> nodes(static_cast<std::size_t>(ncomp), 0);
  std::vector<int> edges(static_cast<std::size_t>(ncomp), 0);
  for (int v = 0; v < n; ++v)
    if (comp[static_cast<std::size_t>(v)] >= 0) nodes[static_cast<std::size_t>(comp[static_cast<std::size_t>(v)])]++;
  for (const auto& b : mol.bonds) {
    if (b.order == BondOrder::aromatic && comp[static_cast<std::size_t>(b.a)] >= 0 &&
        comp[static_cast<std::size_t>(b.a)] == comp[static_cast<std::size_t>(b.b)])
      edges[static_cast<std::size_t>(comp[static_cast<std::size_t>(b.a)])]++;
  }
  int rings = 0;
  for (int c = 0; c < ncomp; ++c)
    rings += std::max(0, edges[static_cast<std::size_t>(c)] - nodes[static_cast<std::size_t>(c)] + 1);
  return {aromatic_atoms, rings};
}

inline PhyschemDescriptors compute(const Molecule& mol) {
  PhyschemDescriptors d;
  d.mol_weight = molecular_weight(mol);
  d.tpsa = tpsa(mol);
  auto [hbd, hba] = hbond_counts(mol);
  d.hbd = hbd;
  d.hba = hba;
  d.rotatable_bonds = rotatable_bond_count(mol);
  auto [arom_atoms, arom_rings] = aromaticity_counts(mol);
  d.aromatic_atoms = arom_atoms;
  d.aromatic_rings = arom_rings;
  d.heavy_atoms = mol.atom_count();
  return d;
}

inline const std::array<const char*, 8>& physchem_feature_names() {
  static const std::array<const char*, 8> names = {"mw",        "tpsa",       "hbd",
                                                   "hba",       "rot_bonds",  "arom_atoms",
                                                   "arom_rings", "heavy_atoms"};
  return names;
}

inline std::array<double, 8> physchem_feature_values(const PhyschemDescriptors& d) {
  return {d.mol_weight,
          d.tpsa,
          static_cast<double>(d.hbd),
          static_cast<double>(d.hba),
          static_cast<double>(d.rotatable_bonds),
          static_cast<double>(d.aromatic_atoms),
          static_cast<double>(d.aromatic_rings),
          static_cast<double>(d.heavy_atoms)};
}

}  // namespace molprop::physchem
