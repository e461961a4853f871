#pragma once

#include <algorithm>
#include <cstdint>
#include <stack>
#include <stdexcept>
#include <vector>

#include "molprop/elements.hpp"

namespace molprop {

enum class BondOrder : std::uint8_t { single = 1, double_ = 2, triple = 3, aromatic = 4 };

// Numeric order used by the valence model; aromatic counts 1.5.
inline double bond_order_value(BondOrder o) {
  switch (o) {
    case BondOrder::single: return 1.0;
    case BondOrder::double_: return 2.0;
    case BondOrder::triple: return 3.0;
    case BondOrder::aromatic: return 1.5;
  }
  return 1.0;
}

struct Atom {
  std::uint8_t element = element::C;
  std::int8_t formal_charge = 0;
  bool aromatic = false;
  std::uint8_t implicit_h = 0;
  bool in_ring = false;
};

struct Bond {
  int a = -1;
  int b = -1;
  BondOrder order = BondOrder::single;
  bool in_ring = false;
};

// Hydrogen-suppressed molecular graph. Heavy atoms only; hydrogens live in
// Atom::implicit_h. Immutable once built (the parser calls finalize()).
class Molecule {
 public:
  std::vector<Atom> atoms;
  std::vector<Bond> bonds;

  struct Adj {
    int neighbor;
    int bond;
  };

  int atom_count() const { return static_cast<int>(atoms.size()); }
  int bond_count() const { return static_cast<int>(bonds.size()); }

  const std::vector<Adj>& neighbors(int atom) const { return adjacency_[static_cast<std::size_t>(atom)]; }

  int degree(int atom) const { return static_cast<int>(adjacency_[static_cast<std::size_t>(atom)].size()); }

  int total_hydrogens() const {
    int h = 0;
    for (const auto& a : atoms) h += a.implicit_h;
    return h;
  }

  int add_atom(const Atom& a) {
    atoms.push_back(a);
    return atom_count() - 1;
  }

  // Rejects self-loops and parallel bonds so the heavy-atom graph stays simple.
  int add_bond(int a, int b, BondOrder order) {
    if (a == b) throw std::invalid_argument("molecule: self-loop bond");
    if (a < 0 || b < 0 || a >= atom_count() || b >= atom_count())
      throw std::invalid_argument("molecule: bond endpoint out of range");
    for (const auto& bd : bonds) {
      if ((bd.a == a && bd.b == b) || (bd.a == b && bd.b == a))
        throw std::invalid_argument("molecule: parallel bond");
    }
    bonds.push_back(Bond{a, b, order, false});
    return bond_count() - 1;
  }

  // Builds adjacency, ring flags and connected components. Must be called
  // after the last add_atom/add_bond.
  void finalize() {
    build_adjacency();
    mark_rings();
    label_components();
  }

  int component_count() const { return component_count_; }
  int component_of(int atom) const { return component_[static_cast<std::size_t>(atom)]; }

  std::vector<int> component_sizes() const {
    std::vector<int> sizes(static_cast<std::size_t>(component_count_), 0);
    for (int c : component_) sizes[static_cast<std::size_t>(c)]++;
    return sizes;
  }

  bool connected() const { return component_count_ <= 1; }

  // Largest connected component as a fresh Molecule (ties: lowest component
  // id, i.e. the one containing the earliest atom). Atom order is preserved.
  Molecule largest_component() const {
    if (component_count_ <= 1) return *this;
    auto sizes = component_sizes();
    int best = 0;
    for (int c = 1; c < component_count_; ++c)
      if (sizes[static_cast<std::size_t>(c)] > sizes[static_cast<std::size_t>(best)]) best = c;

    Molecule sub;
    std::vector<int> remap(atoms.size(), -1);
    for (int i = 0; i < atom_count(); ++i) {
      if (component_[static_cast<std::size_t>(i)] == best)
        remap[static_cast<std::size_t>(i)] = sub.add_atom(atoms[static_cast<std::size_t>(i)]);
    }
    for (const auto& b : bonds) {
      int na = remap[static_cast<std::size_t>(b.a)];
      int nb = remap[static_cast<std::size_t>(b.b)];
      if (na >= 0 && nb >= 0) sub.add_bond(na, nb, b.order);
    }
    sub.finalize();
    return sub;
  }

 private:
  std::vector<std::vector<Adj>> adjacency_;
  std::vector<int> component_;
  int component_count_ = 0;

  void build_adjacency() {
    adjacency_.assign(atoms.size(), {});
    for (int i = 0; i < bond_count(); ++i) {
      const Bond& b = bonds[static_cast<std::size_t>(i)];
      adjacency_[static_cast<std::size_t>(b.a)].push_back(Adj{b.b, i});
      adjacency_[static_cast<std::size_t>(b.b)].push_back(Adj{b.a, i});
    }
  }

  // A bond is in a ring iff it is not a bridge. Iterative lowlink DFS: back
  // edges are flagged directly, tree edges when a descendant reaches back
  // above them.
  void mark_rings() {
    const int n = atom_count();
    std::vector<int> disc(static_cast<std::size_t>(n), -1);
    std::vector<int> low(static_cast<std::size_t>(n), 0);
    int timer = 0;

    struct Frame {
      int atom;
      int parent_bond;
      std::size_t edge_idx;
    };

    for (int root = 0; root < n; ++root) {
      if (disc[static_cast<std::size_t>(root)] != -1) continue;
      std::stack<Frame> stack;
      stack.push(Frame{root, -1, 0});
      disc[static_cast<std::size_t>(root)] = low[static_cast<std::size_t>(root)] = timer++;
      while (!stack.empty()) {
        Frame& f = stack.top();
        const auto& adj = adjacency_[static_cast<std::size_t>(f.atom)];
        if (f.edge_idx < adj.size()) {
          const Adj e = adj[f.edge_idx++];
          if (e.bond == f.parent_bond) continue;
          if (disc[static_cast<std::size_t>(e.neighbor)] == -1) {
            disc[static_cast<std::size_t>(e.neighbor)] = low[static_cast<std::size_t>(e.neighbor)] = timer++;
            stack.push(Frame{e.neighbor, e.bond, 0});
          } else {
            bonds[static_cast<std::size_t>(e.bond)].in_ring = true;
            low[static_cast<std::size_t>(f.atom)] =
                std::min(low[static_cast<std::size_t>(f.atom)], disc[static_cast<std::size_t>(e.neighbor)]);
          }
        } else {
          const Frame done = f;
          stack.pop();
          if (!stack.empty()) {
            Frame& up = stack.top();
            low[static_cast<std::size_t>(up.atom)] =
                std::min(low[static_cast<std::size_t>(up.atom)], low[static_cast<std::size_t>(done.atom)]);
            if (low[static_cast<std::size_t>(done.atom)] < disc[static_cast<std::size_t>(done.atom)])
              bonds[static_cast<std::size_t>(done.parent_bond)].in_ring = true;
          }
        }
      }
    }
    for (const auto& b : bonds) {
      if (b.in_ring) {
        atoms[static_cast<std::size_t>(b.a)].in_ring = true;
        atoms[static_cast<std::size_t>(b.b)].in_ring = true;
      }
    }
  }

  void label_components() {
    const int n = atom_count();
    component_.assign(static_cast<std::size_t>(n), -1);
    component_count_ = 0;
    for (int root = 0; root < n; ++root) {
      if (component_[static_cast<std::size_t>(root)] != -1) continue;
      std::stack<int> st;
      st.push(root);
      component_[static_cast<std::size_t>(root)] = component_count_;
      while (!st.empty()) {
        int a = st.top();
        st.pop();
        for (const Adj& e : adjacency_[static_cast<std::size_t>(a)]) {
          if (component_[static_cast<std::size_t>(e.neighbor)] == -1) {
            component_[static_cast<std::size_t>(e.neighbor)] = component_count_;
            st.push(e.neighbor);
          }
        }
      }
      component_count_++;
    }
  }
};

}  // namespace molprop
