#pragma once

#include <cctype>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "molprop/molecule.hpp"

namespace molprop {

// Parse failure with the character offset where it was detected.
class SmilesError : public std::runtime_error {
 public:
  SmilesError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " (at offset " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

namespace smiles_detail {

// Default valences of the organic subset. Aromatic atoms use only the first
// (lowest) entry: ring heteroatoms written lowercase never carry the
// hypervalent forms, and explicit hydrogens on them must be bracketed.
inline const std::vector<std::uint8_t>* organic_valences(std::uint8_t z) {
  using V = std::vector<std::uint8_t>;
  static const V b = {3}, c = {4}, n = {3}, o = {2}, p = {3, 5}, s = {2, 4, 6}, hal = {1};
  switch (z) {
    case element::B: return &b;
    case element::C: return &c;
    case element::N: return &n;
    case element::O: return &o;
    case element::P: return &p;
    case element::S: return &s;
    case element::F:
    case element::Cl:
    case element::Br:
    case element::I: return &hal;
    default: return nullptr;
  }
}

inline int round_half_up(double x) { return static_cast<int>(std::floor(x + 0.5)); }

struct ParsedAtom {
  Atom atom;
  std::size_t offset = 0;
  bool bracket = false;
  int bracket_h = 0;  // explicit H count from the bracket
  int folded_h = 0;   // explicit [H] neighbor atoms folded into this one
};

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Molecule run() {
    if (text_.empty()) throw SmilesError("empty SMILES", 0);
    while (pos_ < text_.size()) step();
    if (!branch_stack_.empty())
      throw SmilesError("unbalanced parentheses", branch_stack_.back().offset);
    if (!ring_slots_.empty())
      throw SmilesError("unmatched ring-closure digit " + std::to_string(ring_slots_.begin()->first),
                        ring_slots_.begin()->second.offset);
    if (pending_bond_) throw SmilesError("expected atom after bond symbol", pending_bond_offset_);
    if (atoms_.empty()) throw SmilesError("no atoms in SMILES", 0);
    return build();
  }

 private:
  struct RingSlot {
    int atom;
    std::optional<BondOrder> order;
    std::size_t offset;
  };
  struct BranchMark {
    int atom;
    std::size_t offset;
  };
  struct RawBond {
    int a, b;
    BondOrder order;
  };

  std::string_view text_;
  std::size_t pos_ = 0;
  std::vector<ParsedAtom> atoms_;
  std::vector<RawBond> bonds_;
  std::vector<BranchMark> branch_stack_;
  std::map<int, RingSlot> ring_slots_;
  int prev_atom_ = -1;
  std::optional<BondOrder> pending_bond_;
  std::size_t pending_bond_offset_ = 0;

  char peek() const { return text_[pos_]; }
  bool done() const { return pos_ >= text_.size(); }

  void step() {
    const char c = peek();
    const std::size_t here = pos_;
    if (c == '(') {
      if (prev_atom_ < 0) throw SmilesError("branch before any atom", here);
      if (pending_bond_) throw SmilesError("bond symbol before branch open", here);
      branch_stack_.push_back(BranchMark{prev_atom_, here});
      ++pos_;
    } else if (c == ')') {
      if (branch_stack_.empty()) throw SmilesError("unbalanced parentheses", here);
      if (pending_bond_) throw SmilesError("dangling bond before branch close", here);
      prev_atom_ = branch_stack_.back().atom;
      branch_stack_.pop_back();
      ++pos_;
    } else if (c == '.') {
      if (!branch_stack_.empty()) throw SmilesError("'.' inside branch", here);
      if (pending_bond_) throw SmilesError("bond symbol before '.'", here);
      if (prev_atom_ < 0) throw SmilesError("unexpected '.'", here);
      prev_atom_ = -1;
      ++pos_;
    } else if (c == '-' || c == '=' || c == '#' || c == ':' || c == '/' || c == '\\') {
      if (pending_bond_) throw SmilesError("two consecutive bond symbols", here);
      pending_bond_ = bond_from_char(c);
      pending_bond_offset_ = here;
      ++pos_;
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '%') {
      ring_closure(here);
    } else if (c == '[') {
      int idx = parse_bracket_atom(here);
      attach(idx, here);
    } else if (std::isalpha(static_cast<unsigned char>(c))) {
      int idx = parse_organic_atom(here);
      attach(idx, here);
    } else {
      throw SmilesError(std::string("unexpected character '") + c + "'", here);
    }
  }

  static BondOrder bond_from_char(char c) {
    switch (c) {
      case '=': return BondOrder::double_;
      case '#': return BondOrder::triple;
      case ':': return BondOrder::aromatic;
      default: return BondOrder::single;  // '-', '/', '\\' (stereo discarded)
    }
  }

  void attach(int idx, std::size_t offset) {
    if (prev_atom_ >= 0) make_bond(prev_atom_, idx, take_pending(), offset);
    else if (pending_bond_)
      throw SmilesError("bond symbol before first atom of a component", pending_bond_offset_);
    prev_atom_ = idx;
  }

  std::optional<BondOrder> take_pending() {
    auto b = pending_bond_;
    pending_bond_.reset();
    return b;
  }

  void make_bond(int a, int b, std::optional<BondOrder> explicit_order, std::size_t offset) {
    BondOrder order;
    if (explicit_order) {
      order = *explicit_order;
      if (order == BondOrder::aromatic &&
          !(atoms_[static_cast<std::size_t>(a)].atom.aromatic && atoms_[static_cast<std::size_t>(b)].atom.aromatic))
        throw SmilesError("aromatic bond between non-aromatic atoms", offset);
    } else if (atoms_[static_cast<std::size_t>(a)].atom.aromatic &&
               atoms_[static_cast<std::size_t>(b)].atom.aromatic) {
      order = BondOrder::aromatic;
    } else {
      order = BondOrder::single;
    }
    if (a == b) throw SmilesError("ring closure forms a self-loop", offset);
    for (const auto& rb : bonds_)
      if ((rb.a == a && rb.b == b) || (rb.a == b && rb.b == a))
        throw SmilesError("duplicate bond between atoms", offset);
    bonds_.push_back(RawBond{a, b, order});
  }

  void ring_closure(std::size_t here) {
    if (prev_atom_ < 0) throw SmilesError("ring-closure digit before any atom", here);
    int number;
    if (peek() == '%') {
      if (pos_ + 2 >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])) ||
          !std::isdigit(static_cast<unsigned char>(text_[pos_ + 2])))
        throw SmilesError("malformed %nn ring closure", here);
      number = (text_[pos_ + 1] - '0') * 10 + (text_[pos_ + 2] - '0');
      pos_ += 3;
    } else {
      number = peek() - '0';
      ++pos_;
    }
    auto order = take_pending();
    auto it = ring_slots_.find(number);
    if (it == ring_slots_.end()) {
      ring_slots_.emplace(number, RingSlot{prev_atom_, order, here});
      return;
    }
    RingSlot slot = it->second;
    ring_slots_.erase(it);
    std::optional<BondOrder> resolved;
    if (slot.order && order && *slot.order != *order)
      throw SmilesError("conflicting ring-closure bond orders", here);
    resolved = slot.order ? slot.order : order;
    make_bond(slot.atom, prev_atom_, resolved, here);
  }

  int parse_organic_atom(std::size_t here) {
    Atom a;
    // Two-letter halogens first; then one-letter organic subset.
    if (text_.compare(pos_, 2, "Cl") == 0) {
      a.element = element::Cl;
      pos_ += 2;
    } else if (text_.compare(pos_, 2, "Br") == 0) {
      a.element = element::Br;
      pos_ += 2;
    } else {
      const char c = peek();
      switch (c) {
        case 'B': a.element = element::B; break;
        case 'C': a.element = element::C; break;
        case 'N': a.element = element::N; break;
        case 'O': a.element = element::O; break;
        case 'P': a.element = element::P; break;
        case 'S': a.element = element::S; break;
        case 'F': a.element = element::F; break;
        case 'I': a.element = element::I; break;
        case 'b': a.element = element::B, a.aromatic = true; break;
        case 'c': a.element = element::C, a.aromatic = true; break;
        case 'n': a.element = element::N, a.aromatic = true; break;
        case 'o': a.element = element::O, a.aromatic = true; break;
        case 'p': a.element = element::P, a.aromatic = true; break;
        case 's': a.element = element::S, a.aromatic = true; break;
        case 'H': throw SmilesError("hydrogen must be written as a bracket atom", here);
        default:
          throw SmilesError(std::string("unknown element symbol '") + c + "'", here);
      }
      ++pos_;
    }
    ParsedAtom pa;
    pa.atom = a;
    pa.offset = here;
    atoms_.push_back(pa);
    return static_cast<int>(atoms_.size()) - 1;
  }

  int parse_bracket_atom(std::size_t here) {
    ++pos_;  // consume '['
    // isotope (accepted and ignored)
    while (!done() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (done()) throw SmilesError("unterminated bracket atom", here);

    Atom a;
    std::size_t sym_off = pos_;
    if (std::islower(static_cast<unsigned char>(peek()))) {
      // aromatic symbols: one letter b c n o p s, two letter se as te
      static const std::pair<const char*, std::uint8_t> two[] = {
          {"se", element::Se}, {"as", element::As}, {"te", element::Te}};
      bool matched = false;
      for (const auto& [sym, z] : two) {
        if (text_.compare(pos_, 2, sym) == 0) {
          a.element = z;
          a.aromatic = true;
          pos_ += 2;
          matched = true;
          break;
        }
      }
      if (!matched) {
        switch (peek()) {
          case 'b': a.element = element::B; break;
          case 'c': a.element = element::C; break;
          case 'n': a.element = element::N; break;
          case 'o': a.element = element::O; break;
          case 'p': a.element = element::P; break;
          case 's': a.element = element::S; break;
          default:
            throw SmilesError(std::string("unknown element symbol '") + peek() + "'", sym_off);
        }
        a.aromatic = true;
        ++pos_;
      }
    } else if (std::isupper(static_cast<unsigned char>(peek()))) {
      std::string sym(1, peek());
      if (pos_ + 1 < text_.size() && std::islower(static_cast<unsigned char>(text_[pos_ + 1]))) {
        // longest match: try the two-letter symbol first
        std::string sym2 = sym + text_[pos_ + 1];
        if (auto z = element_from_symbol(sym2)) {
          a.element = *z;
          pos_ += 2;
        } else if (auto z1 = element_from_symbol(sym)) {
          a.element = *z1;
          ++pos_;
        } else {
          throw SmilesError("unknown element symbol '" + sym2 + "'", sym_off);
        }
      } else if (auto z1 = element_from_symbol(sym)) {
        a.element = *z1;
        ++pos_;
      } else {
        throw SmilesError("unknown element symbol '" + sym + "'", sym_off);
      }
    } else {
      throw SmilesError("expected element symbol in bracket atom", pos_);
    }

    int hcount = 0;
    int charge = 0;
    while (!done() && peek() != ']') {
      const char c = peek();
      if (c == '@') {
        ++pos_;  // chirality parsed and discarded
        if (!done() && peek() == '@') ++pos_;
      } else if (c == 'H') {
        ++pos_;
        hcount = 1;
        if (!done() && std::isdigit(static_cast<unsigned char>(peek()))) {
          hcount = peek() - '0';
          ++pos_;
        }
      } else if (c == '+' || c == '-') {
        int sign = (c == '+') ? 1 : -1;
        ++pos_;
        int magnitude = 1;
        if (!done() && std::isdigit(static_cast<unsigned char>(peek()))) {
          magnitude = 0;
          while (!done() && std::isdigit(static_cast<unsigned char>(peek()))) {
            magnitude = magnitude * 10 + (peek() - '0');
            ++pos_;
          }
        } else {
          while (!done() && peek() == c) {  // ++ / -- style
            ++magnitude;
            ++pos_;
          }
        }
        charge = sign * magnitude;
      } else if (c == ':') {
        ++pos_;  // atom class, ignored
        while (!done() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
      } else {
        throw SmilesError(std::string("unexpected character '") + c + "' in bracket atom", pos_);
      }
    }
    if (done()) throw SmilesError("unterminated bracket atom", here);
    ++pos_;  // consume ']'

    if (charge < -15 || charge > 15) throw SmilesError("unreasonable formal charge", here);
    a.formal_charge = static_cast<std::int8_t>(charge);

    ParsedAtom pa;
    pa.atom = a;
    pa.offset = here;
    pa.bracket = true;
    pa.bracket_h = hcount;
    atoms_.push_back(pa);
    return static_cast<int>(atoms_.size()) - 1;
  }

  Molecule build() {
    // Fold explicit [H] vertices into their heavy neighbor's hydrogen count.
    const int n = static_cast<int>(atoms_.size());
    std::vector<double> bond_sum(static_cast<std::size_t>(n), 0.0);
    std::vector<int> bond_cnt(static_cast<std::size_t>(n), 0);
    for (const auto& b : bonds_) {
      bond_sum[static_cast<std::size_t>(b.a)] += bond_order_value(b.order);
      bond_sum[static_cast<std::size_t>(b.b)] += bond_order_value(b.order);
      bond_cnt[static_cast<std::size_t>(b.a)]++;
      bond_cnt[static_cast<std::size_t>(b.b)]++;
    }

    std::vector<char> is_h(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i) {
      if (atoms_[static_cast<std::size_t>(i)].atom.element == element::H) {
        is_h[static_cast<std::size_t>(i)] = 1;
        if (bond_cnt[static_cast<std::size_t>(i)] > 1)
          throw SmilesError("valence violation: hydrogen with more than one bond",
                            atoms_[static_cast<std::size_t>(i)].offset);
      }
    }
    for (const auto& b : bonds_) {
      if (is_h[static_cast<std::size_t>(b.a)] || is_h[static_cast<std::size_t>(b.b)]) {
        if (b.order != BondOrder::single)
          throw SmilesError("valence violation: non-single bond to hydrogen",
                            atoms_[static_cast<std::size_t>(b.a)].offset);
        if (!is_h[static_cast<std::size_t>(b.a)]) atoms_[static_cast<std::size_t>(b.a)].folded_h++;
        if (!is_h[static_cast<std::size_t>(b.b)]) atoms_[static_cast<std::size_t>(b.b)].folded_h++;
      }
    }

    Molecule mol;
    std::vector<int> remap(static_cast<std::size_t>(n), -1);
    for (int i = 0; i < n; ++i) {
      ParsedAtom& pa = atoms_[static_cast<std::size_t>(i)];
      if (is_h[static_cast<std::size_t>(i)]) continue;
      Atom a = pa.atom;
      if (pa.bracket) {
        a.implicit_h = static_cast<std::uint8_t>(pa.bracket_h + pa.folded_h);
      } else {
        const auto* valences = organic_valences(a.element);
        const int sum = round_half_up(bond_sum[static_cast<std::size_t>(i)]) + pa.folded_h;
        int h = 0;
        if (a.aromatic) {
          h = std::max(0, static_cast<int>(valences->front()) - sum);
        } else {
          int target = -1;
          for (std::uint8_t v : *valences) {
            if (static_cast<int>(v) >= sum) {
              target = v;
              break;
            }
          }
          if (target < 0)
            throw SmilesError("valence violation on " + std::string(element_symbol(a.element)),
                              pa.offset);
          h = target - sum;
        }
        a.implicit_h = static_cast<std::uint8_t>(h);
      }
      remap[static_cast<std::size_t>(i)] = mol.add_atom(a);
    }
    for (const auto& b : bonds_) {
      int na = remap[static_cast<std::size_t>(b.a)];
      int nb = remap[static_cast<std::size_t>(b.b)];
      if (na >= 0 && nb >= 0) mol.add_bond(na, nb, b.order);
    }
    mol.finalize();
    return mol;
  }
};

}  // namespace smiles_detail

// Parse one SMILES string into a hydrogen-suppressed molecular graph.
// Supports the organic subset, bracket atoms (charge, explicit H, isotopes
// ignored), branches, ring closures including %nn, aromatic lowercase
// notation and multi-component '.' strings. Stereo tokens are parsed and
// discarded. Throws SmilesError with the character offset on malformed input.
inline Molecule parse_smiles(std::string_view text) {
  return smiles_detail::Parser(text).run();
}

struct RejectedRecord {
  std::string smiles;
  std::string reason;
};

template <typename Target>
struct FilterResult {
  struct Accepted {
    std::string smiles;
    Molecule mol;
    Target target;
  };
  std::vector<Accepted> accepted;
  std::vector<RejectedRecord> rejected;
};

// Parse and validate a batch of (smiles, target) records. Parse failures and
// molecules with fewer than two heavy atoms become rejection records instead
// of errors. Accepted molecules keep all components; descriptor code reduces
// to the largest connected component.
template <typename Target>
FilterResult<Target> validate_and_filter(const std::vector<std::pair<std::string, Target>>& records) {
  FilterResult<Target> out;
  for (const auto& [smi, target] : records) {
    try {
      Molecule mol = parse_smiles(smi);
      if (mol.atom_count() < 2) {
        out.rejected.push_back({smi, "too small: fewer than 2 heavy atoms"});
        continue;
      }
      out.accepted.push_back({smi, std::move(mol), target});
    } catch (const SmilesError& e) {
      out.rejected.push_back({smi, e.what()});
    }
  }
  return out;
}

}  // namespace molprop
