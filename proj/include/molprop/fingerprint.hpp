#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "molprop/molecule.hpp"

namespace molprop::fp {

namespace detail {

// Fixed-seed 64-bit mixer (splitmix64 finalizer). Platform-independent and
// stable across runs; fingerprint bit positions are part of the artifact's
// contract, so no std::hash.
inline std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

inline std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
  return mix64(h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
}

inline std::uint64_t initial_invariant(const Molecule& mol, int v) {
  const Atom& a = mol.atoms[static_cast<std::size_t>(v)];
  std::uint64_t packed = 0;
  packed = packed << 8 | a.element;
  packed = packed << 8 | static_cast<std::uint8_t>(mol.degree(v));
  packed = packed << 8 | static_cast<std::uint8_t>(a.formal_charge + 16);
  packed = packed << 8 | a.implicit_h;
  packed = packed << 1 | (a.in_ring ? 1 : 0);
  packed = packed << 1 | (a.aromatic ? 1 : 0);
  return mix64(packed ^ 0x9d3f0d6eb7cb4a21ULL);  // constant seed
}

}  // namespace detail

// Fixed-width folded circular fingerprint.
class Fingerprint {
 public:
  Fingerprint() = default;
  Fingerprint(int width, int radius)
      : width_(width), radius_(radius), blocks_(static_cast<std::size_t>((width + 63) / 64), 0) {}

  int width() const { return width_; }
  int radius() const { return radius_; }

  void set(int bit) { blocks_[static_cast<std::size_t>(bit) >> 6] |= 1ULL << (bit & 63); }

  bool test(int bit) const { return (blocks_[static_cast<std::size_t>(bit) >> 6] >> (bit & 63)) & 1ULL; }

  int popcount() const {
    int c = 0;
    for (std::uint64_t b : blocks_) c += __builtin_popcountll(b);
    return c;
  }

  bool operator==(const Fingerprint& o) const {
    return width_ == o.width_ && radius_ == o.radius_ && blocks_ == o.blocks_;
  }

  // True if every set bit of this fingerprint is also set in other.
  bool subset_of(const Fingerprint& o) const {
    if (width_ != o.width_) return false;
    for (std::size_t i = 0; i < blocks_.size(); ++i)
      if (blocks_[i] & ~o.blocks_[i]) return false;
    return true;
  }

  const std::vector<std::uint64_t>& blocks() const { return blocks_; }

 private:
  int width_ = 0;
  int radius_ = 0;
  std::vector<std::uint64_t> blocks_;
};

// Morgan / ECFP-style circular fingerprint. Each atom starts from a hashed
// invariant of (element, degree, charge, H count, ring flag, aromatic flag);
// at every iteration the code is rehashed with the sorted list of
// (bond order, neighbor code) pairs, and every (atom, iteration) code sets
// bit (code mod width).
inline Fingerprint morgan_fingerprint(const Molecule& mol, int radius = 2, int width = 1024) {
  if (radius < 0) throw std::invalid_argument("morgan_fingerprint: radius must be >= 0");
  if (width <= 0 || (width & (width - 1)) != 0)
    throw std::invalid_argument("morgan_fingerprint: width must be a power of two");

  const int n = mol.atom_count();
  Fingerprint fprint(width, radius);
  std::vector<std::uint64_t> codes(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    codes[static_cast<std::size_t>(v)] = detail::initial_invariant(mol, v);
    fprint.set(static_cast<int>(codes[static_cast<std::size_t>(v)] % static_cast<std::uint64_t>(width)));
  }

  std::vector<std::uint64_t> next(static_cast<std::size_t>(n));
  std::vector<std::uint64_t> env;
  for (int r = 1; r <= radius; ++r) {
    for (int v = 0; v < n; ++v) {
      env.clear();
      for (const auto& e : mol.neighbors(v)) {
        const std::uint64_t order =
            static_cast<std::uint64_t>(mol.bonds[static_cast<std::size_t>(e.bond)].order);
        env.push_back(order << 56 ^ codes[static_cast<std::size_t>(e.neighbor)] >> 8);
      }
      if (env.empty()) {
        // isolated atom: the environment never changes, keep the code stable
        next[static_cast<std::size_t>(v)] = codes[static_cast<std::size_t>(v)];
        continue;
      }
      std::sort(env.begin(), env.end());
      std::uint64_t h = detail::hash_combine(codes[static_cast<std::size_t>(v)],
                                             0xa5a5a5a5a5a5a5a5ULL ^ static_cast<std::uint64_t>(r));
      for (std::uint64_t x : env) h = detail::hash_combine(h, x);
      next[static_cast<std::size_t>(v)] = h;
      fprint.set(static_cast<int>(h % static_cast<std::uint64_t>(width)));
    }
    codes.swap(next);
  }
  return fprint;
}

}  // namespace molprop::fp
