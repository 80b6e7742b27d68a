#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "thinspan/error.hpp"

namespace thinspan {

/// A bijection on {0..n-1} stored as its image array: i ↦ map[i].
/// Composition follows function order: (a ∘ b)(i) = a(b(i)).
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<std::size_t> image) : map_(std::move(image)) {
    std::vector<bool> seen(map_.size(), false);
    for (std::size_t v : map_) {
      if (v >= map_.size() || seen[v]) throw Error("not a permutation");
      seen[v] = true;
    }
  }

  static Permutation identity(std::size_t n) {
    Permutation p;
    p.map_.resize(n);
    std::iota(p.map_.begin(), p.map_.end(), std::size_t{0});
    return p;
  }

  std::size_t size() const { return map_.size(); }
  std::size_t operator()(std::size_t i) const { return map_[i]; }
  std::span<const std::size_t> image() const { return map_; }

  bool is_identity() const {
    for (std::size_t i = 0; i < map_.size(); ++i)
      if (map_[i] != i) return false;
    return true;
  }

  Permutation inverse() const {
    Permutation p;
    p.map_.resize(map_.size());
    for (std::size_t i = 0; i < map_.size(); ++i) p.map_[map_[i]] = i;
    return p;
  }

  friend Permutation compose(const Permutation& a, const Permutation& b) {
    if (a.size() != b.size()) throw Error("composing permutations of different sizes");
    Permutation p;
    p.map_.resize(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) p.map_[i] = a.map_[b.map_[i]];
    return p;
  }

  /// σ₁ ⊕ σ₂ acting on the concatenation of the two index ranges.
  friend Permutation concat(const Permutation& a, const Permutation& b) {
    Permutation p;
    p.map_ = a.map_;
    for (std::size_t v : b.map_) p.map_.push_back(v + a.size());
    return p;
  }

  /// Block action: blocks of the given sizes are laid out in source order;
  /// block j moves to block position rho(j), and inside it acts by blocks[j].
  static Permutation block_action(const Permutation& rho,
                                  const std::vector<Permutation>& blocks) {
    const std::size_t m = blocks.size();
    if (rho.size() != m) throw Error("block action arity mismatch");
    const Permutation rho_inv = rho.inverse();
    std::vector<std::size_t> target_offset(m, 0);
    std::size_t off = 0;
    for (std::size_t pos = 0; pos < m; ++pos) {
      target_offset[rho_inv(pos)] = off;
      off += blocks[rho_inv(pos)].size();
    }
    Permutation p;
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < blocks[j].size(); ++k)
        p.map_.push_back(target_offset[j] + blocks[j](k));
    return p;
  }

  /// All n! permutations in lexicographic order of their images.
  static std::vector<Permutation> all(std::size_t n) {
    std::vector<Permutation> out;
    Permutation p = identity(n);
    do out.push_back(p);
    while (std::next_permutation(p.map_.begin(), p.map_.end()));
    return out;
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::size_t> map_;
};

/// One-line notation, 1-based: `[2,1]`.
inline std::string to_string(const Permutation& p) {
  std::string out = "[";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(p(i) + 1);
  }
  return out + "]";
}

}  // namespace thinspan
