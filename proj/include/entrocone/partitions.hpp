#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"

namespace entrocone {

inline constexpr int kMaxAtoms = 12;

/// Permutation of atoms {0..k-1}; image[a] is where atom a is sent.
class Permutation {
 public:
  Permutation() = default;

  explicit Permutation(std::vector<int> image) : image_(std::move(image)) {
    std::vector<bool> hit(image_.size(), false);
    for (int a : image_) {
      if (a < 0 || a >= static_cast<int>(image_.size()) || hit[a])
        throw ArgumentError("permutation image is not a bijection");
      hit[a] = true;
    }
  }

  static Permutation identity(int k) {
    std::vector<int> img(k);
    std::iota(img.begin(), img.end(), 0);
    return Permutation(std::move(img));
  }

  /// Transposition (a b) on k atoms.
  static Permutation swap(int k, int a, int b) {
    auto p = identity(k);
    std::swap(p.image_[a], p.image_[b]);
    return p;
  }

  int size() const noexcept { return static_cast<int>(image_.size()); }
  int operator()(int a) const { return image_[a]; }
  std::span<const int> image() const noexcept { return image_; }

  Permutation inverse() const {
    std::vector<int> inv(image_.size());
    for (std::size_t a = 0; a < image_.size(); ++a) inv[image_[a]] = static_cast<int>(a);
    return Permutation(std::move(inv));
  }

  /// Composition (g * h)(a) = g(h(a)).
  friend Permutation operator*(const Permutation& g, const Permutation& h) {
    if (g.size() != h.size()) throw SizeError("composing permutations of different sizes");
    std::vector<int> img(h.image_.size());
    for (std::size_t a = 0; a < img.size(); ++a) img[a] = g.image_[h.image_[a]];
    return Permutation(std::move(img));
  }

  auto operator<=>(const Permutation&) const = default;

 private:
  std::vector<int> image_;
};

/// All k! permutations in lexicographic order of their image arrays.
inline std::vector<Permutation> all_permutations(int k) {
  std::vector<int> img(k);
  std::iota(img.begin(), img.end(), 0);
  std::vector<Permutation> out;
  do {
    out.emplace_back(img);
  } while (std::next_permutation(img.begin(), img.end()));
  return out;
}

/// A set partition of the atoms {0..k-1}, stored as its restricted growth string.
///
/// The RGS gives each atom the index of its block, with blocks numbered in
/// order of first appearance, so it is a canonical encoding: two partitions
/// are equal iff their RGS arrays are equal, and RGS lexicographic order is
/// the total order used everywhere for canonical representatives.
class SetPartition {
 public:
  SetPartition() = default;

  /// From arbitrary block labels per atom; labels are renumbered to RGS form.
  static SetPartition from_labels(std::span<const int> labels) {
    if (labels.empty() || labels.size() > kMaxAtoms)
      throw SizeError("partition size must be in 1.." + std::to_string(kMaxAtoms));
    SetPartition p;
    p.rgs_.resize(labels.size());
    std::vector<std::pair<int, std::uint8_t>> seen;
    for (std::size_t a = 0; a < labels.size(); ++a) {
      auto it = std::find_if(seen.begin(), seen.end(),
                             [&](const auto& e) { return e.first == labels[a]; });
      if (it == seen.end()) {
        seen.emplace_back(labels[a], static_cast<std::uint8_t>(seen.size()));
        p.rgs_[a] = seen.back().second;
      } else {
        p.rgs_[a] = it->second;
      }
    }
    p.blocks_ = static_cast<int>(seen.size());
    return p;
  }

  static SetPartition from_labels(std::initializer_list<int> labels) {
    return from_labels(std::span<const int>(labels.begin(), labels.size()));
  }

  /// From blocks; they must be disjoint, nonempty and cover {0..k-1}.
  static SetPartition from_blocks(int k, const std::vector<std::vector<int>>& blocks) {
    if (k < 1 || k > kMaxAtoms) throw SizeError("partition size out of range");
    std::vector<int> label(k, -1);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      if (blocks[b].empty()) throw ArgumentError("empty block");
      for (int a : blocks[b]) {
        if (a < 0 || a >= k) throw ArgumentError("atom index out of range");
        if (label[a] != -1) throw ArgumentError("blocks are not disjoint");
        label[a] = static_cast<int>(b);
      }
    }
    if (std::find(label.begin(), label.end(), -1) != label.end())
      throw ArgumentError("blocks do not cover all atoms");
    return from_labels(label);
  }

  /// Parse the text encoding, e.g. "0011" = {{0,1},{2,3}}. Digits then letters.
  static SetPartition from_rgs(std::string_view text) {
    std::vector<int> labels;
    labels.reserve(text.size());
    for (char c : text) {
      int v;
      if (c >= '0' && c <= '9') v = c - '0';
      else if (c >= 'a' && c <= 'z') v = 10 + (c - 'a');
      else throw ArgumentError(std::string("bad RGS character '") + c + "'");
      labels.push_back(v);
    }
    auto p = from_labels(labels);
    if (!std::equal(labels.begin(), labels.end(), p.rgs_.begin()))
      throw ArgumentError("not a restricted growth string: " + std::string(text));
    return p;
  }

  static SetPartition singletons(int k) {
    std::vector<int> l(k);
    std::iota(l.begin(), l.end(), 0);
    return from_labels(l);
  }

  static SetPartition single_block(int k) { return from_labels(std::vector<int>(k, 0)); }

  int k() const noexcept { return static_cast<int>(rgs_.size()); }
  int block_count() const noexcept { return blocks_; }
  int block_of(int atom) const { return rgs_[atom]; }
  std::span<const std::uint8_t> rgs() const noexcept { return rgs_; }

  std::vector<std::vector<int>> blocks() const {
    std::vector<std::vector<int>> out(blocks_);
    for (int a = 0; a < k(); ++a) out[rgs_[a]].push_back(a);
    return out;
  }

  std::string to_string() const {
    std::string s;
    for (auto b : rgs_) s.push_back(b < 10 ? static_cast<char>('0' + b) : static_cast<char>('a' + b - 10));
    return s;
  }

  bool is_singletons() const noexcept { return blocks_ == k(); }

  friend bool operator==(const SetPartition& a, const SetPartition& b) { return a.rgs_ == b.rgs_; }
  friend std::strong_ordering operator<=>(const SetPartition& a, const SetPartition& b) {
    if (a.rgs_.size() != b.rgs_.size()) return a.rgs_.size() <=> b.rgs_.size();
    return std::lexicographical_compare_three_way(a.rgs_.begin(), a.rgs_.end(), b.rgs_.begin(),
                                                  b.rgs_.end());
  }

 private:
  std::vector<std::uint8_t> rgs_;
  int blocks_ = 0;
};

namespace detail {
inline void require_same_k(int a, int b) {
  if (a != b) throw SizeError("partitions over different atom counts");
}
}  // namespace detail

/// All set partitions of {0..k-1} in lexicographic RGS order.
inline std::vector<SetPartition> enumerate_partitions(int k) {
  if (k < 1 || k > kMaxAtoms)
    throw SizeError("enumerate_partitions: k must be in 1.." + std::to_string(kMaxAtoms));
  std::vector<SetPartition> out;
  std::vector<int> a(k, 0);
  std::vector<int> maxpre(k, 0);  // max of a[0..i-1]
  // Iterative successor on restricted growth strings.
  while (true) {
    out.push_back(SetPartition::from_labels(a));
    int i = k - 1;
    while (i > 0 && a[i] > maxpre[i]) --i;
    if (i == 0) break;
    ++a[i];
    for (int j = i + 1; j < k; ++j) {
      a[j] = 0;
      maxpre[j] = std::max(maxpre[j - 1], a[j - 1]);
    }
  }
  return out;
}

inline SetPartition meet(const SetPartition& p, const SetPartition& q) {
  detail::require_same_k(p.k(), q.k());
  std::vector<int> l(p.k());
  for (int a = 0; a < p.k(); ++a) l[a] = p.block_of(a) * kMaxAtoms + q.block_of(a);
  return SetPartition::from_labels(l);
}

/// Meet of a nonempty list of partitions.
inline SetPartition meet_all(std::span<const SetPartition> ps) {
  if (ps.empty()) throw ArgumentError("meet of an empty list");
  SetPartition m = ps.front();
  for (std::size_t i = 1; i < ps.size(); ++i) m = meet(m, ps[i]);
  return m;
}

/// True iff every block of q is a union of blocks of p.
inline bool refines(const SetPartition& p, const SetPartition& q) {
  detail::require_same_k(p.k(), q.k());
  // p refines q iff atoms sharing a p-block always share a q-block.
  std::vector<int> qblock(p.block_count(), -1);
  for (int a = 0; a < p.k(); ++a) {
    int& b = qblock[p.block_of(a)];
    if (b == -1) b = q.block_of(a);
    else if (b != q.block_of(a)) return false;
  }
  return true;
}

/// pi(P) = { pi(B) : B in P }, re-canonicalized.
inline SetPartition apply_perm(const Permutation& perm, const SetPartition& p) {
  if (perm.size() != p.k()) throw SizeError("apply_perm: permutation and partition sizes differ");
  std::vector<int> l(p.k());
  for (int a = 0; a < p.k(); ++a) l[perm(a)] = p.block_of(a);
  return SetPartition::from_labels(l);
}

/// Sorted multiset of block sizes.
inline std::vector<int> block_sizes(const SetPartition& p) {
  std::vector<int> s(p.block_count(), 0);
  for (int a = 0; a < p.k(); ++a) ++s[p.block_of(a)];
  std::sort(s.begin(), s.end());
  return s;
}

}  // namespace entrocone
