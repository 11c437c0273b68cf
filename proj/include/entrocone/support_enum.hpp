#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "partitions.hpp"

namespace entrocone {

/// A k-atom support for n variables: a set of n distinct set partitions of
/// the atoms, kept sorted in RGS order, whose meet is the singletons.
class Support {
 public:
  Support() = default;

  /// Sorts the partitions; throws unless they form a valid support.
  explicit Support(std::vector<SetPartition> parts) : parts_(std::move(parts)) {
    if (parts_.empty()) throw ArgumentError("support needs at least one variable");
    std::sort(parts_.begin(), parts_.end());
    for (const auto& p : parts_) detail::require_same_k(p.k(), parts_.front().k());
    if (std::adjacent_find(parts_.begin(), parts_.end()) != parts_.end())
      throw ArgumentError("support has a duplicated variable");
    if (!meet_all(parts_).is_singletons())
      throw ArgumentError("meet of the support's partitions is not the singletons");
  }

  /// From the atom rows of a support matrix (one row per atom, one column per
  /// variable). Repeated columns describe the same variable and are merged.
  static Support from_rows(const std::vector<std::vector<int>>& rows) {
    if (rows.empty()) throw ArgumentError("support matrix has no atoms");
    const std::size_t n = rows.front().size();
    std::vector<SetPartition> cols;
    for (std::size_t v = 0; v < n; ++v) {
      std::vector<int> labels;
      for (const auto& r : rows) {
        if (r.size() != n) throw ArgumentError("ragged support matrix");
        labels.push_back(r[v]);
      }
      cols.push_back(SetPartition::from_labels(labels));
    }
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    return Support(std::move(cols));
  }

  static Support from_rgs(const std::vector<std::string>& rgs) {
    std::vector<SetPartition> ps;
    for (const auto& s : rgs) ps.push_back(SetPartition::from_rgs(s));
    return Support(std::move(ps));
  }

  int k() const noexcept { return parts_.empty() ? 0 : parts_.front().k(); }
  int n() const noexcept { return static_cast<int>(parts_.size()); }
  const std::vector<SetPartition>& partitions() const noexcept { return parts_; }
  const SetPartition& operator[](int v) const { return parts_[v]; }

  std::vector<std::string> rgs() const {
    std::vector<std::string> out;
    for (const auto& p : parts_) out.push_back(p.to_string());
    return out;
  }

  friend bool operator==(const Support&, const Support&) = default;
  friend auto operator<=>(const Support& a, const Support& b) {
    if (a.k() != b.k()) return a.k() <=> b.k();
    return std::lexicographical_compare_three_way(a.parts_.begin(), a.parts_.end(),
                                                  b.parts_.begin(), b.parts_.end());
  }

 private:
  std::vector<SetPartition> parts_;
};

/// Distinct partitions, common k, singleton meet.
inline bool is_valid_support(const std::vector<SetPartition>& candidate) {
  if (candidate.empty()) throw ArgumentError("is_valid_support: empty candidate list");
  for (const auto& p : candidate) detail::require_same_k(p.k(), candidate.front().k());
  auto sorted = candidate;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
  return meet_all(sorted).is_singletons();
}

/// Image of a support under an atom relabeling; variable order follows RGS sorting.
inline Support apply_perm(const Permutation& perm, const Support& s) {
  std::vector<SetPartition> img;
  img.reserve(s.n());
  for (const auto& p : s.partitions()) img.push_back(apply_perm(perm, p));
  return Support(std::move(img));
}

/// Least element of the S_k-orbit of s, and a transporter g with g(s) == canonical.
inline std::pair<Support, Permutation> canonical_form(const Support& s) {
  const auto perms = all_permutations(s.k());
  std::vector<SetPartition> best;
  std::size_t best_g = 0;
  std::vector<SetPartition> img(s.n());
  for (std::size_t g = 0; g < perms.size(); ++g) {
    for (int v = 0; v < s.n(); ++v) img[v] = apply_perm(perms[g], s[v]);
    std::sort(img.begin(), img.end());
    if (best.empty() || img < best) {
      best = img;
      best_g = g;
    }
  }
  return {Support(std::move(best)), perms[best_g]};
}

struct OrbitRecord {
  Support canonical;
  std::uint64_t stabilizer_order = 0;
  std::uint64_t orbit_size = 0;
};

enum class Backend { brute, leiterspiel };

struct EnumOptions {
  bool long_run = false;
};

inline std::uint64_t factorial(int k) {
  std::uint64_t f = 1;
  for (int i = 2; i <= k; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

/// Partitions a variable may take: everything but the constant (single-block)
/// partition, except at k = 1 where the only partition is also the singletons.
inline std::vector<SetPartition> variable_partitions(int k) {
  auto all = enumerate_partitions(k);
  if (k == 1) return all;
  std::erase_if(all, [](const SetPartition& p) { return p.block_count() == 1; });
  return all;
}

namespace detail {

inline void check_capacity(int n, int k, Backend backend, const EnumOptions& opt) {
  if (n < 1 || k < 1) throw ArgumentError("enumerate_supports: n and k must be positive");
  if (backend == Backend::brute) {
    if (k <= 5) return;
    if (k == 6 && n <= 4 && opt.long_run) return;
    throw CapacityError("brute backend limit: k <= 5, or k = 6 with n <= 4 and long_run (got n=" +
                        std::to_string(n) + ", k=" + std::to_string(k) + ")");
  }
  if (k <= 5 || (k == 6 && n <= 3)) return;
  if (k <= 7 && n <= 6 && opt.long_run) return;
  throw CapacityError(
      "leiterspiel backend limit: k <= 5 or (k = 6, n <= 3); k <= 7 and n <= 6 with long_run (got n=" +
      std::to_string(n) + ", k=" + std::to_string(k) + ")");
}

// Brute force: every n-subset of variable partitions, filtered by the meet
// condition; orbits are found by generating each new orbit in full with
// apply_perm on partition objects, so this path shares nothing with the
// index tables used by the incremental backend.
inline std::vector<OrbitRecord> enumerate_brute(int n, int k) {
  const auto verts = variable_partitions(k);
  const auto perms = all_permutations(k);
  const int m = static_cast<int>(verts.size());
  std::vector<OrbitRecord> out;
  if (n > m) return out;
  std::set<std::vector<SetPartition>> seen;
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  std::vector<SetPartition> cand(n);
  while (true) {
    for (int i = 0; i < n; ++i) cand[i] = verts[idx[i]];
    if (!seen.contains(cand) && meet_all(cand).is_singletons()) {
      std::set<std::vector<SetPartition>> orbit;
      std::vector<SetPartition> img(n);
      for (const auto& g : perms) {
        for (int i = 0; i < n; ++i) img[i] = apply_perm(g, cand[i]);
        std::sort(img.begin(), img.end());
        orbit.insert(img);
      }
      OrbitRecord rec;
      rec.canonical = Support(*orbit.begin());
      rec.orbit_size = orbit.size();
      rec.stabilizer_order = perms.size() / orbit.size();
      out.push_back(std::move(rec));
      seen.merge(orbit);
    }
    int i = n - 1;
    while (i >= 0 && idx[i] == m - n + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < n; ++j) idx[j] = idx[j - 1] + 1;
  }
  std::sort(out.begin(), out.end(),
            [](const OrbitRecord& a, const OrbitRecord& b) { return a.canonical < b.canonical; });
  return out;
}

/// Orbit data on i-subsets of variable partitions, built level by level.
class Leiterspiel {
 public:
  explicit Leiterspiel(int k) : k_(k), verts_(variable_partitions(k)), perms_(all_permutations(k)) {
    const int m = static_cast<int>(verts_.size());
    std::map<SetPartition, int> index;
    for (int i = 0; i < m; ++i) index.emplace(verts_[i], i);
    act_.resize(perms_.size() * m);
    for (std::size_t g = 0; g < perms_.size(); ++g)
      for (int i = 0; i < m; ++i) act_[g * m + i] = static_cast<std::uint16_t>(index.at(apply_perm(perms_[g], verts_[i])));
  }

  struct Rep {
    std::vector<std::uint16_t> elems;     // sorted vertex indices, lexicographically least in orbit
    std::vector<std::uint32_t> stabilizer; // permutation ids fixing the set
  };

  /// Transversal of orbits on n-subsets whose meet is the singletons.
  std::vector<OrbitRecord> run(int n) {
    const int m = static_cast<int>(verts_.size());
    std::vector<OrbitRecord> out;
    if (n > m) return out;
    std::vector<Rep> level = first_level();
    for (int size = 2; size <= n; ++size) level = extend(level, size == n);
    for (const auto& r : level) {
      if (!meets_to_singletons(r.elems)) continue;
      std::vector<SetPartition> ps;
      for (auto e : r.elems) ps.push_back(verts_[e]);
      OrbitRecord rec;
      rec.canonical = Support(std::move(ps));
      rec.stabilizer_order = r.stabilizer.size();
      rec.orbit_size = perms_.size() / r.stabilizer.size();
      out.push_back(std::move(rec));
    }
    std::sort(out.begin(), out.end(),
              [](const OrbitRecord& a, const OrbitRecord& b) { return a.canonical < b.canonical; });
    return out;
  }

 private:
  std::uint16_t act(std::size_t g, std::uint16_t v) const { return act_[g * verts_.size() + v]; }

  bool meets_to_singletons(const std::vector<std::uint16_t>& elems) const {
    std::vector<std::uint64_t> keys(k_, 0);
    for (auto e : elems)
      for (int a = 0; a < k_; ++a) keys[a] = keys[a] * kMaxAtoms + verts_[e].block_of(a);
    std::sort(keys.begin(), keys.end());
    return std::adjacent_find(keys.begin(), keys.end()) == keys.end();
  }

  std::vector<Rep> first_level() const {
    const int m = static_cast<int>(verts_.size());
    std::vector<bool> done(m, false);
    std::vector<Rep> reps;
    for (int i = 0; i < m; ++i) {
      if (done[i]) continue;
      Rep r;
      r.elems = {static_cast<std::uint16_t>(i)};
      for (std::size_t g = 0; g < perms_.size(); ++g) {
        done[act(g, i)] = true;
        if (act(g, i) == i) r.stabilizer.push_back(static_cast<std::uint32_t>(g));
      }
      reps.push_back(std::move(r));
    }
    return reps;
  }

  static std::uint64_t encode(const std::vector<std::uint16_t>& s) {
    std::uint64_t key = 0;
    for (auto e : s) key = (key << 10) | e;  // vertex indices < 1024 for k <= 7
    return key;
  }

  // Least image of a set over all of S_k.
  std::vector<std::uint16_t> min_image(const std::vector<std::uint16_t>& s) const {
    const std::size_t t = s.size();
    std::vector<std::uint16_t> best(t, 0xffff), img(t);
    for (std::size_t g = 0; g < perms_.size(); ++g) {
      for (std::size_t i = 0; i < t; ++i) img[i] = act(g, s[i]);
      std::sort(img.begin(), img.end());
      if (img < best) best = img;
    }
    return best;
  }

  std::vector<Rep> extend(const std::vector<Rep>& prev, bool last) const {
    const int m = static_cast<int>(verts_.size());
    std::unordered_map<std::uint64_t, std::size_t> found;
    std::vector<Rep> next;
    std::vector<bool> covered(m);
    for (const auto& r : prev) {
      // One extension per orbit of the stabilizer on the remaining vertices.
      std::fill(covered.begin(), covered.end(), false);
      for (auto e : r.elems) covered[e] = true;
      for (int v = 0; v < m; ++v) {
        if (covered[v]) continue;
        for (auto g : r.stabilizer) covered[act(g, v)] = true;
        auto cand = r.elems;
        cand.insert(std::upper_bound(cand.begin(), cand.end(), v), static_cast<std::uint16_t>(v));
        if (last && !meets_to_singletons(cand)) continue;
        auto canon = min_image(cand);
        auto key = encode(canon);
        if (found.contains(key)) continue;
        found.emplace(key, next.size());
        Rep nr;
        nr.elems = std::move(canon);
        std::vector<std::uint16_t> img(nr.elems.size());
        for (std::size_t g = 0; g < perms_.size(); ++g) {
          for (std::size_t i = 0; i < img.size(); ++i) img[i] = act(g, nr.elems[i]);
          std::sort(img.begin(), img.end());
          if (img == nr.elems) nr.stabilizer.push_back(static_cast<std::uint32_t>(g));
        }
        next.push_back(std::move(nr));
      }
    }
    return next;
  }

  int k_;
  std::vector<SetPartition> verts_;
  std::vector<Permutation> perms_;
  std::vector<std::uint16_t> act_;
};

}  // namespace detail

/// One canonical representative per S_k-orbit of valid n-variable, k-atom supports.
inline std::vector<OrbitRecord> enumerate_supports(int n, int k, Backend backend,
                                                   const EnumOptions& opt = {}) {
  detail::check_capacity(n, k, backend, opt);
  if (backend == Backend::brute) return detail::enumerate_brute(n, k);
  return detail::Leiterspiel(k).run(n);
}

/// Canonical (k+1)-atom supports obtained by appending one atom to some
/// support in `base`, sorted. Deleting that atom gives back the base support.
inline std::vector<Support> one_atom_extensions(const std::vector<Support>& base) {
  std::set<Support> out;
  for (const auto& s : base) {
    const int k = s.k(), n = s.n();
    if (k + 1 > kMaxAtoms) throw CapacityError("one_atom_extensions: too many atoms");
    std::vector<int> choice(n, 0);
    while (true) {
      std::vector<SetPartition> cols;
      bool ok = true;
      for (int v = 0; v < n; ++v) {
        std::vector<int> labels(s[v].rgs().begin(), s[v].rgs().end());
        labels.push_back(choice[v]);
        cols.push_back(SetPartition::from_labels(labels));
        ok = ok && cols.back().block_count() >= 2;
      }
      if (ok && is_valid_support(cols)) out.insert(canonical_form(Support(std::move(cols))).first);
      int v = 0;
      while (v < n && ++choice[v] > s[v].block_count()) choice[v++] = 0;
      if (v == n) break;
    }
  }
  return {out.begin(), out.end()};
}

struct CensusCell {
  int n;
  int k;
  std::uint64_t count;
};

/// Support counts for n in [1, n_max] and k in [1, k_max].
inline std::vector<CensusCell> census(int n_max, int k_max, Backend backend = Backend::leiterspiel,
                                      const EnumOptions& opt = {}) {
  std::vector<CensusCell> out;
  for (int n = 1; n <= n_max; ++n)
    for (int k = 1; k <= k_max; ++k)
      out.push_back({n, k, enumerate_supports(n, k, backend, opt).size()});
  return out;
}

}  // namespace entrocone
