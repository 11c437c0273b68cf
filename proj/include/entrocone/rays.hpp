#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include "entropy.hpp"

namespace entrocone {

// Ray constructors take 1-based variable labels so names read like r^{13}_1.

namespace detail {
inline Mask mask_1based(std::initializer_list<int> labels, int n) {
  Mask m = 0;
  for (int v : labels) {
    if (v < 1 || v > n) throw ArgumentError("variable label out of range: " + std::to_string(v));
    m |= 1u << (v - 1);
  }
  return m;
}
}  // namespace detail

/// r^K_t(W) = min(t, |W \ K|).
inline RayVector ray_r(std::initializer_list<int> K, int t, int n = 4) {
  Mask k = detail::mask_1based(K, n);
  if (t < 0 || t > n - popcount(k)) throw ArgumentError("ray_r: t must be in 0..n-|K|");
  RayVector r(n);
  for (Mask w = 1; w < (1u << n); ++w) r[w] = std::min(t, popcount(w & ~k));
  return r;
}

/// g2_i(W) = 2 if W = {i}, else min(2, |W|).
inline RayVector ray_g2(int i, int n = 4) {
  Mask im = detail::mask_1based({i}, n);
  RayVector r(n);
  for (Mask w = 1; w < (1u << n); ++w) r[w] = (w == im) ? 2 : std::min(2, popcount(w));
  return r;
}

/// g3_i(W) = |W| if i is not in W, else min(3, |W| + 1).
inline RayVector ray_g3(int i, int n = 4) {
  Mask im = detail::mask_1based({i}, n);
  RayVector r(n);
  for (Mask w = 1; w < (1u << n); ++w) r[w] = (w & im) ? std::min(3, popcount(w) + 1) : popcount(w);
  return r;
}

/// f_ij(W) = 3 on the pairs ik, jk, il, jl, kl; min(4, 2|W|) otherwise.
inline RayVector ray_f(int i, int j) {
  if (i == j) throw ArgumentError("ray_f needs distinct labels");
  Mask ij = detail::mask_1based({i, j}, 4);
  RayVector r(4);
  // the listed pairs are exactly the two-element sets other than ij
  for (Mask w = 1; w < 16u; ++w) r[w] = (popcount(w) == 2 && w != ij) ? 3 : std::min(4, 2 * popcount(w));
  return r;
}

struct NamedRay {
  std::string name;
  RayVector ray;
};

/// The 15 extreme rays of G^34_4, in this order:
/// f_34, r^123_1, r^124_1, r^134_1, r^234_1, r^0_1, r^0_3, r^3_1, r^4_1,
/// r^13_1, r^23_1, r^14_1, r^24_1, r^1_2, r^2_2.
inline std::vector<NamedRay> g34_rays() {
  return {
      {"f_34", ray_f(3, 4)},       {"r^123_1", ray_r({1, 2, 3}, 1)}, {"r^124_1", ray_r({1, 2, 4}, 1)},
      {"r^134_1", ray_r({1, 3, 4}, 1)}, {"r^234_1", ray_r({2, 3, 4}, 1)}, {"r^0_1", ray_r({}, 1)},
      {"r^0_3", ray_r({}, 3)},     {"r^3_1", ray_r({3}, 1)},         {"r^4_1", ray_r({4}, 1)},
      {"r^13_1", ray_r({1, 3}, 1)}, {"r^23_1", ray_r({2, 3}, 1)},    {"r^14_1", ray_r({1, 4}, 1)},
      {"r^24_1", ray_r({2, 4}, 1)}, {"r^1_2", ray_r({1}, 2)},        {"r^2_2", ray_r({2}, 2)},
  };
}

/// The 14 rays on the facet Ingleton_34 = 0, in the order used to index the
/// perturbation weights of random cost functions.
inline std::vector<NamedRay> facet_rays() {
  return {
      {"r^134_1", ray_r({1, 3, 4}, 1)}, {"r^234_1", ray_r({2, 3, 4}, 1)}, {"r^123_1", ray_r({1, 2, 3}, 1)},
      {"r^124_1", ray_r({1, 2, 4}, 1)}, {"r^0_1", ray_r({}, 1)},          {"r^0_3", ray_r({}, 3)},
      {"r^3_1", ray_r({3}, 1)},         {"r^4_1", ray_r({4}, 1)},         {"r^13_1", ray_r({1, 3}, 1)},
      {"r^14_1", ray_r({1, 4}, 1)},     {"r^23_1", ray_r({2, 3}, 1)},     {"r^24_1", ray_r({2, 4}, 1)},
      {"r^1_2", ray_r({1}, 2)},         {"r^2_2", ray_r({2}, 2)},
  };
}

/// Exact rank of a list of rays by fraction-exact Gaussian elimination.
inline int exact_rank(const std::vector<RayVector>& rays) {
  if (rays.empty()) return 0;
  std::vector<std::vector<Rational>> m;
  for (const auto& r : rays) m.push_back(r.nonempty());
  const std::size_t cols = m.front().size();
  int rank = 0;
  for (std::size_t c = 0; c < cols && rank < static_cast<int>(m.size()); ++c) {
    std::size_t piv = rank;
    while (piv < m.size() && m[piv][c].numerator() == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[rank]);
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (static_cast<int>(r) == rank || m[r][c].numerator() == 0) continue;
      Rational f = m[r][c] / m[rank][c];
      for (std::size_t j = c; j < cols; ++j) m[r][j] -= f * m[rank][j];
    }
    ++rank;
  }
  return rank;
}

}  // namespace entrocone
