#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "entropy.hpp"
#include "lp.hpp"
#include "parallel.hpp"
#include "rays.hpp"

namespace entrocone {

/// h^m(W) = sum over i in W of h(N) - h(N \ i).
inline EntropicVector modular_component(const EntropicVector& v) {
  const int n = v.n();
  const Mask full = v.full();
  EntropicVector m(n);
  for (Mask w = 1; w <= full; ++w)
    for (int i = 0; i < n; ++i)
      if (w & (1u << i)) m[w] += v[full] - v[full & ~(1u << i)];
  return m;
}

inline EntropicVector tight_component(const EntropicVector& v) { return v - modular_component(v); }

namespace detail {
inline double at(const EntropicVector& h, std::initializer_list<int> labels) { return h[mask_1based(labels, 4)]; }
}  // namespace detail

/// Pushes a tight vector onto I(3;4) = 0 and I(1;2|34) = 0.
inline EntropicVector project_AB(const EntropicVector& ti) {
  using detail::at;
  if (ti.n() != 4) throw SizeError("project_AB needs 4 variables");
  const double a = at(ti, {3}) + at(ti, {4}) - at(ti, {3, 4});
  const double b = at(ti, {1, 2, 3}) + at(ti, {1, 2, 4}) - at(ti, {3, 4}) - at(ti, {1, 2, 3, 4});
  auto d1 = (ray_r({3}, 1) - ray_r({}, 1)).cast<double>();
  auto d2 = (ray_r({1}, 2) - ray_r({}, 3)).cast<double>();
  return ti + a * d1 + b * d2;
}

struct Coords3 {
  double x = 0, y = 0, z = 0;
};

struct ProjectionC {
  double alpha = 0, beta = 0, gamma = 0, delta = 0;  // normalized to sum 1
  std::array<double, 4> raw{};  // alpha, beta, gamma, delta before normalization
  double raw_sum = 0;
  bool degenerate = false;
  Coords3 coords;
};

/// The four barycentric coefficients over alpha = f34/4, beta = (r^3_1 + r^4_1)/2,
/// gamma = (r^1_2 + r^2_2)/4, delta = (r^13_1 + r^14_1 + r^23_1 + r^24_1)/4.
/// The coefficients are evaluated on the tight vector, so the argument is h^ti.
inline ProjectionC project_C(const EntropicVector& ti, double degenerate_tol = 1e-9) {
  using detail::at;
  if (ti.n() != 4) throw SizeError("project_C needs 4 variables");
  const double f = -ingleton(ti, 2, 3);
  const double b = 0.5 * (at(ti, {1, 3}) + at(ti, {2, 3}) - at(ti, {3}) - at(ti, {1, 2, 3}) + at(ti, {1, 4}) +
                          at(ti, {2, 4}) - at(ti, {4}) - at(ti, {1, 2, 4}));
  const double c = 0.5 * (at(ti, {1, 3}) + at(ti, {1, 4}) - at(ti, {1}) - at(ti, {1, 3, 4}) + at(ti, {2, 3}) +
                          at(ti, {2, 4}) - at(ti, {2}) - at(ti, {2, 3, 4}));
  const double d = 0.25 * (4 * at(ti, {1, 2}) + at(ti, {1, 4}) + at(ti, {1, 3}) + at(ti, {2, 4}) + at(ti, {2, 3}) -
                           2 * at(ti, {1}) - 2 * at(ti, {2}) - 2 * at(ti, {1, 2, 4}) - 2 * at(ti, {1, 2, 3}));
  ProjectionC p;
  p.raw = {4 * f + 0.0, 2 * b + 0.0, 4 * c + 0.0, 4 * d + 0.0};
  const auto& raw = p.raw;
  p.raw_sum = raw[0] + raw[1] + raw[2] + raw[3];
  if (!(std::abs(p.raw_sum) >= degenerate_tol)) {
    p.degenerate = true;
    return p;
  }
  p.alpha = raw[0] / p.raw_sum;
  p.beta = raw[1] / p.raw_sum;
  p.gamma = raw[2] / p.raw_sum;
  p.delta = raw[3] / p.raw_sum;
  p.coords = {p.beta + p.delta, p.gamma + p.delta, p.alpha};
  return p;
}

/// Full pipeline from an arbitrary vector: tight component, then the C map.
inline ProjectionC project_point(const EntropicVector& h) { return project_C(tight_component(h)); }

inline void write_coords_csv(std::ostream& os, const std::vector<Coords3>& pts, const std::vector<std::string>& ids) {
  os << "x,y,z,source_id\n";
  char buf[128];
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,", pts[i].x, pts[i].y, pts[i].z);
    os << buf << (i < ids.size() ? ids[i] : std::to_string(i)) << "\n";
  }
}

// ---- volume inside the pyramid ----

struct VolumeEstimate {
  double fraction = 0;
  std::size_t samples = 0;
  double stderr_ = 0;
  std::string generator_set;
};

/// Barycentric coordinates over the 15 pyramid rays, each scaled to h_1234 = 1.
/// Index 0 is f_34, then the 14 facet rays in facet_rays() order.
class PyramidFrame {
 public:
  PyramidFrame() {
    rays_.push_back(ray_f(3, 4).cast<double>());
    for (auto& r : facet_rays()) rays_.push_back(r.ray.cast<double>());
    for (int j = 0; j < 15; ++j) {
      double hn = rays_[j][0xF];
      for (Mask m = 1; m < 16; ++m) M_(m - 1, j) = rays_[j][m] / hn;
    }
    lu_.compute(M_);
  }

  int rank() const { return static_cast<int>(lu_.rank()); }
  const Eigen::Matrix<double, 15, 15>& normalized_rays() const { return M_; }

  /// Weights of h / h_1234 on the normalized rays; they sum to 1.
  Eigen::Matrix<double, 15, 1> barycentric(const EntropicVector& h) const {
    if (!(h[0xF] > 0)) throw ArgumentError("generator must have positive joint entropy");
    Eigen::Matrix<double, 15, 1> y;
    for (Mask m = 1; m < 16; ++m) y(m - 1) = h[m] / h[0xF];
    return lu_.solve(y);
  }

 private:
  std::vector<EntropicVector> rays_;
  Eigen::Matrix<double, 15, 15> M_;
  Eigen::FullPivLU<Eigen::Matrix<double, 15, 15>> lu_;
};

/// Fraction of the pyramid cross-section h_1234 = 1 covered by the convex
/// hull of the generators' cross-section points. Uniform samples come from
/// Dirichlet(1) weights on the 15 normalized rays.
inline VolumeEstimate volume_fraction(const std::vector<EntropicVector>& generators, std::size_t samples,
                                      std::uint64_t seed, int threads = 1, std::string generator_set = "custom",
                                      double tol = 1e-8) {
  PyramidFrame frame;
  Eigen::MatrixXd G(15, static_cast<Eigen::Index>(generators.size()));
  for (std::size_t j = 0; j < generators.size(); ++j) G.col(static_cast<Eigen::Index>(j)) = frame.barycentric(generators[j]);
  // weights sum to 1 for every column, so that row of the hull test is implied
  const std::size_t chunk = 256;
  const std::size_t chunks = (samples + chunk - 1) / chunk;
  std::vector<std::size_t> hits(chunks, 0);
  parallel_for(chunks, threads, [&](std::size_t c) {
    std::mt19937_64 rng(derive_seed(seed, c));
    std::exponential_distribution<double> e(1.0);
    Eigen::VectorXd w(15);
    for (std::size_t s = c * chunk; s < std::min(samples, (c + 1) * chunk); ++s) {
      double sum = 0;
      for (int i = 0; i < 15; ++i) sum += (w(i) = e(rng));
      w /= sum;
      if (lp_feasible(G, w, tol).feasible) ++hits[c];
    }
  });
  VolumeEstimate v;
  std::size_t total = 0;
  for (auto h : hits) total += h;
  v.samples = samples;
  v.fraction = samples ? static_cast<double>(total) / static_cast<double>(samples) : 0.0;
  v.stderr_ = samples ? std::sqrt(v.fraction * (1 - v.fraction) / static_cast<double>(samples)) : 0.0;
  v.generator_set = std::move(generator_set);
  return v;
}

/// The 14 facet rays, the set every inner bound is measured against.
inline std::vector<EntropicVector> facet_generators() {
  std::vector<EntropicVector> g;
  for (auto& r : facet_rays()) g.push_back(r.ray.cast<double>());
  return g;
}

// ---- 3-D hull ----

struct Hull3 {
  std::vector<Coords3> points;          // deduplicated input
  std::vector<std::array<int, 3>> faces;  // outward orientation
  int dimension = 3;                    // 0..3; below 3 the faces are empty
};

namespace detail {
inline Eigen::Vector3d vec(const Coords3& c) { return {c.x, c.y, c.z}; }
}  // namespace detail

/// Incremental convex hull. Points closer than dedupe_tol are merged first.
inline Hull3 hull3(const std::vector<Coords3>& input, double dedupe_tol = 1e-9) {
  using detail::vec;
  Hull3 h;
  for (const auto& p : input) {
    bool dup = false;
    for (const auto& q : h.points) dup = dup || (vec(p) - vec(q)).norm() <= dedupe_tol;
    if (!dup) h.points.push_back(p);
  }
  const int n = static_cast<int>(h.points.size());
  std::vector<Eigen::Vector3d> P(n);
  for (int i = 0; i < n; ++i) P[i] = vec(h.points[i]);
  double scale = 0;
  for (auto& p : P) scale = std::max(scale, p.cwiseAbs().maxCoeff());
  const double eps = 1e-10 * std::max(1.0, scale);

  // affinely independent seed: farthest-point picks
  if (n == 0) {
    h.dimension = -1;
    return h;
  }
  int i0 = 0, i1 = -1, i2 = -1, i3 = -1;
  double best = eps;
  for (int i = 0; i < n; ++i)
    if ((P[i] - P[i0]).norm() > best) best = (P[i] - P[i0]).norm(), i1 = i;
  if (i1 < 0) {
    h.dimension = 0;
    return h;
  }
  best = eps;
  for (int i = 0; i < n; ++i) {
    double a = (P[i1] - P[i0]).cross(P[i] - P[i0]).norm();
    if (a > best) best = a, i2 = i;
  }
  if (i2 < 0) {
    h.dimension = 1;
    return h;
  }
  Eigen::Vector3d nrm = (P[i1] - P[i0]).cross(P[i2] - P[i0]);
  best = eps * nrm.norm();
  for (int i = 0; i < n; ++i) {
    double d = std::abs(nrm.dot(P[i] - P[i0]));
    if (d > best) best = d, i3 = i;
  }
  if (i3 < 0) {
    h.dimension = 2;
    return h;
  }

  std::vector<std::array<int, 3>> faces;
  auto outward = [&](std::array<int, 3> f, const Eigen::Vector3d& inside) {
    Eigen::Vector3d nn = (P[f[1]] - P[f[0]]).cross(P[f[2]] - P[f[0]]);
    if (nn.dot(inside - P[f[0]]) > 0) std::swap(f[1], f[2]);
    return f;
  };
  const Eigen::Vector3d centroid = (P[i0] + P[i1] + P[i2] + P[i3]) / 4.0;
  faces.push_back(outward({i0, i1, i2}, centroid));
  faces.push_back(outward({i0, i1, i3}, centroid));
  faces.push_back(outward({i0, i2, i3}, centroid));
  faces.push_back(outward({i1, i2, i3}, centroid));

  auto visible = [&](const std::array<int, 3>& f, const Eigen::Vector3d& p) {
    Eigen::Vector3d nn = (P[f[1]] - P[f[0]]).cross(P[f[2]] - P[f[0]]);
    return nn.dot(p - P[f[0]]) > eps * nn.norm();
  };
  for (int i = 0; i < n; ++i) {
    if (i == i0 || i == i1 || i == i2 || i == i3) continue;
    std::vector<char> vis(faces.size());
    bool any = false;
    for (std::size_t f = 0; f < faces.size(); ++f) any |= (vis[f] = visible(faces[f], P[i]));
    if (!any) continue;
    // horizon edges: directed edges of visible faces whose reverse is not visible
    std::map<std::pair<int, int>, int> edges;
    for (std::size_t f = 0; f < faces.size(); ++f) {
      if (!vis[f]) continue;
      for (int e = 0; e < 3; ++e) edges[{faces[f][e], faces[f][(e + 1) % 3]}] += 1;
    }
    std::vector<std::array<int, 3>> next;
    for (std::size_t f = 0; f < faces.size(); ++f)
      if (!vis[f]) next.push_back(faces[f]);
    for (auto& [e, cnt] : edges)
      if (!edges.count({e.second, e.first})) next.push_back({e.first, e.second, i});
    faces = std::move(next);
  }
  h.faces = std::move(faces);
  return h;
}

/// Closed polygon where the hull meets the plane z = level, vertices in
/// counterclockwise order seen from +z. Empty when the plane misses the hull.
inline std::vector<Coords3> hull_slice(const Hull3& h, double level) {
  std::vector<Eigen::Vector2d> pts;
  for (const auto& f : h.faces) {
    for (int e = 0; e < 3; ++e) {
      const Coords3& a = h.points[f[e]];
      const Coords3& b = h.points[f[(e + 1) % 3]];
      if ((a.z - level) * (b.z - level) > 0 || a.z == b.z) continue;
      double t = (level - a.z) / (b.z - a.z);
      pts.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
    }
  }
  if (pts.empty()) return {};
  // 2-D hull of the crossing points (monotone chain)
  std::sort(pts.begin(), pts.end(), [](auto& a, auto& b) { return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y()); });
  auto cross = [](const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return (a - o).x() * (b - o).y() - (a - o).y() * (b - o).x();
  };
  std::vector<Eigen::Vector2d> chain(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(chain[k - 2], chain[k - 1], pts[i]) <= 1e-15) --k;
    chain[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(chain[k - 2], chain[k - 1], pts[i]) <= 1e-15) --k;
    chain[k++] = pts[i];
  }
  chain.resize(k > 1 ? k - 1 : k);
  std::vector<Coords3> out;
  for (auto& p : chain) out.push_back({p.x(), p.y(), level});
  return out;
}

/// Contour polylines at evenly spaced z levels: columns level,seq,x,y.
inline void write_contours_csv(std::ostream& os, const Hull3& h, int levels) {
  os << "level,seq,x,y\n";
  if (h.faces.empty() || levels <= 0) return;
  double zmin = h.points[0].z, zmax = zmin;
  for (auto& p : h.points) zmin = std::min(zmin, p.z), zmax = std::max(zmax, p.z);
  char buf[128];
  for (int l = 1; l <= levels; ++l) {
    double z = zmin + (zmax - zmin) * l / (levels + 1);
    auto poly = hull_slice(h, z);
    for (std::size_t s = 0; s <= poly.size() && !poly.empty(); ++s) {
      const auto& p = poly[s % poly.size()];
      std::snprintf(buf, sizeof buf, "%.17g,%zu,%.17g,%.17g\n", z, s, p.x, p.y);
      os << buf;
    }
  }
}

/// Every vertex of `inner` lies in the convex hull of `outer`'s points.
inline bool hull_contains(const Hull3& outer, const std::vector<Coords3>& inner, double tol = 1e-8) {
  Eigen::MatrixXd G(3, static_cast<Eigen::Index>(outer.points.size()));
  for (std::size_t j = 0; j < outer.points.size(); ++j) G.col(static_cast<Eigen::Index>(j)) = detail::vec(outer.points[j]);
  for (auto& p : inner)
    if (!in_convex_hull(G, detail::vec(p), tol)) return false;
  return true;
}

}  // namespace entrocone
