#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "entrocone/geometry.hpp"
#include "entrocone/optimizer.hpp"
#include "oracles.hpp"

using namespace entrocone;

namespace {

EntropicVector random_pyramid_point(std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  EntropicVector h(4);
  for (auto& r : g34_rays()) h += e(rng) * r.ray.cast<double>();
  return h;
}

EntropicVector random_vector(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  EntropicVector h(4);
  for (Mask m = 1; m < 16; ++m) h[m] = g(rng);
  return h;
}

EntropicVector eq10_optimum_on_34() {
  auto r = minimize_score(entrocone::testing::eq10_support());
  auto [i, j] = most_violated_pair(r.vector);
  return permute_variables(r.vector, orientations_onto_34(i, j)[0]);
}

}  // namespace

TEST(Tight, Examples) {
  auto r0 = ray_r({}, 1).cast<double>();
  auto m = modular_component(r0);
  for (Mask w = 1; w < 16; ++w) EXPECT_EQ(m[w], 0.0);
  EXPECT_EQ(tight_component(r0), r0);

  EntropicVector bits(4);
  for (Mask w = 1; w < 16; ++w) bits[w] = popcount(w);
  auto t = tight_component(bits);
  for (Mask w = 1; w < 16; ++w) EXPECT_NEAR(t[w], 0.0, 1e-15);
}

TEST(Tight, IdempotentAndTight) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    auto d = entrocone::testing::random_distribution(rng, 4, 5);
    if (d.n() != 4) continue;
    auto ti = tight_component(entropic_vector(d));
    auto ti2 = tight_component(ti);
    for (Mask w = 1; w < 16; ++w) EXPECT_NEAR(ti2[w], ti[w], 1e-12);
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(ti[0xF] - ti[0xF & ~(1u << i)], 0.0, 1e-12);
  }
}

TEST(ProjectAB, KillsBothFunctionalsAndIsLinear) {
  std::mt19937_64 rng(4);
  auto f1 = [](const EntropicVector& h) { return h[0b0100] + h[0b1000] - h[0b1100]; };
  auto f2 = [](const EntropicVector& h) { return h[0b0111] + h[0b1011] - h[0b1100] - h[0b1111]; };
  for (int trial = 0; trial < 200; ++trial) {
    auto v = random_vector(rng), w = random_vector(rng);
    auto pv = project_AB(v);
    EXPECT_NEAR(f1(pv), 0.0, 1e-12);
    EXPECT_NEAR(f2(pv), 0.0, 1e-12);
    auto lhs = project_AB(2.5 * v + (-1.5) * w);
    auto rhs = 2.5 * pv + (-1.5) * project_AB(w);
    for (Mask m = 1; m < 16; ++m) EXPECT_NEAR(lhs[m], rhs[m], 1e-9);
    // fixed points
    auto again = project_AB(pv);
    for (Mask m = 1; m < 16; ++m) EXPECT_NEAR(again[m], pv[m], 1e-12);
  }
}

TEST(ProjectC, RayExamples) {
  auto f = project_point(ray_f(3, 4).cast<double>());
  ASSERT_FALSE(f.degenerate);
  EXPECT_NEAR(f.alpha, 1, 1e-15);
  EXPECT_NEAR(f.coords.x, 0, 1e-15);
  EXPECT_NEAR(f.coords.y, 0, 1e-15);
  EXPECT_NEAR(f.coords.z, 1, 1e-15);

  auto r3 = project_point(ray_r({3}, 1).cast<double>());
  ASSERT_FALSE(r3.degenerate);
  EXPECT_NEAR(r3.beta, 1, 1e-15);
  EXPECT_NEAR(r3.coords.x, 1, 1e-15);
  EXPECT_NEAR(r3.coords.y, 0, 1e-15);
  EXPECT_NEAR(r3.coords.z, 0, 1e-15);

  EXPECT_TRUE(project_point(ray_r({}, 1).cast<double>()).degenerate);
  EXPECT_TRUE(project_point(ray_r({}, 3).cast<double>()).degenerate);
  EXPECT_NEAR(project_point(ray_r({1}, 2).cast<double>()).gamma, 1, 1e-15);
  EXPECT_NEAR(project_point(ray_r({2, 4}, 1).cast<double>()).delta, 1, 1e-15);
}

TEST(ProjectC, LinearAndBarycentric) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    auto v = random_vector(rng), w = random_vector(rng);
    auto a = project_C(v).raw, b = project_C(w).raw, c = project_C(0.7 * v + 1.9 * w).raw;
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(c[i], 0.7 * a[i] + 1.9 * b[i], 1e-9);
    auto p = project_point(v);
    if (!p.degenerate) EXPECT_NEAR(p.alpha + p.beta + p.gamma + p.delta, 1.0, 1e-9);
  }
}

TEST(ProjectC, AlphaNonnegativeInPyramid) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 500; ++trial) {
    auto h = random_pyramid_point(rng);
    ASSERT_LE(ingleton(h, 2, 3), 1e-12);
    auto p = project_point(h);
    EXPECT_GE(p.raw[0], -1e-12);
    EXPECT_NEAR(p.raw[0], -4 * ingleton(h, 2, 3), 1e-9);
    ASSERT_FALSE(p.degenerate);
    EXPECT_GE(p.alpha, -1e-12);
  }
}

TEST(ProjectC, CoordsCsv) {
  std::ostringstream os;
  write_coords_csv(os, {{0.5, 0.25, 1}}, {"a"});
  EXPECT_EQ(os.str(), "x,y,z,source_id\n0.5,0.25,1,a\n");
}

TEST(Lp, AgreesWithClosedFormSimplexTest) {
  // hull of the unit vectors e_1..e_14 and a point p: w is inside iff
  // w_i >= (w_0 / p_0) p_i for all i >= 1
  std::mt19937_64 rng(8);
  auto p = entrocone::testing::random_simplex(rng, 15);
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(15, 15);
  for (int k = 1; k < 15; ++k) G(k, k - 1) = 1;
  for (int k = 0; k < 15; ++k) G(k, 14) = p[k];
  for (int t = 0; t < 3000; ++t) {
    auto w = entrocone::testing::random_simplex(rng, 15);
    Eigen::VectorXd wv = Eigen::Map<Eigen::VectorXd>(w.data(), 15);
    bool oracle = true;
    for (int k = 1; k < 15; ++k) oracle = oracle && w[k] >= w[0] / p[0] * p[k];
    EXPECT_EQ(lp_feasible(G, wv).feasible, oracle);
  }
}

TEST(Lp, ConvexHullBasics) {
  Eigen::MatrixXd G(2, 3);
  G << 0, 1, 0, 0, 0, 1;
  EXPECT_TRUE(in_convex_hull(G, Eigen::Vector2d(0.2, 0.3)));
  EXPECT_TRUE(in_convex_hull(G, Eigen::Vector2d(0.5, 0.5)));
  EXPECT_FALSE(in_convex_hull(G, Eigen::Vector2d(0.6, 0.5)));
  EXPECT_FALSE(in_convex_hull(G, Eigen::Vector2d(-0.1, 0.5)));
  auto r = lp_feasible(G, Eigen::Vector2d(0.5, -0.5));
  EXPECT_FALSE(r.feasible);
  EXPECT_THROW(lp_feasible(G, Eigen::Vector3d(1, 1, 1)), SizeError);
}

TEST(Volume, FrameIsASimplex) {
  PyramidFrame f;
  EXPECT_EQ(f.rank(), 15);
  auto w = f.barycentric(ray_f(3, 4).cast<double>());
  EXPECT_NEAR(w(0), 1, 1e-12);
  EXPECT_NEAR(w.sum(), 1, 1e-12);
  EXPECT_THROW(f.barycentric(EntropicVector(4)), ArgumentError);
}

TEST(Volume, TrivialGeneratorSets) {
  auto gens = facet_generators();
  EXPECT_EQ(volume_fraction(gens, 2000, 1).fraction, 0.0);
  gens.push_back(ray_f(3, 4).cast<double>());
  auto all = volume_fraction(gens, 2000, 1);
  EXPECT_EQ(all.fraction, 1.0);
  EXPECT_EQ(all.stderr_, 0.0);
}

TEST(Volume, OptimumPointMatchesBarycentricWeight) {
  // The hull of the facet rays and one point is a simplex, so its share is
  // the point's weight on f_34.
  auto pt = eq10_optimum_on_34();
  double exact = PyramidFrame().barycentric(pt)(0);
  EXPECT_NEAR(exact, 4 * 0.0893733, 1e-5);
  auto gens = facet_generators();
  gens.push_back(pt);
  auto v = volume_fraction(gens, 20000, 11);
  EXPECT_NEAR(v.fraction, exact, 4 * v.stderr_);
  EXPECT_NEAR(v.stderr_, std::sqrt(v.fraction * (1 - v.fraction) / 20000), 1e-15);
}

TEST(Volume, MonotoneInGenerators) {
  auto pt = eq10_optimum_on_34();
  auto gens = facet_generators();
  gens.push_back(pt);
  auto small = volume_fraction(gens, 5000, 2);
  auto harvested = harvest(violating_census(4).violating, 10);
  for (auto& h : harvested) gens.push_back(h.h);
  auto big = volume_fraction(gens, 5000, 2);
  EXPECT_GE(big.fraction, small.fraction - 2 * small.stderr_);
}

TEST(Volume, DeterministicAcrossThreads) {
  auto gens = facet_generators();
  gens.push_back(eq10_optimum_on_34());
  EXPECT_EQ(volume_fraction(gens, 3000, 9, 1).fraction, volume_fraction(gens, 3000, 9, 3).fraction);
}

TEST(Hull, Tetrahedron) {
  auto h = hull3({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0, 0, 1}, {0.1, 0.1, 0.1}});
  EXPECT_EQ(h.dimension, 3);
  EXPECT_EQ(h.points.size(), 5u);
  EXPECT_EQ(h.faces.size(), 4u);
}

TEST(Hull, LowerDimensional) {
  EXPECT_EQ(hull3({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}}).dimension, 2);
  EXPECT_EQ(hull3({{0, 0, 0}, {1, 1, 1}, {2, 2, 2}}).dimension, 1);
  EXPECT_EQ(hull3({{1, 1, 1}, {1, 1, 1}}).dimension, 0);
  EXPECT_TRUE(hull3({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}}).faces.empty());
}

TEST(Hull, RandomPointsEulerAndContainment) {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> g;
  std::vector<Coords3> pts;
  for (int i = 0; i < 200; ++i) pts.push_back({g(rng), g(rng), g(rng)});
  auto h = hull3(pts);
  std::set<int> verts;
  for (auto& f : h.faces) verts.insert(f.begin(), f.end());
  // triangulated sphere: F = 2V - 4
  EXPECT_EQ(h.faces.size(), 2 * verts.size() - 4);
  for (auto& f : h.faces) {
    Eigen::Vector3d a(h.points[f[0]].x, h.points[f[0]].y, h.points[f[0]].z);
    Eigen::Vector3d b(h.points[f[1]].x, h.points[f[1]].y, h.points[f[1]].z);
    Eigen::Vector3d c(h.points[f[2]].x, h.points[f[2]].y, h.points[f[2]].z);
    Eigen::Vector3d n = (b - a).cross(c - a);
    for (auto& p : h.points) EXPECT_LE(n.dot(Eigen::Vector3d(p.x, p.y, p.z) - a), 1e-9);
  }
  // hull of a subset sits inside the hull of the whole
  std::vector<Coords3> part(pts.begin(), pts.begin() + 50);
  EXPECT_TRUE(hull_contains(h, hull3(part).points));
  EXPECT_FALSE(hull_contains(hull3(part), pts));
}

TEST(Hull, SliceOfTetrahedron) {
  auto h = hull3({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  auto poly = hull_slice(h, 0.5);
  ASSERT_EQ(poly.size(), 3u);
  double area = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    auto& p = poly[i];
    auto& q = poly[(i + 1) % poly.size()];
    area += p.x * q.y - q.x * p.y;
  }
  EXPECT_NEAR(area / 2, 0.125, 1e-12);  // counterclockwise, legs of 1/2
  EXPECT_TRUE(hull_slice(h, 2.0).empty());
  std::ostringstream os;
  write_contours_csv(os, h, 3);
  EXPECT_EQ(os.str().substr(0, 15), "level,seq,x,y\n0");
}
