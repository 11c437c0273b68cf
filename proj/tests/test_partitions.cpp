#include <gtest/gtest.h>

#include <random>
#include <set>

#include "entrocone/partitions.hpp"

using namespace entrocone;

namespace {

// Bell numbers from the Bell triangle, computed independently of the enumerator.
std::vector<long> bell_numbers(int upto) {
  std::vector<long> bell{1};
  std::vector<long> row{1};
  for (int i = 1; i <= upto; ++i) {
    std::vector<long> next{row.back()};
    for (long x : row) next.push_back(next.back() + x);
    bell.push_back(next.front());
    row = next;
  }
  return bell;
}

SetPartition random_partition(int k, std::mt19937_64& rng) {
  std::vector<int> labels(k);
  std::uniform_int_distribution<int> d(0, k - 1);
  for (auto& l : labels) l = d(rng);
  return SetPartition::from_labels(labels);
}

Permutation random_perm(int k, std::mt19937_64& rng) {
  std::vector<int> img(k);
  std::iota(img.begin(), img.end(), 0);
  std::shuffle(img.begin(), img.end(), rng);
  return Permutation(img);
}

}  // namespace

TEST(Partitions, BellNumbers) {
  auto bell = bell_numbers(8);
  EXPECT_EQ(bell, (std::vector<long>{1, 1, 2, 5, 15, 52, 203, 877, 4140}));
  for (int k = 1; k <= 8; ++k)
    EXPECT_EQ(static_cast<long>(enumerate_partitions(k).size()), bell[k]) << "k=" << k;
}

TEST(Partitions, SmallCounts) {
  EXPECT_EQ(enumerate_partitions(3).size(), 5u);
  EXPECT_EQ(enumerate_partitions(4).size(), 15u);
  auto one = enumerate_partitions(1);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].to_string(), "0");
}

TEST(Partitions, LexicographicAndDistinct) {
  for (int k = 1; k <= 6; ++k) {
    auto ps = enumerate_partitions(k);
    for (std::size_t i = 1; i < ps.size(); ++i) EXPECT_LT(ps[i - 1], ps[i]);
  }
}

TEST(Partitions, RangeErrors) {
  EXPECT_THROW(enumerate_partitions(0), SizeError);
  EXPECT_THROW(enumerate_partitions(13), SizeError);
  EXPECT_THROW(SetPartition::from_rgs("0102x"), ArgumentError);
  EXPECT_THROW(SetPartition::from_rgs("1"), ArgumentError);
  EXPECT_THROW(SetPartition::from_rgs("0020"), ArgumentError);
  EXPECT_THROW(SetPartition::from_blocks(3, {{0, 1}, {1, 2}}), ArgumentError);
  EXPECT_THROW(SetPartition::from_blocks(3, {{0, 1}}), ArgumentError);
  EXPECT_THROW(Permutation({0, 0, 1}), ArgumentError);
}

TEST(Partitions, RgsRoundTrip) {
  for (int k = 1; k <= 6; ++k)
    for (const auto& p : enumerate_partitions(k)) {
      EXPECT_EQ(SetPartition::from_rgs(p.to_string()), p);
      EXPECT_EQ(SetPartition::from_blocks(k, p.blocks()), p);
    }
  auto p = SetPartition::from_rgs("0011");
  EXPECT_EQ(p.blocks(), (std::vector<std::vector<int>>{{0, 1}, {2, 3}}));
}

TEST(Partitions, MeetExamples) {
  auto a = SetPartition::from_blocks(3, {{0, 1}, {2}});
  auto b = SetPartition::from_blocks(3, {{0, 2}, {1}});
  EXPECT_TRUE(meet(a, b).is_singletons());
  EXPECT_EQ(meet(a, a), a);
  EXPECT_EQ(meet(a, SetPartition::singletons(3)), SetPartition::singletons(3));
  EXPECT_THROW(meet(a, SetPartition::singletons(4)), SizeError);
  EXPECT_THROW(meet_all({}), ArgumentError);
}

TEST(Partitions, RefinesExamples) {
  auto top = SetPartition::single_block(3);
  auto mid = SetPartition::from_blocks(3, {{0, 1}, {2}});
  EXPECT_TRUE(refines(SetPartition::singletons(3), mid));
  EXPECT_FALSE(refines(top, mid));
  EXPECT_TRUE(refines(mid, top));
  EXPECT_THROW(refines(mid, SetPartition::singletons(2)), SizeError);
}

TEST(Partitions, MeetLatticeLawsExhaustiveK4) {
  auto ps = enumerate_partitions(4);
  for (const auto& p : ps)
    for (const auto& q : ps) {
      auto m = meet(p, q);
      EXPECT_EQ(m, meet(q, p));
      EXPECT_TRUE(refines(m, p));
      EXPECT_TRUE(refines(m, q));
      // m is the coarsest common refinement
      for (const auto& r : ps)
        if (refines(r, p) && refines(r, q)) EXPECT_TRUE(refines(r, m));
    }
  for (const auto& p : ps)
    for (const auto& q : ps)
      for (const auto& r : ps) EXPECT_EQ(meet(meet(p, q), r), meet(p, meet(q, r)));
}

// Oracle for refines: block-wise subset check on explicit blocks.
TEST(Partitions, RefinesMatchesBlockDefinition) {
  auto ps = enumerate_partitions(5);
  for (const auto& p : ps)
    for (const auto& q : ps) {
      bool expect = true;
      for (const auto& bp : p.blocks()) {
        bool inside = false;
        for (const auto& bq : q.blocks())
          if (std::includes(bq.begin(), bq.end(), bp.begin(), bp.end())) inside = true;
        expect = expect && inside;
      }
      EXPECT_EQ(refines(p, q), expect);
    }
}

TEST(Partitions, ApplyPermExamples) {
  auto p = SetPartition::from_blocks(3, {{0}, {1, 2}});
  EXPECT_EQ(apply_perm(Permutation::identity(3), p), p);
  EXPECT_EQ(apply_perm(Permutation::swap(3, 0, 1), p), SetPartition::from_blocks(3, {{1}, {0, 2}}));
  EXPECT_THROW(apply_perm(Permutation::identity(4), p), SizeError);
}

TEST(Partitions, ActionCompatibilityK4) {
  auto perms = all_permutations(4);
  EXPECT_EQ(perms.size(), 24u);
  for (const auto& p : enumerate_partitions(4))
    for (const auto& g : perms)
      for (const auto& h : perms) EXPECT_EQ(apply_perm(g, apply_perm(h, p)), apply_perm(g * h, p));
}

TEST(Partitions, ApplyPermPreservesBlockSizes) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    int k = 1 + trial % 9;
    auto p = random_partition(k, rng);
    auto g = random_perm(k, rng);
    EXPECT_EQ(block_sizes(apply_perm(g, p)), block_sizes(p));
    EXPECT_EQ(apply_perm(g.inverse(), apply_perm(g, p)), p);
  }
}
