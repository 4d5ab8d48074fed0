#include <gtest/gtest.h>

#include "support.hpp"

using namespace tourpow;
using median::Align;
using median::MedianOptions;
using tptest::c3;
using tptest::iota;

namespace {

/// Tries every (from, to) relocation; true if none lowers the backward count.
bool relocation_optimal(const Tournament& t, const Vertices& perm) {
  const auto base = tptest::backward_of(t, perm);
  for (std::size_t from = 0; from < perm.size(); ++from)
    for (std::size_t to = 0; to < perm.size(); ++to) {
      if (from == to) continue;
      Vertices p = perm;
      Vertex v = p[from];
      p.erase(p.begin() + static_cast<long>(from));
      p.insert(p.begin() + static_cast<long>(to), v);
      if (tptest::backward_of(t, p) < base) return false;
    }
  return true;
}

std::vector<int> sizes(const median::IntervalSplit& s) {
  std::vector<int> out;
  for (const auto& b : s.blocks) out.push_back(b.size());
  return out;
}

}  // namespace

TEST(MedianOrder, Examples) {
  auto tt = construct::transitive_tournament(10);
  auto o = median::median_order(tt);
  EXPECT_EQ(o.perm(), iota(10));
  EXPECT_EQ(o.backward(), 0);
  auto c = median::median_order(c3());
  EXPECT_EQ(c.backward(), 1);
  EXPECT_EQ(median::median_order(c3(), {OrderingMode::exact}).backward(), 1);
}

TEST(MedianOrder, LocalMatchesExactOnSeedThree) {
  auto t = construct::random_tournament(10, 3);
  auto local = median::median_order(t, {OrderingMode::local, 3});
  auto exact = median::median_order(t, {OrderingMode::exact, 3});
  EXPECT_EQ(exact.backward(), oracle::exact_min_backward(t).count);
  EXPECT_EQ(local.forward(), exact.forward());
  EXPECT_EQ(exact.mode(), OrderingMode::exact);
}

TEST(MedianOrder, ExactModeOverBudgetIsInfeasible) {
  MedianOptions opt{OrderingMode::exact};
  opt.budget.max_n_exact_ordering = 8;
  EXPECT_THROW(median::median_order(construct::random_tournament(9, 0), opt), InfeasibleError);
}

TEST(MedianOrder, LocalIsRelocationOptimalAndHamiltonian) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto t = construct::random_tournament(12 + static_cast<int>(seed % 20), seed);
    auto o = median::median_order(t, {OrderingMode::local, seed});
    EXPECT_TRUE(relocation_optimal(t, o.perm())) << "seed " << seed;
    EXPECT_FALSE(median::find_improving_relocation(t, o).has_value());
    for (int i = 0; i + 1 < o.size(); ++i) EXPECT_TRUE(t.edge(o.at(i), o.at(i + 1)));
  }
}

TEST(MedianOrder, DeterministicPerSeed) {
  auto t = construct::random_tournament(40, 11);
  EXPECT_EQ(median::median_order(t, {OrderingMode::local, 5}).perm(),
            median::median_order(t, {OrderingMode::local, 5}).perm());
}

TEST(MedianOrder, PolishAndBlockMove) {
  auto t = construct::random_tournament(20, 2);
  Vertices rev = iota(20);
  std::reverse(rev.begin(), rev.end());
  auto p = median::polish(t, Ordering::from(t, rev));
  EXPECT_TRUE(relocation_optimal(t, p.perm()));
  auto ord = Ordering::identity(t);
  Bitset moved = Bitset::from(20, Vertices{3, 5});
  auto m = median::move_to_interval_end(t, ord, moved, 2, 8);
  EXPECT_EQ(m.slice(0, 10), (Vertices{0, 1, 2, 4, 6, 7, 3, 5, 8, 9}));
  EXPECT_EQ(m.backward(), tptest::backward_of(t, m.perm()));
}

TEST(SplitIntervals, Examples) {
  auto t = construct::transitive_tournament(10);
  auto ord = Ordering::identity(t);
  EXPECT_EQ(sizes(median::split_intervals(ord, 3, Align::remainder_first)), (std::vector<int>{1, 3, 3, 3}));
  EXPECT_EQ(sizes(median::split_intervals(ord, 3, Align::remainder_last)), (std::vector<int>{3, 3, 3, 1}));
  auto t9 = construct::transitive_tournament(9);
  EXPECT_EQ(sizes(median::split_intervals(Ordering::identity(t9), 3)), (std::vector<int>{3, 3, 3}));
  EXPECT_EQ(sizes(median::split_intervals(ord, 11)), (std::vector<int>{10}));
  EXPECT_THROW(median::split_intervals(ord, 0), InputError);
}

TEST(SplitIntervals, BlocksAreConsecutive) {
  auto t = construct::random_tournament(47, 1);
  auto s = median::split_intervals(median::median_order(t), 5);
  int pos = 0;
  for (const auto& b : s.blocks) {
    EXPECT_EQ(b.begin, pos);
    pos = b.end;
  }
  EXPECT_EQ(pos, 47);
  EXPECT_EQ(s.sub(2, 4).count(), 3);
  EXPECT_EQ(s.span(1, 2).size(), 10u);
  EXPECT_EQ(s.block_of_position(1), 0);
  EXPECT_EQ(s.block_of_position(2), 1);
}

TEST(CheckMedianDegrees, TransitivePasses) {
  auto t = construct::transitive_tournament(40);
  EXPECT_TRUE(median::check_median_degrees(t, median::split_intervals(Ordering::identity(t), 8)).ok);
}

TEST(CheckMedianDegrees, LocalMediansPass) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto t = construct::random_tournament(60, seed);
    auto s = median::split_intervals(median::median_order(t, {OrderingMode::local, seed}), 10);
    EXPECT_TRUE(median::check_median_degrees(t, s).ok) << "seed " << seed;
  }
}

TEST(CheckMedianDegrees, PerturbedOrderingFailsWithWitness) {
  auto t = construct::random_tournament(60, 4);
  auto ord = median::median_order(t);
  // the vertex with the most in-neighbours, moved to the front
  Vertex worst = ord.at(0);
  for (Vertex v = 0; v < 60; ++v)
    if (t.out_degree(v) < t.out_degree(worst)) worst = v;
  Vertices perm = ord.perm();
  perm.erase(std::find(perm.begin(), perm.end(), worst));
  perm.insert(perm.begin(), worst);
  auto bad = Ordering::from(t, perm);
  auto v = median::check_median_degrees(t, median::split_intervals(bad, 10));
  ASSERT_FALSE(v.ok);
  EXPECT_EQ(v.witness, (Vertices{worst}));
  // the witness really is short of (t-2)m/2 = 20 out-neighbours in the middle
  Bitset middle = to_bitset(t, bad.slice(10, 50));
  EXPECT_LT(t.degree_into(worst, middle, Direction::out), 20);
}

TEST(CheckMedianDegrees, UnequalBlocksRejected) {
  auto t = construct::transitive_tournament(10);
  EXPECT_THROW(median::check_median_degrees(t, median::split_intervals(Ordering::identity(t), 3)), InputError);
}
