#include <gtest/gtest.h>

#include "support.hpp"

using namespace tourpow;
using extremal::BackwardWitness;
using extremal::Chain;
using tptest::iota;

namespace {

/// A = 0..na-1 and B = na..na+nb-1; each A-B edge points into B with
/// probability p, inside each side a random tournament.
Tournament biased_pair(int na, int nb, double p, std::uint64_t seed) {
  Tournament t = construct::random_tournament(na + nb, seed);
  Rng rng(derive_seed(seed, 77));
  for (int a = 0; a < na; ++a)
    for (int b = na; b < na + nb; ++b) {
      if (rng.bernoulli(p)) {
        t.orient(a, b);
      } else {
        t.orient(b, a);
      }
    }
  return t;
}

int common_in(const Tournament& t, const Vertices& a, const Vertices& y) {
  int c = 0;
  for (Vertex v : a)
    if (std::all_of(y.begin(), y.end(), [&](Vertex w) { return t.edge(v, w); })) ++c;
  return c;
}

}  // namespace

TEST(GreedyTransitive, Examples) {
  auto tt = construct::transitive_tournament(9);
  EXPECT_EQ(extremal::greedy_transitive(tt, iota(9)), iota(9));
  EXPECT_EQ(extremal::greedy_transitive(tptest::c3(), iota(3)).size(), 2u);
  auto t = construct::random_tournament(64, 0);
  auto g = extremal::greedy_transitive(t, iota(64));
  EXPECT_GE(g.size(), 7u);
  EXPECT_TRUE(is_transitive_order(t, g));
}

TEST(GreedyTransitive, LogBoundOnSubsets) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const int n = 2 + static_cast<int>(seed % 63);
    auto t = construct::random_tournament(n + 5, seed);
    Vertices w = iota(n, 5);
    auto g = extremal::greedy_transitive(t, w);
    EXPECT_GE(static_cast<int>(g.size()), static_cast<int>(std::floor(std::log2(n))) + 1);
    EXPECT_TRUE(is_transitive_order(t, g));
    for (Vertex v : g) EXPECT_TRUE(v >= 5);
  }
}

TEST(HighDegreeSubset, Examples) {
  auto tt = construct::transitive_tournament(10);
  Vertices a = iota(4), b = iota(6, 4);
  EXPECT_EQ(extremal::high_degree_subset(tt, a, b, Direction::out, Rational(1)), a);
  EXPECT_TRUE(extremal::high_degree_subset(tt, b, a, Direction::out, Rational(1, 10)).empty());
}

TEST(HighDegreeSubset, CountingBound) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto t = biased_pair(40, 50, 0.6, seed);
    Vertices a = iota(40), b = iota(50, 40);
    auto h = extremal::high_degree_subset(t, a, b, Direction::out, Rational(1, 4));
    // direct count
    std::size_t expect = 0;
    for (Vertex v : a) {
      int d = 0;
      for (Vertex w : b) d += t.edge(v, w);
      if (4 * d >= 50) ++expect;
    }
    EXPECT_EQ(h.size(), expect);
    Rational beta = density(t, a, b);
    EXPECT_GE(Rational(static_cast<std::int64_t>(h.size())), (beta - Rational(1, 4)) * 40);
  }
}

TEST(KstSubset, DominatingPairKeepsAllOfB) {
  auto tt = construct::transitive_tournament(20);
  auto r = extremal::kst_subset(tt, iota(6), iota(14, 6), 2, Rational(1, 2), Direction::out);
  EXPECT_EQ(r.x.size(), 2u);
  EXPECT_EQ(r.common, iota(14, 6));
}

TEST(KstSubset, HalfSplitConstruction) {
  // a_i -> b iff bit i of b's index is clear: any two a's share |B|/4 = 256
  const int na = 4, nb = 1024;
  Tournament t(na + nb);
  for (int i = 0; i < na; ++i)
    for (int b = 0; b < nb; ++b) {
      if ((b >> i) & 1) {
        t.orient(na + b, i);
      } else {
        t.orient(i, na + b);
      }
    }
  auto r = extremal::kst_subset(t, iota(na), iota(nb, na), 2, Rational(1, 2), Direction::out);
  ASSERT_EQ(r.x.size(), 2u);
  int shared = 0;
  for (int b = 0; b < nb; ++b) shared += t.edge(r.x[0], na + b) && t.edge(r.x[1], na + b);
  EXPECT_EQ(shared, 256);
  EXPECT_EQ(static_cast<int>(r.common.size()), shared);
  EXPECT_GE(Rational(shared), rpow(Rational(1, 2), 8) * nb);
}

TEST(KstSubset, Preconditions) {
  auto tt = construct::transitive_tournament(20);
  EXPECT_THROW(extremal::kst_subset(tt, iota(3), iota(10, 10), 2, Rational(1, 2), Direction::out), DomainError);
  EXPECT_THROW(extremal::kst_subset(tt, iota(6), iota(10, 10), 2, Rational(3, 4), Direction::out), DomainError);
  // the in-direction: every a lacks in-neighbours in B
  EXPECT_THROW(extremal::kst_subset(tt, iota(6), iota(10, 10), 2, Rational(1, 2), Direction::in), DomainError);
}

TEST(Drc, DominatingTransitivePair) {
  auto tt = construct::transitive_tournament(30);
  Vertices a = iota(10), b = iota(20, 10);
  auto r = extremal::drc_transitive_pair(tt, a, b, 3, Rational(1, 2), 1);
  EXPECT_EQ(r.x, a);
  EXPECT_EQ(r.y.size(), 3u);
  EXPECT_TRUE(dominates(tt, r.x, r.y));
}

TEST(Drc, RandomDensePairSeedFive) {
  auto t = biased_pair(1024, 1024, 0.6, 5);
  Vertices a = iota(1024), b = iota(1024, 1024);
  ASSERT_GE(density(t, a, b), Rational(1, 2));
  auto r = extremal::drc_transitive_pair(t, a, b, 2, Rational(1, 2), 5);
  EXPECT_EQ(r.y.size(), 2u);
  EXPECT_TRUE(is_transitive_order(t, r.y));
  EXPECT_TRUE(dominates(t, r.x, r.y));
  EXPECT_EQ(static_cast<int>(r.x.size()), common_in(t, a, r.y));
  EXPECT_GE(r.x.size(), 1024u / 256u);
}

TEST(Drc, SingleVertexHasLargeInDegree) {
  auto t = biased_pair(200, 100, 0.55, 3);
  Vertices a = iota(200), b = iota(100, 200);
  auto r = extremal::drc_transitive_pair(t, a, b, 1, Rational(1, 2), 3);
  ASSERT_EQ(r.y.size(), 1u);
  int indeg = 0;
  for (Vertex v : a) indeg += t.edge(v, r.y[0]);
  EXPECT_EQ(static_cast<int>(r.x.size()), indeg);
  EXPECT_GE(Rational(indeg), rpow(Rational(1, 2), 4) * 200);
}

TEST(Drc, Preconditions) {
  auto tt = construct::transitive_tournament(30);
  EXPECT_THROW(extremal::drc_transitive_pair(tt, iota(10, 20), iota(10), 1, Rational(1, 2), 0), DomainError);
  extremal::DrcOptions strict;
  strict.mode = Mode::strict;
  EXPECT_THROW(extremal::drc_transitive_pair(tt, iota(10), iota(20, 10), 2, Rational(1, 2), 0, strict),
               InfeasibleError);
}

TEST(TransitivePair, Examples) {
  auto tt = construct::transitive_tournament(16);
  auto p = extremal::transitive_pair(tt, iota(8), iota(8, 8), 3, Rational(1, 2), 0);
  EXPECT_EQ(p.x, iota(3));
  EXPECT_EQ(p.y, iota(3, 8));
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto t = biased_pair(300, 300, 0.6, seed);
    auto q = extremal::transitive_pair(t, iota(300), iota(300, 300), 2, Rational(1, 2), seed);
    EXPECT_TRUE(dominates(t, q.x, q.y));
    EXPECT_TRUE(is_transitive_order(t, q.x));
    EXPECT_TRUE(is_transitive_order(t, q.y));
  }
}

TEST(TransitivePair, TooSmallForGreedyStep) {
  // X can hold at most one vertex: a single A vertex beats B
  Tournament t(6);
  for (int b = 1; b < 6; ++b) t.orient(0, b);
  EXPECT_THROW(extremal::transitive_pair(t, Vertices{0}, iota(5, 1), 2, Rational(1, 2), 0), NotFoundError);
}

TEST(TransitiveChain, SingleBlock) {
  auto t = construct::random_tournament(16, 2);
  auto out = extremal::transitive_chain(t, {iota(16)}, 3, 0);
  ASSERT_TRUE(std::holds_alternative<Chain>(out));
  EXPECT_TRUE(is_transitive_order(t, std::get<Chain>(out).sets[0]));
}

TEST(TransitiveChain, ForwardBlowupGivesPrefixes) {
  std::vector<int> sizes(5, 6);
  auto b = construct::blowup(sizes, {construct::InnerKind::transitive}, 0);
  auto out = extremal::transitive_chain(b.tournament, b.blocks, 2, 0);
  ASSERT_TRUE(std::holds_alternative<Chain>(out));
  const auto& c = std::get<Chain>(out);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(c.sets[i], (Vertices{b.blocks[i][0], b.blocks[i][1]}));
}

TEST(TransitiveChain, ReversedBlowupGivesWitness) {
  std::vector<int> sizes(2, 6);
  auto b = construct::blowup(sizes, {construct::InnerKind::transitive}, 0);
  std::vector<Vertices> rev{b.blocks[1], b.blocks[0]};
  auto out = extremal::transitive_chain(b.tournament, rev, 2, 0);
  ASSERT_TRUE(std::holds_alternative<BackwardWitness>(out));
  const auto& w = std::get<BackwardWitness>(out);
  EXPECT_EQ(w.index, 0);
  EXPECT_TRUE(dominates(b.tournament, w.later, w.earlier));
  EXPECT_TRUE(is_transitive_order(b.tournament, w.later));
  EXPECT_TRUE(is_transitive_order(b.tournament, w.earlier));
}

TEST(TransitiveChain, RandomOutcomesAreValid) {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    auto t = construct::random_reversal(120, 0.2, seed);
    std::vector<Vertices> blocks;
    for (int i = 0; i < 6; ++i) blocks.push_back(iota(20, 20 * i));
    try {
      auto out = extremal::transitive_chain(t, blocks, 2, seed);
      if (auto* c = std::get_if<Chain>(&out)) {
        for (std::size_t i = 0; i + 1 < c->sets.size(); ++i) EXPECT_TRUE(dominates(t, c->sets[i], c->sets[i + 1]));
      } else {
        const auto& w = std::get<BackwardWitness>(out);
        EXPECT_TRUE(dominates(t, w.later, w.earlier));
      }
    } catch (const NotFoundError&) {
    }
  }
}

TEST(TransitiveChain, StrictSizesAreInfeasible) {
  auto t = construct::random_tournament(40, 0);
  EXPECT_THROW(extremal::transitive_chain(t, {iota(20), iota(20, 20)}, 1, 0, {Mode::strict}), InfeasibleError);
  EXPECT_THROW(extremal::transitive_chain(t, {iota(20), iota(20, 10)}, 1, 0), InputError);
}

TEST(Extremal, DeterministicPerSeed) {
  auto t = biased_pair(300, 300, 0.6, 9);
  auto a = extremal::transitive_pair(t, iota(300), iota(300, 300), 2, Rational(1, 2), 42);
  auto b = extremal::transitive_pair(t, iota(300), iota(300, 300), 2, Rational(1, 2), 42);
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.y, b.y);
}
