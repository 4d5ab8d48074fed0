#include <gtest/gtest.h>

#include "support.hpp"

using namespace tourpow;
using absorber::Absorber;
using tptest::iota;

namespace {

Absorber shifted(const Absorber& h, int by) {
  Absorber out = h;
  for (auto& s : out.S)
    for (auto& v : s) v += by;
  for (auto& v : out.Q) v += by;
  return out;
}

/// Transitive on n vertices except that the last block of size m beats the first.
Tournament wrapped_transitive(int n, int m) {
  Tournament t(n);
  for (int a = n - m; a < n; ++a)
    for (int b = 0; b < m; ++b) t.orient(a, b);
  return t;
}

bool covers_exactly(const Vertices& seq, Vertices want) {
  Vertices s = seq;
  std::sort(s.begin(), s.end());
  std::sort(want.begin(), want.end());
  return s == want;
}

}  // namespace

TEST(VerifyAbsorber, HandBuiltPasses) {
  for (int k = 1; k <= 2; ++k) {
    auto b = tptest::build_absorber(k, 2, 4);
    EXPECT_TRUE(absorber::verify_absorber(b.t, b.h).ok) << absorber::verify_absorber(b.t, b.h).detail;
    EXPECT_EQ(b.h.size(), static_cast<std::size_t>(5 * 2 * k + 2));
  }
}

TEST(VerifyAbsorber, BrokenClauses) {
  auto b = tptest::build_absorber(1, 2, 4);
  {
    Tournament t = b.t;
    for (Vertex x : b.h.S.back())
      for (Vertex y : b.h.S.front()) t.orient(y, x);
    EXPECT_EQ(absorber::verify_absorber(t, b.h).clause, "cycle-closure");
  }
  {
    Absorber h = b.h;
    h.r_prime = 3;
    EXPECT_EQ(absorber::verify_absorber(b.t, h).clause, "clause i");
  }
  {
    Absorber h = b.h;
    h.S[2] = h.S[1];
    EXPECT_EQ(absorber::verify_absorber(b.t, h).clause, "disjoint");
  }
  {
    Tournament t = b.t;
    t.orient(b.h.S[2][0], b.h.S[1][1]);
    EXPECT_EQ(absorber::verify_absorber(t, b.h).clause, "chain");
  }
  {
    Tournament t = b.t;
    t.orient(b.h.S[2][0], b.h.Q[0]);
    EXPECT_EQ(absorber::verify_absorber(t, b.h).clause, "q-link");
  }
  {
    Tournament t = b.t;
    t.orient(b.h.Q[1], b.h.S[0][0]);
    EXPECT_EQ(absorber::verify_absorber(t, b.h).clause, "absorbing-part");
  }
}

TEST(SpanPath, EveryPairOfEndSets) {
  // Q of size 5 with k = 1: every ordered pair of 2-subsets of Q
  auto b = tptest::build_absorber(1, 5, 7);
  const auto& q = b.h.Q;
  std::vector<Vertices> sets;
  for (std::size_t i = 0; i < q.size(); ++i)
    for (std::size_t j = i + 1; j < q.size(); ++j) sets.push_back({q[i], q[j]});
  EXPECT_EQ(absorber::absorbing_capacity(b.t, b.h), static_cast<std::int64_t>(sets.size()));
  for (const auto& x : sets)
    for (const auto& y : sets) {
      auto seq = absorber::absorber_span_path(b.t, b.h, x, y);
      EXPECT_TRUE(tptest::is_path_power(b.t, seq, 1));
      EXPECT_TRUE(covers_exactly(seq, b.h.vertices()));
      EXPECT_NE(std::find(y.begin(), y.end(), seq.front()), y.end());
      EXPECT_NE(std::find(x.begin(), x.end(), seq.back()), x.end());
    }
}

TEST(SpanPath, SquareWithFreeEnds) {
  auto b = tptest::build_absorber(2, 4, 6);
  auto seq = absorber::span_path(b.t, b.h, {}, {});
  EXPECT_TRUE(tptest::is_path_power(b.t, seq, 2));
  EXPECT_TRUE(covers_exactly(seq, b.h.vertices()));
  auto xy = absorber::absorber_span_path(b.t, b.h, Vertices{b.h.Q[0], b.h.Q[1], b.h.Q[2], b.h.Q[3]},
                                         Vertices{b.h.Q[0], b.h.Q[1], b.h.Q[2], b.h.Q[3]});
  EXPECT_TRUE(tptest::is_path_power(b.t, xy, 2));
  EXPECT_TRUE(covers_exactly(xy, b.h.vertices()));
}

TEST(SpanPath, EndSetsOutsideQ) {
  auto b = tptest::build_absorber(1, 2, 4);
  Vertices outside{b.h.S[1][0], b.h.Q[0]};
  EXPECT_THROW(absorber::absorber_span_path(b.t, b.h, outside, b.h.Q), InputError);
  EXPECT_THROW(absorber::absorber_span_path(b.t, b.h, Vertices{b.h.Q[0]}, b.h.Q), InputError);
}

TEST(ChainAbsorbers, SingleAbsorber) {
  auto b = tptest::build_absorber(1, 3, 5);
  auto seq = absorber::chain_absorbers(b.t, {b.h}, 0);
  EXPECT_TRUE(tptest::is_path_power(b.t, seq, 1));
  EXPECT_TRUE(covers_exactly(seq, b.h.vertices()));
  EXPECT_TRUE(absorber::chain_absorbers(b.t, {}, 0).empty());
}

TEST(ChainAbsorbers, TwoLinkedAbsorbers) {
  for (int k = 1; k <= 2; ++k) {
    auto one = tptest::build_absorber(k, 4, 6);
    std::vector<Tournament> parts{one.t, one.t};
    auto bl = construct::blowup(parts);
    Absorber h1 = one.h, h2 = shifted(one.h, bl.blocks[1][0]);
    ASSERT_TRUE(dominates(bl.tournament, h1.Q, h2.Q));
    // the second absorber is listed first; the chain follows Q1 => Q2
    auto seq = absorber::chain_absorbers(bl.tournament, {h2, h1}, 3);
    EXPECT_TRUE(tptest::is_path_power(bl.tournament, seq, k));
    Vertices all = h1.vertices();
    for (Vertex v : h2.vertices()) all.push_back(v);
    EXPECT_TRUE(covers_exactly(seq, all));
    EXPECT_LT(seq.front(), bl.blocks[1][0]);
  }
}

TEST(ChainAbsorbers, RejectsOverlapAndBadAbsorbers) {
  auto b = tptest::build_absorber(1, 2, 4);
  EXPECT_THROW(absorber::chain_absorbers(b.t, {b.h, b.h}, 0), InputError);
  Absorber bad = b.h;
  bad.r_prime = 1;
  EXPECT_THROW(absorber::chain_absorbers(b.t, {bad}, 0), InputError);
  absorber::AbsorberOptions strict;
  strict.mode = Mode::strict;
  EXPECT_THROW(absorber::chain_absorbers(b.t, {b.h}, 0, strict), InfeasibleError);
}

TEST(FindAbsorber, WrappedTransitiveInstance) {
  const int m = 20, blocks = 10;
  for (int k = 1; k <= 2; ++k) {
    auto t = wrapped_transitive(m * blocks, m);
    auto split = median::split_intervals(Ordering::identity(t), m);
    Vertices x0 = iota(8, 0), xt = iota(8, m * blocks - m);
    auto h = absorber::find_absorber(t, split, x0, xt, k, 2, 1);
    auto v = absorber::verify_absorber(t, h);
    EXPECT_TRUE(v.ok) << v.clause << ": " << v.detail;
    EXPECT_GE(h.r_prime, 1);
    EXPECT_TRUE(tptest::is_path_power(t, absorber::span_path(t, h, {}, {}), k));
  }
}

TEST(FindAbsorber, Preconditions) {
  const int m = 20;
  auto t = wrapped_transitive(200, m);
  auto split = median::split_intervals(Ordering::identity(t), m);
  absorber::AbsorberOptions strict;
  strict.mode = Mode::strict;
  EXPECT_THROW(absorber::find_absorber(t, split, iota(8), iota(8, 180), 1, 2, 0, strict), InfeasibleError);
  // the last block no longer beats the first
  auto tt = construct::transitive_tournament(200);
  EXPECT_THROW(absorber::find_absorber(tt, split, iota(8), iota(8, 180), 1, 2, 0), InputError);
  EXPECT_THROW(absorber::find_absorber(t, split, iota(1), iota(8, 180), 1, 2, 0), InputError);
  EXPECT_THROW(absorber::find_absorber(t, split, iota(8, 30), iota(8, 180), 1, 2, 0), InputError);
}

TEST(FindAbsorber, RandomOutcomesVerify) {
  int found = 0;
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    auto t = construct::random_tournament(400, seed);
    auto split = median::split_intervals(median::median_order(t, {OrderingMode::local, seed}), 40);
    const int last = split.count() - 1;
    auto x0 = extremal::transitive_up_to(t, split.block(0), 6);
    Vertices xt;
    for (Vertex v : extremal::transitive_up_to(t, split.block(last), 6))
      if (dominates(t, Vertices{v}, x0)) xt.push_back(v);
    if (xt.size() < 2) continue;
    try {
      auto h = absorber::find_absorber(t, split, x0, xt, 1, 2, seed);
      EXPECT_TRUE(absorber::verify_absorber(t, h).ok);
      ++found;
    } catch (const NotFoundError&) {
    }
  }
  SUCCEED() << found << " absorbers found";
}
