#include <gtest/gtest.h>

#include "support.hpp"

using namespace tourpow;
using pipeline::Branch;
using pipeline::PipelineConfig;
using tptest::iota;

namespace {

PipelineConfig strict_cfg() {
  PipelineConfig c;
  c.mode = Mode::strict;
  return c;
}

/// Blocks of C3 first, then a transitive tail; every backward edge has length 2.
Tournament triangles_then_chain(int triangles, int n) {
  Tournament t(n);
  for (int b = 0; b < triangles; ++b) t.orient(3 * b + 2, 3 * b);
  return t;
}

}  // namespace

TEST(Partition, HamiltonPathForKOne) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto t = construct::random_tournament(150, seed);
    auto r = pipeline::partition_path_powers(t, 1);
    ASSERT_EQ(r.parts.size(), 1u);
    EXPECT_TRUE(tptest::is_partition_of(t, r.parts, 1));
  }
}

TEST(Partition, TransitiveIsOnePart) {
  auto t = construct::transitive_tournament(300);
  auto r = pipeline::partition_path_powers(t, 3);
  ASSERT_EQ(r.parts.size(), 1u);
  EXPECT_EQ(r.parts[0], iota(300));
}

TEST(Partition, StrictIsInfeasibleAtDeskScale) {
  auto t = construct::random_tournament(1000, 0);
  EXPECT_THROW(pipeline::partition_path_powers(t, 2, strict_cfg()), InfeasibleError);
}

TEST(Partition, RandomTournamentsGiveValidPartitions) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const int n = 120 + 40 * static_cast<int>(seed);
    const int k = 2 + static_cast<int>(seed % 2);
    auto t = construct::random_tournament(n, seed);
    PipelineConfig cfg;
    cfg.seed = seed;
    auto r = pipeline::partition_path_powers(t, k, cfg);
    EXPECT_TRUE(tptest::is_partition_of(t, r.parts, k)) << "seed " << seed;
    EXPECT_EQ(r.stats.parts, static_cast<int>(r.parts.size()));
    EXPECT_LT(static_cast<int>(r.parts.size()), n);
  }
}

TEST(Partition, ConfigErrors) {
  auto t = construct::random_tournament(20, 0);
  PipelineConfig cfg;
  cfg.stride = 2;
  EXPECT_THROW(pipeline::partition_path_powers(t, 2, cfg), InputError);
  EXPECT_THROW(pipeline::partition_path_powers(t, 0), InputError);
  PipelineConfig small;
  small.chain_set_size = 1;
  EXPECT_THROW(pipeline::partition_path_powers(t, 2, small), InputError);
}

TEST(DensityIncrement, TriangleIsLongEdge) {
  auto t = tptest::c3();
  auto d = pipeline::density_increment(t, Ordering::identity(t), Rational(1, 9), Rational(1, 9));
  EXPECT_EQ(d.branch, Branch::p1);
  ASSERT_EQ(d.long_edges.size(), 1u);
  EXPECT_EQ(d.long_edges[0], (BackwardEdge{2, 0, 2}));
}

TEST(DensityIncrement, Errors) {
  auto tt = construct::transitive_tournament(10);
  EXPECT_THROW(pipeline::density_increment(tt, Ordering::identity(tt), Rational(1, 100), Rational(1, 4)), DomainError);
  auto t = tptest::c3();
  EXPECT_THROW(pipeline::density_increment(t, Ordering::identity(t), Rational(1, 3), Rational(1, 4)), DomainError);
  EXPECT_THROW(pipeline::density_increment(t, Ordering::identity(t), Rational(1, 9), Rational(1, 3)), DomainError);
}

TEST(DensityIncrement, ShortEdgesMatchDirectCount) {
  for (int triangles : {4, 7, 10}) {
    const int n = 40;
    auto t = triangles_then_chain(triangles, n);
    auto ord = Ordering::identity(t);
    const Rational eps(triangles, n * n), c(3, 10);
    auto d = pipeline::density_increment(t, ord, eps, c);
    // reference counts over all backward pairs
    std::int64_t e_tau = 0, e1 = 0, e2 = 0, f = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        if (!t.edge(j, i)) continue;
        const bool lng = 4 * (j - i) >= 3 * n / 10.0;
        const bool a = j < 20, b = i >= 20;
        e_tau += lng;
        e1 += a;
        e2 += b;
        f += !lng && !a && !b;
      }
    EXPECT_EQ(d.e_tau, e_tau);
    EXPECT_EQ(d.e1, e1);
    EXPECT_EQ(d.e2, e2);
    EXPECT_EQ(d.f, f);
    EXPECT_EQ(d.branch, Branch::p2);
    EXPECT_EQ(d.begin, 0);
    EXPECT_EQ(d.sub, ord.slice(d.begin, d.end));
    const bool f_small = 4 * Rational(f) < c * eps * n * n;
    EXPECT_EQ(d.part, f_small ? "I1" : "J");
    EXPECT_GE(static_cast<int>(d.sub.size()), n / 2);
  }
}

TEST(DensityIncrement, ReversalBranchesAreConsistent) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto t = construct::random_reversal(14, 0.2, seed);
    auto ord = median::median_order(t, {OrderingMode::exact});
    if (ord.backward() == 0) continue;
    const Rational eps = std::min(Rational(ord.backward(), 196), Rational(1, 4));
    auto d = pipeline::density_increment(t, ord, eps, Rational(1, 5));
    EXPECT_TRUE(d.guaranteed);
    if (d.branch == Branch::p1) {
      EXPECT_GE(4 * Rational(d.e_tau), Rational(1, 5) * eps * 196);
      for (const auto& e : d.long_edges) EXPECT_GE(4 * e.length, 14 / 5.0);
    } else {
      // the proved bound on an exact median ordering
      Tournament s = t.induced(d.sub);
      const Rational ns(static_cast<std::int64_t>(s.size()) * s.size());
      EXPECT_GE(Rational(oracle::exact_min_backward(s).count), 2 * (1 - Rational(1, 5)) * eps * ns)
          << "seed " << seed;
    }
  }
}

TEST(Refine, TriangleStopsAtOnce) {
  auto r = pipeline::refine_intransitive(tptest::c3(), Rational(1, 9));
  EXPECT_EQ(r.trace.size(), 1u);
  EXPECT_EQ(r.sub.size(), 3);
  EXPECT_EQ(r.eps_exact, Rational(1, 9));
  EXPECT_TRUE(r.product_ok);
  EXPECT_THROW(pipeline::refine_intransitive(tptest::c3(), Rational(1, 3)), DomainError);
}

TEST(Refine, SmallRandomProducts) {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    auto t = construct::random_tournament(12, seed);
    const Rational eps = std::min(oracle::exact_epsilon(t), Rational(1, 4));
    auto r = pipeline::refine_intransitive(t, eps);
    EXPECT_EQ(r.trace.back().branch, Branch::p1);
    ASSERT_TRUE(r.eps_exact.has_value());
    EXPECT_EQ(*r.eps_exact, oracle::exact_epsilon(r.sub));
    EXPECT_TRUE(r.sub == t.induced(r.map));
    // an exact ordering at every step: the product bound holds
    EXPECT_TRUE(r.product_ok) << "seed " << seed;
    EXPECT_GE(r.eps_tilde * r.sub.size() * 5, eps * 12);
  }
}

TEST(Refine, LargerInputStaysInsideT) {
  auto t = construct::random_reversal(200, 0.1, 2);
  auto r = pipeline::refine_intransitive(t, Rational(1, 100));
  EXPECT_EQ(r.trace.back().branch, Branch::p1);
  Vertices m = r.map;
  std::sort(m.begin(), m.end());
  EXPECT_EQ(std::adjacent_find(m.begin(), m.end()), m.end());
  EXPECT_TRUE(r.sub == t.induced(r.map));
  EXPECT_FALSE(r.long_edges.empty());
}

TEST(FindCyclePower, SmallExamples) {
  auto c = pipeline::find_cycle_power(tptest::c3(), 1, Rational(1, 10));
  EXPECT_EQ(c.stats.method, "oracle");
  EXPECT_EQ(c.cycle.size(), 3u);
  EXPECT_THROW(pipeline::find_cycle_power(construct::transitive_tournament(8), 1, Rational(1, 10)), NotFoundError);
  EXPECT_THROW(pipeline::find_cycle_power(tptest::c3(), 1, Rational(1, 4)), DomainError);
  EXPECT_THROW(pipeline::find_cycle_power(construct::random_tournament(100, 0), 1, Rational(1, 10), strict_cfg()),
               InfeasibleError);
}

TEST(FindCyclePower, OracleMatchesReference) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto t = construct::random_tournament(8, seed);
    const int k = 1 + static_cast<int>(seed % 2);
    const int best = tptest::brute_max_cycle_power(t, k);
    if (best < 3) {
      EXPECT_THROW(pipeline::find_cycle_power(t, k, Rational(1, 10)), NotFoundError);
      continue;
    }
    auto c = pipeline::find_cycle_power(t, k, Rational(1, 10));
    EXPECT_EQ(static_cast<int>(c.cycle.size()), best);
  }
}

TEST(FindCyclePower, RandomFiveHundred) {
  auto t = construct::random_tournament(500, 1);
  PipelineConfig cfg;
  cfg.seed = 1;
  auto c = pipeline::find_cycle_power(t, 2, Rational(1, 10), cfg);
  EXPECT_TRUE(tptest::is_cycle_power(t, c.cycle, 2));
  EXPECT_GE(c.cycle.size(), 3u);
  EXPECT_EQ(c.stats.length, static_cast<int>(c.cycle.size()));
  EXPECT_EQ(c.stats.target, Rational(500, 15000));
  EXPECT_TRUE(c.stats.target_met);
}
