#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tourpow/mode.hpp"
#include "tourpow/oracle.hpp"
#include "tourpow/random.hpp"
#include "tourpow/rational.hpp"
#include "tourpow/verify.hpp"

namespace tourpow::extremal {

inline constexpr std::uint64_t kEnumerationLimit = 1'000'000;
inline constexpr int kPruneSamples = 100'000;
inline constexpr int kDefaultRetries = 50;

/// min(C(n, k), cap + 1); avoids overflow for the enumeration guards.
inline std::uint64_t binomial_capped(std::int64_t n, std::int64_t k, std::uint64_t cap = kEnumerationLimit) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  long double c = 1;
  for (std::int64_t i = 0; i < k; ++i) {
    c = c * static_cast<long double>(n - i) / static_cast<long double>(i + 1);
    if (c > static_cast<long double>(cap)) return cap + 1;
  }
  return static_cast<std::uint64_t>(c + 0.5L);
}

/// Repeatedly takes a vertex of maximum out-degree inside the pool (lowest
/// index on ties) and recurses into its out-neighbourhood.  The pool at least
/// halves each round, so the result has >= floor(log2 |W|) + 1 vertices.
inline Vertices greedy_transitive(const Tournament& t, std::span<const Vertex> w) {
  if (w.empty()) throw InputError("greedy_transitive needs a nonempty set");
  Bitset pool = to_bitset(t, w);
  Vertices out;
  while (!pool.none()) {
    Vertex best = -1;
    int best_deg = -1;
    pool.for_each([&](Vertex v) {
      int d = t.out(v).and_count(pool);
      if (d > best_deg) {
        best_deg = d;
        best = v;
      }
    });
    out.push_back(best);
    pool &= t.out(best);
  }
  return out;
}

/// A transitive subset of W of exactly `size` vertices in transitive order:
/// the greedy set when it is large enough, else the exact oracle on small W.
inline std::optional<Vertices> find_transitive(const Tournament& t, std::span<const Vertex> w, int size,
                                               const oracle::OracleBudget& budget = {}) {
  if (size <= 0) return Vertices{};
  if (static_cast<int>(w.size()) < size) return std::nullopt;
  Vertices g = greedy_transitive(t, w);
  if (static_cast<int>(g.size()) >= size) {
    g.resize(static_cast<std::size_t>(size));
    return g;
  }
  if (static_cast<int>(w.size()) > budget.max_subset_bits) return std::nullopt;
  Vertices best = oracle::max_transitive_in(t, w, budget, size);
  if (static_cast<int>(best.size()) < size) return std::nullopt;
  return best;
}

/// Largest transitive subset of W with at most `cap` vertices (greedy, then
/// the oracle when W is small and greedy falls short).
inline Vertices transitive_up_to(const Tournament& t, std::span<const Vertex> w, int cap,
                                 const oracle::OracleBudget& budget = {}) {
  if (w.empty() || cap <= 0) return {};
  Vertices g = greedy_transitive(t, w);
  if (static_cast<int>(g.size()) < cap && static_cast<int>(w.size()) <= budget.max_subset_bits) {
    Vertices o = oracle::max_transitive_in(t, w, budget, cap);
    if (o.size() > g.size()) g = std::move(o);
  }
  if (static_cast<int>(g.size()) > cap) g.resize(static_cast<std::size_t>(cap));
  return g;
}

/// Vertices a of A with at least eps*|B| neighbours in B in direction d.  If
/// d(A,B) = beta > eps the result has at least (beta - eps)|A| members.
inline Vertices high_degree_subset(const Tournament& t, std::span<const Vertex> a, std::span<const Vertex> b,
                                   Direction dir, const Rational& eps) {
  if (eps < 0 || eps > 1) throw DomainError("eps must lie in [0,1]");
  if (a.empty() || b.empty()) throw DomainError("high_degree_subset needs nonempty sets");
  Bitset bs = to_bitset(t, b);
  if (to_bitset(t, a).intersects(bs)) throw DomainError("high_degree_subset needs disjoint sets");
  const std::int64_t need = ceil_count(eps * static_cast<std::int64_t>(b.size()));
  Vertices out;
  std::int64_t edges = 0;
  for (Vertex v : a) {
    int d = t.degree_into(v, bs, dir);
    edges += d;
    if (d >= need) out.push_back(v);
  }
  Rational beta(BigInt(edges), BigInt(static_cast<std::int64_t>(a.size()) * static_cast<std::int64_t>(b.size())));
  if (beta > eps && Rational(static_cast<std::int64_t>(out.size())) < (beta - eps) * static_cast<std::int64_t>(a.size()))
    throw InternalError("high_degree_subset: counting bound violated");
  return out;
}

struct CommonSubset {
  Vertices x;     // in pool order
  Bitset common;  // common neighbourhood inside the target
};

/// The `size`-subset of `pool` with the largest common neighbourhood inside
/// `target` (direction d from the pool's point of view).  Exhaustive when
/// C(|pool|, size) <= limit (first maximum in lexicographic order), greedy
/// by intersection otherwise.
inline std::optional<CommonSubset> best_common_subset(const Tournament& t, std::span<const Vertex> pool,
                                                      const Bitset& target, int size, Direction dir,
                                                      std::uint64_t limit = kEnumerationLimit) {
  const int p = static_cast<int>(pool.size());
  if (size < 0 || size > p) return std::nullopt;
  std::vector<Bitset> nb;
  nb.reserve(pool.size());
  for (Vertex v : pool) nb.push_back(t.neighbours(v, dir) & target);
  if (size == 0) return CommonSubset{{}, target};

  std::vector<int> chosen, best_idx;
  int best = -1;
  Bitset best_common(t.size());
  if (binomial_capped(p, size, limit) <= limit) {
    std::vector<Bitset> stack;
    auto dfs = [&](auto&& self, int from, const Bitset& cur) -> void {
      int c = cur.count();
      if (c <= best) return;  // intersections only shrink
      if (static_cast<int>(chosen.size()) == size) {
        best = c;
        best_idx = chosen;
        best_common = cur;
        return;
      }
      for (int i = from; i <= p - (size - static_cast<int>(chosen.size())); ++i) {
        chosen.push_back(i);
        self(self, i + 1, cur & nb[static_cast<std::size_t>(i)]);
        chosen.pop_back();
      }
    };
    dfs(dfs, 0, target);
  } else {
    Bitset cur = target;
    std::vector<char> used(static_cast<std::size_t>(p), 0);
    for (int r = 0; r < size; ++r) {
      int pick = -1, pc = -1;
      for (int i = 0; i < p; ++i) {
        if (used[static_cast<std::size_t>(i)]) continue;
        int c = cur.and_count(nb[static_cast<std::size_t>(i)]);
        if (c > pc) {
          pc = c;
          pick = i;
        }
      }
      used[static_cast<std::size_t>(pick)] = 1;
      cur &= nb[static_cast<std::size_t>(pick)];
      best_idx.push_back(pick);
    }
    std::sort(best_idx.begin(), best_idx.end());
    best_common = cur;
  }
  CommonSubset out{{}, best_common};
  for (int i : best_idx) out.x.push_back(pool[static_cast<std::size_t>(i)]);
  return out;
}

struct KstResult {
  Vertices x;
  Vertices common;
};

/// X subset of A, |X| = k, with at least beta^{4k}|B| common neighbours in B.
inline KstResult kst_subset(const Tournament& t, std::span<const Vertex> a, std::span<const Vertex> b, int k,
                            const Rational& beta, Direction dir) {
  if (k < 1) throw InputError("k must be at least 1");
  if (!(beta > 0 && beta <= Rational(1, 2))) throw DomainError("kst_subset needs 0 < beta <= 1/2");
  if (b.empty()) throw DomainError("kst_subset needs nonempty B");
  Bitset bs = to_bitset(t, b);
  if (to_bitset(t, a).intersects(bs)) throw DomainError("kst_subset needs disjoint A and B");
  if (Rational(static_cast<std::int64_t>(a.size())) < Rational(k) / beta)
    throw DomainError("kst_subset needs |A| >= k/beta; |A| = " + std::to_string(a.size()));
  const std::int64_t need_deg = ceil_count(beta * static_cast<std::int64_t>(b.size()));
  for (Vertex v : a)
    if (t.degree_into(v, bs, dir) < need_deg)
      throw DomainError("kst_subset: vertex " + std::to_string(v) + " has fewer than beta|B| neighbours in B");
  const auto keep = static_cast<std::size_t>(ceil_count(Rational(k) / beta));
  std::span<const Vertex> a2 = a.subspan(0, std::min(keep, a.size()));
  auto best = best_common_subset(t, a2, bs, k, dir);
  const Rational bound = rpow(beta, static_cast<unsigned>(4 * k)) * static_cast<std::int64_t>(b.size());
  if (!best || Rational(best->common.count()) < bound)
    throw NotFoundError("kst_subset: no k-subset reaches beta^{4k}|B| common neighbours");
  return {best->x, best->common.to_vector()};
}

struct DrcResult {
  Vertices x;  // common in-neighbourhood of Y inside A
  Vertices y;  // transitive, in transitive order
};

struct DrcOptions {
  Mode mode = Mode::opportunistic;
  int retries = kDefaultRetries;
  oracle::OracleBudget budget{};
  /// Extra acceptance test on a candidate (e.g. X must host a transitive set).
  std::function<bool(const DrcResult&)> accept;
};

/// Largest s with (1/beta)^{2s} <= |B|, at least 1.
inline int drc_sample_size(const Rational& beta, std::int64_t b) {
  const Rational inv = 1 / beta;
  int s = 0;
  Rational p = inv * inv;
  while (p <= b) {
    ++s;
    p *= inv * inv;
  }
  return std::max(1, s);
}

namespace detail {

/// Deletes one vertex of every k-subset of W whose common in-neighbourhood in
/// A is below `need`.  Exhaustive when feasible, else sampled.
inline void prune_small_subsets(const Tournament& t, Vertices& w, const Bitset& a_set, int k, std::int64_t need,
                                Rng& rng) {
  if (static_cast<int>(w.size()) < k || need <= 0) return;
  Bitset alive = Bitset::from(t.size(), w);
  auto check = [&](std::span<const int> idx) {
    Bitset c = a_set;
    for (int i : idx) {
      Vertex v = w[static_cast<std::size_t>(i)];
      if (!alive.test(v)) return;
      c &= t.in(v);
    }
    if (c.count() < need) alive.reset(w[static_cast<std::size_t>(idx.back())]);
  };
  const int n = static_cast<int>(w.size());
  if (binomial_capped(n, k) <= kEnumerationLimit) {
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
    while (true) {
      check(idx);
      int i = k - 1;
      while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
      if (i < 0) break;
      ++idx[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
  } else {
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (int s = 0; s < kPruneSamples; ++s) {
      for (int j = 0; j < k; ++j) idx[static_cast<std::size_t>(j)] = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
      std::sort(idx.begin(), idx.end());
      if (std::adjacent_find(idx.begin(), idx.end()) != idx.end()) continue;
      check(idx);
    }
  }
  w = restricted(w, alive);
}

inline void check_drc_inputs(const Tournament& t, std::span<const Vertex> a, std::span<const Vertex> b, int k,
                             const Rational& beta, Mode mode) {
  if (k < 1) throw InputError("k must be at least 1");
  if (!(beta > 0 && beta <= Rational(1, 2))) throw DomainError("dependent random choice needs 0 < beta <= 1/2");
  if (a.empty() || b.empty()) throw DomainError("dependent random choice needs nonempty sets");
  Rational d = density(t, a, b);
  if (d < beta) throw DomainError("d(A,B) = " + to_string(d) + " is below beta = " + to_string(beta));
  if (mode == Mode::strict) {
    Rational need = rpow(1 / beta, static_cast<unsigned>(5 * k));
    if (Rational(static_cast<std::int64_t>(std::min(a.size(), b.size()))) < need)
      throw InfeasibleError("strict mode needs |A|,|B| >= beta^{-5k} = " + to_string(need));
  }
}

}  // namespace detail

/// Dependent random choice: Y subset of B transitive of size k and X = all
/// common in-neighbours of Y in A, so X => Y.  Each retry samples s vertices
/// of A with replacement, intersects their out-neighbourhoods in B, prunes
/// k-subsets with few common in-neighbours and extracts Y greedily.  In
/// opportunistic mode a deterministic sweep over single anchors follows the
/// random retries.
inline DrcResult drc_transitive_pair(const Tournament& t, std::span<const Vertex> a, std::span<const Vertex> b, int k,
                                     const Rational& beta, std::uint64_t seed, const DrcOptions& opt = {}) {
  detail::check_drc_inputs(t, a, b, k, beta, opt.mode);
  const Bitset a_set = to_bitset(t, a);
  const Bitset b_set = to_bitset(t, b);
  const Rational x_bound = rpow(beta, static_cast<unsigned>(4 * k)) * static_cast<std::int64_t>(a.size());
  const std::int64_t need = ceil_count(x_bound);
  const int s = drc_sample_size(beta, static_cast<std::int64_t>(b.size()));
  std::size_t best_x = 0;

  auto attempt = [&](const Bitset& pool_set, Rng& rng, bool prune) -> std::optional<DrcResult> {
    Vertices w = pool_set.to_vector();
    if (prune) detail::prune_small_subsets(t, w, a_set, k, need, rng);
    auto y = find_transitive(t, w, k, opt.budget);
    if (!y) return std::nullopt;
    Bitset x = a_set;
    for (Vertex v : *y) x &= t.in(v);
    DrcResult r{x.to_vector(), *y};
    best_x = std::max(best_x, r.x.size());
    if (r.x.empty()) return std::nullopt;
    if (opt.mode == Mode::strict && Rational(static_cast<std::int64_t>(r.x.size())) < x_bound) return std::nullopt;
    if (opt.accept && !opt.accept(r)) return std::nullopt;
    return r;
  };
  auto checked = [&](DrcResult r) {
    if (!dominates(t, r.x, r.y) || !is_transitive_order(t, r.y))
      throw InternalError("drc_transitive_pair produced an invalid pair");
    return r;
  };

  for (int r = 0; r < opt.retries; ++r) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
    Bitset pool = b_set;
    for (int i = 0; i < s; ++i) pool &= t.out(a[static_cast<std::size_t>(rng.below(a.size()))]);
    if (auto res = attempt(pool, rng, true)) return checked(std::move(*res));
  }
  if (opt.mode == Mode::opportunistic) {
    Rng rng(derive_seed(seed, 0xD5C));
    for (Vertex anchor : a)
      if (auto res = attempt(b_set & t.out(anchor), rng, false)) return checked(std::move(*res));
  }
  throw NotFoundError("drc_transitive_pair: " + std::to_string(opt.retries) +
                      " retries exhausted; best common in-neighbourhood " + std::to_string(best_x));
}

struct TransPair {
  Vertices x;  // transitive order
  Vertices y;  // transitive order
};

/// X subset of A and Y subset of B, both transitive of size k, with X => Y.
inline TransPair transitive_pair(const Tournament& t, std::span<const Vertex> a, std::span<const Vertex> b, int k,
                                 const Rational& beta, std::uint64_t seed, DrcOptions opt = {}) {
  if (opt.mode == Mode::strict) {
    // beta^{4k}|A| >= 2^k makes the greedy step succeed
    if (rpow(beta, static_cast<unsigned>(4 * k)) * static_cast<std::int64_t>(a.size()) < Rational(pow2(static_cast<unsigned>(k))))
      throw InfeasibleError("strict transitive_pair needs beta^{4k}|A| >= 2^k");
  }
  auto user = opt.accept;
  opt.accept = [&](const DrcResult& r) {
    return find_transitive(t, r.x, k, opt.budget).has_value() && (!user || user(r));
  };
  DrcResult d = drc_transitive_pair(t, a, b, k, beta, seed, opt);
  auto x = find_transitive(t, d.x, k, opt.budget);
  if (!x) throw NotFoundError("transitive_pair: common in-neighbourhood hosts no transitive k-set");
  TransPair p{*x, d.y};
  if (!dominates(t, p.x, p.y) || !is_transitive_order(t, p.x) || !is_transitive_order(t, p.y))
    throw InternalError("transitive_pair produced an invalid pair");
  return p;
}

/// Opportunistic pair finder: beta is the actual density capped at 1/2.
inline std::optional<TransPair> try_transitive_pair(const Tournament& t, std::span<const Vertex> a,
                                                    std::span<const Vertex> b, int k, std::uint64_t seed,
                                                    const DrcOptions& opt = {}) {
  if (a.empty() || b.empty()) return std::nullopt;
  if (to_bitset(t, a).intersects(to_bitset(t, b))) return std::nullopt;
  Rational d = density(t, a, b);
  if (d == 0) return std::nullopt;
  Rational beta = std::min(d, Rational(1, 2));
  try {
    return transitive_pair(t, a, b, k, beta, seed, opt);
  } catch (const NotFoundError&) {
    return std::nullopt;
  }
}

struct Chain {
  std::vector<Vertices> sets;  // X_1 => ... => X_t, each in transitive order
};

/// Precondition failure of the chain step: transitive B' in blocks[index+1]
/// and B in blocks[index] with B' => B.
struct BackwardWitness {
  int index;
  Vertices later;    // B'
  Vertices earlier;  // B
};

using ChainOutcome = std::variant<Chain, BackwardWitness>;

struct ChainOptions {
  Mode mode = Mode::opportunistic;
  int retries = kDefaultRetries;
  oracle::OracleBudget budget{};
};

/// Backward induction over the blocks: if d(A_t, A_{t-1}) >= 1/2 look for a
/// backward pair (a witness); otherwise dependent random choice fixes X_t
/// and shrinks A_{t-1} to its common in-neighbourhood.  Opportunistic mode
/// tries the other branch when the preferred one finds nothing.
inline ChainOutcome transitive_chain(const Tournament& t, const std::vector<Vertices>& blocks, int k,
                                     std::uint64_t seed, const ChainOptions& opt = {}) {
  if (k < 1) throw InputError("k must be at least 1");
  if (blocks.empty()) throw InputError("transitive_chain needs at least one block");
  {
    Bitset seen(t.size());
    for (const auto& b : blocks) {
      Bitset bs = to_bitset(t, b);
      if (static_cast<std::size_t>(bs.count()) != b.size() || seen.intersects(bs))
        throw InputError("transitive_chain needs disjoint blocks");
      seen |= bs;
    }
  }
  const int tt = static_cast<int>(blocks.size());
  if (opt.mode == Mode::strict) {
    for (int i = 0; i < tt; ++i) {
      unsigned e = static_cast<unsigned>((i == tt - 1 ? 6 : 10) * k);
      if (BigInt(static_cast<std::int64_t>(blocks[static_cast<std::size_t>(i)].size())) < pow2(e))
        throw InfeasibleError("strict transitive_chain needs blocks of size >= 2^{10k}");
    }
  }
  DrcOptions dopt{opt.mode, opt.retries, opt.budget, {}};
  std::vector<Vertices> sets(static_cast<std::size_t>(tt));
  Vertices cur = blocks.back();  // A'_t
  std::string trace;
  for (int i = tt - 1; i >= 1; --i) {
    const Vertices& prev = blocks[static_cast<std::size_t>(i - 1)];
    const std::uint64_t step_seed = derive_seed(seed, static_cast<std::uint64_t>(i));
    if (prev.empty() || cur.empty()) throw NotFoundError("transitive_chain: empty block at index " + std::to_string(i));
    const Rational back = density(t, cur, prev);
    auto try_witness = [&]() -> std::optional<BackwardWitness> {
      if (back == 0) return std::nullopt;
      Rational beta = std::min(back, Rational(1, 2));
      if (opt.mode == Mode::strict && back < Rational(1, 2)) return std::nullopt;
      try {
        TransPair p = transitive_pair(t, cur, prev, k, beta, step_seed, dopt);
        return BackwardWitness{i - 1, p.x, p.y};
      } catch (const NotFoundError&) {
        return std::nullopt;
      }
    };
    auto try_forward = [&]() -> std::optional<DrcResult> {
      Rational fwd = 1 - back;
      if (fwd == 0) return std::nullopt;
      Rational beta = std::min(fwd, Rational(1, 2));
      DrcOptions o = dopt;
      // the shrunken block must still carry the rest of the chain
      o.accept = [&](const DrcResult& r) { return find_transitive(t, r.x, k, opt.budget).has_value(); };
      try {
        return drc_transitive_pair(t, prev, cur, k, beta, derive_seed(step_seed, 1), o);
      } catch (const NotFoundError&) {
        return std::nullopt;
      }
    };
    const bool prefer_witness = back >= Rational(1, 2);
    if (prefer_witness) {
      if (auto w = try_witness()) return *w;
    }
    if (auto f = try_forward()) {
      sets[static_cast<std::size_t>(i)] = f->y;
      cur = f->x;
      continue;
    }
    if (!prefer_witness && opt.mode == Mode::opportunistic) {
      if (auto w = try_witness()) return *w;
    }
    throw NotFoundError("transitive_chain: neither branch succeeded between blocks " + std::to_string(i - 1) +
                        " and " + std::to_string(i));
  }
  auto first = find_transitive(t, cur, k, opt.budget);
  if (!first) throw NotFoundError("transitive_chain: first block hosts no transitive k-set");
  sets[0] = *first;
  for (int i = 0; i + 1 < tt; ++i)
    if (!dominates(t, sets[static_cast<std::size_t>(i)], sets[static_cast<std::size_t>(i + 1)]))
      throw InternalError("transitive_chain produced a broken chain");
  return Chain{sets};
}

}  // namespace tourpow::extremal
