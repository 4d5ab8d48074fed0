#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tourpow/extremal.hpp"
#include "tourpow/median.hpp"
#include "tourpow/sequencing.hpp"

namespace tourpow::absorber {

/// S_0 => S_1 => ... => S_r => S_0, each S_i transitive of size 2k (stored in
/// transitive order), and Q = (q_1..q_{r'}) with S_0 => Q => S_{r'+1} and
/// S_i => q_i => S_{i+1}.
struct Absorber {
  std::vector<Vertices> S;
  Vertices Q;
  int k = 1;
  int r_prime = 0;

  int r() const { return static_cast<int>(S.size()) - 1; }
  Vertices vertices() const {
    Vertices all;
    for (const auto& s : S) all.insert(all.end(), s.begin(), s.end());
    all.insert(all.end(), Q.begin(), Q.end());
    return all;
  }
  std::size_t size() const { return vertices().size(); }
};

inline Verdict verify_absorber(const Tournament& t, const Absorber& h) {
  const int k = h.k;
  if (k < 1) return Verdict::fail("clause i", "k must be at least 1");
  if (static_cast<int>(h.Q.size()) != h.r_prime)
    return Verdict::fail("clause i", "|Q| = " + std::to_string(h.Q.size()) + " but r' = " + std::to_string(h.r_prime));
  if (h.r_prime < 1 || h.r() <= h.r_prime)
    return Verdict::fail("clause i", "need r > r' >= 1, got r = " + std::to_string(h.r()));
  for (const auto& s : h.S) check_vertices(t, s, "absorber");
  check_vertices(t, h.Q, "absorber");
  Bitset seen(t.size());
  for (const auto& part : h.S) {
    for (Vertex v : part) {
      if (seen.test(v)) return Verdict::fail("disjoint", "vertex " + std::to_string(v) + " repeated", {v});
      seen.set(v);
    }
  }
  for (Vertex v : h.Q) {
    if (seen.test(v)) return Verdict::fail("disjoint", "vertex " + std::to_string(v) + " repeated", {v});
    seen.set(v);
  }
  for (int i = 0; i <= h.r(); ++i) {
    const auto& s = h.S[static_cast<std::size_t>(i)];
    if (static_cast<int>(s.size()) != 2 * k)
      return Verdict::fail("transitive", "S_" + std::to_string(i) + " has " + std::to_string(s.size()) + " vertices");
    if (!is_transitive_order(t, s)) return Verdict::fail("transitive", "S_" + std::to_string(i) + " is not transitive", s);
  }
  for (int i = 0; i < h.r(); ++i)
    if (!dominates(t, h.S[static_cast<std::size_t>(i)], h.S[static_cast<std::size_t>(i + 1)]))
      return Verdict::fail("chain", "S_" + std::to_string(i) + " does not dominate S_" + std::to_string(i + 1));
  if (!dominates(t, h.S.back(), h.S.front())) return Verdict::fail("cycle-closure", "S_r does not dominate S_0");
  if (!dominates(t, h.S.front(), h.Q) || !dominates(t, h.Q, h.S[static_cast<std::size_t>(h.r_prime + 1)]))
    return Verdict::fail("absorbing-part", "S_0 => Q => S_{r'+1} fails");
  for (int i = 1; i <= h.r_prime; ++i) {
    Vertex q = h.Q[static_cast<std::size_t>(i - 1)];
    if (!dominates(t, h.S[static_cast<std::size_t>(i)], std::span<const Vertex>(&q, 1)) ||
        !dominates(t, std::span<const Vertex>(&q, 1), h.S[static_cast<std::size_t>(i + 1)]))
      return Verdict::fail("q-link", "q_" + std::to_string(i) + " is not between S_i and S_{i+1}", {q});
  }
  return Verdict::pass();
}

/// Number of transitive 2k-subsets of Q, or -1 when too many to enumerate.
inline std::int64_t absorbing_capacity(const Tournament& t, const Absorber& h) {
  const int n = static_cast<int>(h.Q.size()), s = 2 * h.k;
  if (s > n) return 0;
  if (extremal::binomial_capped(n, s) > extremal::kEnumerationLimit) return -1;
  std::int64_t count = 0;
  std::vector<int> idx(static_cast<std::size_t>(s));
  for (int i = 0; i < s; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    Vertices sub;
    for (int i : idx) sub.push_back(h.Q[static_cast<std::size_t>(i)]);
    if (is_transitive(t, sub)) ++count;
    int i = s - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - s + i) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < s; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  return count;
}

/// Spanning k-th power of a path of H that starts with Y0 and ends with X0
/// (disjoint transitive k-subsets of Q in transitive order; either may be
/// empty).  Backbone
///   Y0, S^1_{r'+1}..S^1_r, S^1_0, S_1..S_{r'}, S^2_{r'+1}..S^2_r, S^2_0, X0
/// with every other q_i placed right after S_i.
inline Vertices span_path(const Tournament& t, const Absorber& h, std::span<const Vertex> y0,
                          std::span<const Vertex> x0) {
  if (Verdict v = verify_absorber(t, h); !v) throw InputError("span_path: invalid absorber (" + v.clause + ")");
  const auto k = static_cast<std::size_t>(h.k);
  for (auto end : {y0, x0}) {
    if (!end.empty() && end.size() != k) throw InputError("span_path: end sets must have k vertices");
    if (!is_transitive_order(t, end)) throw InputError("span_path: end sets must be in transitive order");
  }
  Bitset q = to_bitset(t, h.Q);
  Bitset ends = to_bitset(t, y0);
  for (Vertex v : x0) {
    if (ends.test(v)) throw DomainError("span_path: Y0 and X0 overlap");
    ends.set(v);
  }
  if (!ends.is_subset_of(q)) throw InputError("span_path: end sets must lie in Q");
  auto half = [&](int i, int which) {
    const auto& s = h.S[static_cast<std::size_t>(i)];
    return which == 1 ? Vertices(s.begin(), s.begin() + static_cast<long>(k)) : Vertices(s.begin() + static_cast<long>(k), s.end());
  };
  const int r = h.r(), rp = h.r_prime;
  Vertices seq(y0.begin(), y0.end());
  auto put = [&](const Vertices& part) { seq.insert(seq.end(), part.begin(), part.end()); };
  for (int i = rp + 1; i <= r; ++i) put(half(i, 1));
  put(half(0, 1));
  for (int i = 1; i <= rp; ++i) {
    put(h.S[static_cast<std::size_t>(i)]);
    Vertex qi = h.Q[static_cast<std::size_t>(i - 1)];
    if (!ends.test(qi)) seq.push_back(qi);
  }
  for (int i = rp + 1; i <= r; ++i) put(half(i, 2));
  put(half(0, 2));
  seq.insert(seq.end(), x0.begin(), x0.end());
  if (!verify_path_power(t, seq, h.k) || seq.size() != h.size())
    throw InternalError("span_path produced an invalid path power");
  return seq;
}

/// Spanning k-th power of a path whose first k vertices lie in Y and last k
/// in X, for transitive 2k-sets X, Y inside Q.
inline Vertices absorber_span_path(const Tournament& t, const Absorber& h, std::span<const Vertex> x,
                                   std::span<const Vertex> y) {
  const auto k = static_cast<std::size_t>(h.k);
  Bitset q = to_bitset(t, h.Q);
  for (auto s : {x, y}) {
    if (s.size() != 2 * k) throw InputError("absorber_span_path needs sets of size 2k");
    if (has_duplicates(s)) throw InputError("absorber_span_path: repeated vertex");
    if (!to_bitset(t, s).is_subset_of(q)) throw InputError("absorber_span_path needs X, Y inside Q");
    if (!is_transitive(t, s)) throw InputError("absorber_span_path needs transitive X, Y");
  }
  Vertices xo = *is_transitive(t, x);
  Vertices yo = *is_transitive(t, y);
  Bitset xs = to_bitset(t, x);
  // Y0: k vertices of Y, preferring those outside X
  Vertices pick;
  for (Vertex v : yo)
    if (!xs.test(v) && pick.size() < k) pick.push_back(v);
  for (Vertex v : yo)
    if (xs.test(v) && pick.size() < k) pick.push_back(v);
  Bitset y0_set = to_bitset(t, pick);
  Vertices y0 = restricted(yo, y0_set);
  Vertices x0;
  for (Vertex v : xo)
    if (!y0_set.test(v) && x0.size() < k) x0.push_back(v);
  if (x0.size() < k) throw DomainError("absorber_span_path: X \\ Y0 has fewer than k vertices");
  return span_path(t, h, y0, x0);
}

struct AbsorberOptions {
  Mode mode = Mode::opportunistic;
  int retries = extremal::kDefaultRetries;
  oracle::OracleBudget budget{};
  bool shrink_r_prime = true;  // opportunistic: accept a smaller absorbing part
};

/// One k-th power of a path through all the absorbers: absorbers are ordered
/// along a Hamilton path of the majority tournament of their absorbing parts
/// and consecutive ones are linked by transitive k-sets X_i (in Q_i) =>
/// Y_{i+1} (in Q_{i+1}).  The outer ends are left free.
inline Vertices chain_absorbers(const Tournament& t, const std::vector<Absorber>& hs, std::uint64_t seed,
                                const AbsorberOptions& opt = {}) {
  if (hs.empty()) return {};
  const int k = hs.front().k;
  Bitset seen(t.size());
  for (std::size_t i = 0; i < hs.size(); ++i) {
    if (hs[i].k != k) throw InputError("chain_absorbers needs a common k");
    if (Verdict v = verify_absorber(t, hs[i]); !v)
      throw InputError("chain_absorbers: absorber " + std::to_string(i) + " fails " + v.clause);
    Bitset b = to_bitset(t, hs[i].vertices());
    if (seen.intersects(b)) throw InputError("chain_absorbers needs disjoint absorbers");
    seen |= b;
  }
  const int s = static_cast<int>(hs.size());
  if (opt.mode == Mode::strict)
    for (const auto& h : hs)
      if (rpow(Rational(1, 2), static_cast<unsigned>(8 * k)) * static_cast<std::int64_t>(h.Q.size()) <
          Rational(pow2(static_cast<unsigned>(2 * k))))
        throw InfeasibleError("strict chain_absorbers needs |Q| >= 2^{10k}");
  // auxiliary tournament; density exactly 1/2 keeps the lower-index direction
  Tournament aux(s);
  for (int i = 0; i < s; ++i)
    for (int j = i + 1; j < s; ++j) {
      Rational d = density(t, hs[static_cast<std::size_t>(i)].Q, hs[static_cast<std::size_t>(j)].Q);
      aux.orient(d >= Rational(1, 2) ? i : j, d >= Rational(1, 2) ? j : i);
    }
  median::MedianOptions mo;
  mo.seed = seed;
  Vertices order = median::median_order(aux, mo).perm();
  for (int i = 0; i + 1 < s; ++i)
    if (!aux.edge(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(i + 1)]))
      throw InternalError("median ordering of the auxiliary tournament is not a Hamilton path");

  std::vector<Vertices> starts(static_cast<std::size_t>(s)), ends(static_cast<std::size_t>(s));
  extremal::DrcOptions dopt{opt.mode, opt.retries, opt.budget, {}};
  for (int i = 0; i + 1 < s; ++i) {
    const int a = order[static_cast<std::size_t>(i)], b = order[static_cast<std::size_t>(i + 1)];
    const Absorber& ha = hs[static_cast<std::size_t>(a)];
    const Absorber& hb = hs[static_cast<std::size_t>(b)];
    Vertices from = without(ha.Q, to_bitset(t, starts[static_cast<std::size_t>(a)]));
    std::optional<std::pair<Vertices, Vertices>> link;
    if (auto p = extremal::try_transitive_pair(t, from, hb.Q, k, derive_seed(seed, static_cast<std::uint64_t>(i)), dopt))
      link = std::make_pair(p->x, p->y);
    else if (auto m = sequencing::detail::anchored_subset(t, from, to_bitset(t, hb.Q), Direction::out, k, opt.budget))
      link = std::make_pair(m->first, m->second);
    if (!link)
      throw NotFoundError("chain_absorbers: no transitive link from absorber " + std::to_string(a) + " to " +
                          std::to_string(b));
    ends[static_cast<std::size_t>(a)] = link->first;
    starts[static_cast<std::size_t>(b)] = link->second;
  }
  Vertices seq;
  for (int i = 0; i < s; ++i) {
    const int a = order[static_cast<std::size_t>(i)];
    Vertices part = span_path(t, hs[static_cast<std::size_t>(a)], starts[static_cast<std::size_t>(a)],
                              ends[static_cast<std::size_t>(a)]);
    seq.insert(seq.end(), part.begin(), part.end());
  }
  if (!verify_path_power(t, seq, k)) throw InternalError("chain_absorbers produced an invalid path power");
  return seq;
}

/// Builds an absorber from transitive X0 in A_0 and Xt in A_t with Xt => X0:
/// S_0 from X0 with common out-neighbours Y in A_1 or A_2; a pair Y' => X_{i2}
/// with X_{i2} in A_{i2}; a 4k-th power of a path in Y' sliced into
/// S_1, q_1, ..., S_{r'}, q_{r'}; and a 2k-chain from X_{i2} to Xt closing
/// the cycle.
inline Absorber find_absorber(const Tournament& t, const median::IntervalSplit& split, std::span<const Vertex> x0,
                              std::span<const Vertex> xt, int k, int r_prime, std::uint64_t seed,
                              const AbsorberOptions& opt = {}) {
  if (k < 1) throw InputError("k must be at least 1");
  if (r_prime < 1) throw InputError("r' must be at least 1");
  const int last = split.count() - 1;
  if (last < 1) throw InputError("find_absorber needs at least two blocks");
  const int min_end = opt.mode == Mode::strict ? 8 * k : 2 * k;
  for (auto s : {x0, xt}) {
    if (static_cast<int>(s.size()) < min_end) throw InputError("find_absorber: end sets too small");
    if (!is_transitive_order(t, s)) throw InputError("find_absorber needs end sets in transitive order");
  }
  sequencing::detail::require_subset(t, x0, split.block(0), "find_absorber");
  sequencing::detail::require_subset(t, xt, split.block(last), "find_absorber");
  if (!dominates(t, xt, x0)) throw InputError("find_absorber needs Xt => X0");
  if (opt.mode == Mode::strict) {
    const int m = sequencing::detail::equal_block_size(split, 0, last);
    if (m < 0) throw InputError("find_absorber needs blocks of equal size");
    if (last < 80 || BigInt(m) < pow2(static_cast<unsigned>(81000 * k)))
      throw InfeasibleError("strict find_absorber needs t >= 80 and m >= 2^{81000k}");
  }
  std::string trace;
  auto note = [&](const std::string& s) { trace += (trace.empty() ? "" : "; ") + s; };
  const int kk = 2 * k;
  Bitset a12 = to_bitset(t, split.span(1, std::min(2, last)));
  auto s0c = extremal::best_common_subset(t, x0, a12, kk, Direction::out);
  if (!s0c || s0c->common.none()) throw NotFoundError("find_absorber: S_0 has no common out-neighbours");
  const Vertices s0 = s0c->x;

  sequencing::SeqOptions so;
  so.mode = opt.mode;
  so.retries = opt.retries;
  so.budget = opt.budget;
  sequencing::FindOptions fo;
  fo.seq = so;

  std::vector<int> i1s{1, 2};
  auto land = [&](int i) { return s0c->common & to_bitset(t, split.block(i)); };
  if (last < 2) i1s = {1};
  else if (land(2).count() > land(1).count()) i1s = {2, 1};
  for (int i1 : i1s) {
    Vertices y = land(i1).to_vector();
    if (y.empty()) continue;
    for (int i2 : {i1 + 1, i1 + 2}) {
      if (last - i2 < 2) continue;
      Vertices a2 = split.block(i2);
      Rational d = density(t, y, a2);
      if (d == 0) continue;
      for (int rp = r_prime; rp >= (opt.shrink_r_prime && opt.mode == Mode::opportunistic ? 1 : r_prime); --rp) {
        const int len = rp * (kk + 1);
        if (static_cast<int>(y.size()) < len) continue;
        extremal::DrcOptions dopt{opt.mode, opt.retries, opt.budget,
                                  [&](const extremal::DrcResult& r) { return static_cast<int>(r.x.size()) >= len; }};
        std::optional<extremal::DrcResult> pair;
        try {
          pair = extremal::drc_transitive_pair(t, y, a2, kk, std::min(d, Rational(1, 2)),
                                               derive_seed(seed, static_cast<std::uint64_t>(i1 * 8 + i2)), dopt);
        } catch (const NotFoundError&) {
          note("no pair into block " + std::to_string(i2) + " at r'=" + std::to_string(rp));
          continue;
        }
        auto path = sequencing::find_path_power(t, pair->x, 4 * k, len, derive_seed(seed, 0xAB5), fo);
        if (!path.met) {
          note("4k-th power path of length " + std::to_string(path.sequence.size()) + " < " + std::to_string(len));
          continue;
        }
        Absorber h;
        h.k = k;
        h.r_prime = rp;
        h.S.push_back(s0);
        const auto& v = path.sequence;  // v_1 = v[0]
        for (int i = 1; i <= rp; ++i) {
          Vertices si;
          for (int p = i * (kk + 1) - kk; p <= i * (kk + 1) - 1; ++p) si.push_back(v[static_cast<std::size_t>(p - 1)]);
          h.S.push_back(si);
          h.Q.push_back(v[static_cast<std::size_t>(i * (kk + 1) - 1)]);
        }
        Bitset used = to_bitset(t, s0);
        for (int p = 0; p < len; ++p) used.set(v[static_cast<std::size_t>(p)]);
        median::IntervalSplit sub = split.sub(i2, last);
        try {
          sequencing::ConnectResult c = sequencing::med_connect(t, sub, pair->y, xt, used, kk, so);
          for (auto& b : c.chain.blocks) h.S.push_back(b);
        } catch (const NotFoundError& e) {
          note(std::string("closing chain: ") + e.what());
          continue;
        }
        if (Verdict ver = verify_absorber(t, h); !ver)
          throw InternalError("find_absorber built an invalid absorber (" + ver.clause + ")");
        return h;
      }
    }
  }
  throw NotFoundError("find_absorber failed: " + (trace.empty() ? std::string("no landing block") : trace));
}

}  // namespace tourpow::absorber
