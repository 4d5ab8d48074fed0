#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tourpow/extremal.hpp"
#include "tourpow/median.hpp"
#include "tourpow/mode.hpp"

namespace tourpow::sequencing {

using median::IntervalSplit;

/// Disjoint transitive blocks (each stored in transitive order) with
/// blocks[i] => blocks[i+1], wrapping around when cyclic.
struct TransChain {
  std::vector<Vertices> blocks;
  std::vector<int> indices;  // interval index of each block, when known
  bool cyclic = false;

  std::size_t size() const { return blocks.size(); }
  std::size_t vertex_count() const {
    std::size_t c = 0;
    for (const auto& b : blocks) c += b.size();
    return c;
  }
};

inline Verdict check_chain(const Tournament& t, const TransChain& c) {
  Bitset seen(t.size());
  for (std::size_t i = 0; i < c.blocks.size(); ++i) {
    const auto& b = c.blocks[i];
    check_vertices(t, b, "chain");
    if (b.empty()) return Verdict::fail("nonempty", "block " + std::to_string(i) + " is empty");
    for (Vertex v : b) {
      if (seen.test(v)) return Verdict::fail("disjoint", "vertex in two blocks", {v});
      seen.set(v);
    }
    if (!is_transitive_order(t, b)) return Verdict::fail("transitive", "block " + std::to_string(i) + " not transitive", b);
  }
  const std::size_t n = c.blocks.size();
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (!dominates(t, c.blocks[i], c.blocks[i + 1]))
      return Verdict::fail("domination", "block " + std::to_string(i) + " does not dominate its successor");
  if (c.cyclic && n >= 2 && !dominates(t, c.blocks[n - 1], c.blocks[0]))
    return Verdict::fail("wrap", "last block does not dominate the first");
  return Verdict::pass();
}

struct SeqOptions {
  Mode mode = Mode::opportunistic;
  Rational eps{1, 100};  // membership threshold of the short connection
  int retry_budget = 20;
  int retries = extremal::kDefaultRetries;
  std::uint64_t seed = 0;
  oracle::OracleBudget budget{};
};

namespace detail {

inline extremal::DrcOptions drc_options(const SeqOptions& o) { return {o.mode, o.retries, o.budget, {}}; }

inline Vertices block_minus(const IntervalSplit& s, int i, const Bitset& f) {
  return without(s.block(i), f);
}

inline bool strict_size_ok(std::int64_t value, const BigInt& bound) { return BigInt(value) >= bound; }

inline void require_subset(const Tournament& t, std::span<const Vertex> x, std::span<const Vertex> of, const char* what) {
  Bitset o = to_bitset(t, of);
  for (Vertex v : x)
    if (!o.test(v)) throw InputError(std::string(what) + ": vertex " + std::to_string(v) + " outside its block");
}

inline int equal_block_size(const IntervalSplit& s, int first, int last) {
  const int m = s.blocks[static_cast<std::size_t>(first)].size();
  for (int i = first; i <= last; ++i)
    if (s.blocks[static_cast<std::size_t>(i)].size() != m) return -1;
  return m;
}

/// First k-subset M of `cand` (lexicographic over cand's order) whose common
/// neighbourhood inside `anchor` (direction d from M) hosts a transitive
/// k-set.  Returns (M, that k-set).
inline std::optional<std::pair<Vertices, Vertices>> anchored_subset(const Tournament& t, std::span<const Vertex> cand,
                                                                    const Bitset& anchor, Direction d, int k,
                                                                    const oracle::OracleBudget& budget,
                                                                    int limit = 20000) {
  const int n = static_cast<int>(cand.size());
  if (n < k) return std::nullopt;
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  for (int tries = 0; tries < limit; ++tries) {
    Bitset c = anchor;
    Vertices m;
    for (int i : idx) {
      m.push_back(cand[static_cast<std::size_t>(i)]);
      c &= t.neighbours(cand[static_cast<std::size_t>(i)], d);
    }
    if (c.count() >= k)
      if (auto s = extremal::find_transitive(t, c.to_vector(), k, budget)) return std::make_pair(m, *s);
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  return std::nullopt;
}

inline Vertices in_order(const Ordering& ord, Vertices vs) {
  std::sort(vs.begin(), vs.end(), [&](Vertex a, Vertex b) { return ord.position(a) < ord.position(b); });
  return vs;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// One step of the ordered walk

struct TuranResult {
  Vertices x;       // k-subset of A0', in A0' order
  int i;            // 1 or 2: the block receiving the common out-neighbours
  Vertices common;  // common out-neighbours in A_i \ F, in ordering order
};

/// Candidate steps from A0' into A_1 \ F or A_2 \ F (relative to block b0),
/// best first.
inline std::vector<TuranResult> turan_candidates(const Tournament& t, const IntervalSplit& split, int b0,
                                                 std::span<const Vertex> a0p, const Bitset& f, int k) {
  std::vector<TuranResult> out;
  for (int i = 1; i <= 2; ++i) {
    if (b0 + i >= split.count()) break;
    Bitset target = to_bitset(t, detail::block_minus(split, b0 + i, f));
    auto best = extremal::best_common_subset(t, a0p, target, k, Direction::out);
    if (!best) continue;
    out.push_back({best->x, i, detail::in_order(split.ord, best->common.to_vector())});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const TuranResult& a, const TuranResult& b) { return a.common.size() > b.common.size(); });
  return out;
}

/// X subset of A0' (|A0'| = 8k), |X| = k, with many common out-neighbours in
/// A_i \ F for some i in {1,2}.  `need` is the smallest acceptable common
/// set in opportunistic mode (default 8k); strict mode needs m / 2^{12k}.
inline TuranResult median_turan(const Tournament& t, const IntervalSplit& split, int b0, std::span<const Vertex> a0p,
                                const Bitset& f, int k, const SeqOptions& opt = {}, int need = -1) {
  if (k < 1) throw InputError("k must be at least 1");
  if (b0 < 0 || b0 + 2 >= split.count()) throw InputError("median_turan needs three blocks from b0");
  const int sz = static_cast<int>(a0p.size());
  if (opt.mode == Mode::strict ? sz != 8 * k : (sz < k || sz > 8 * k))
    throw InputError("median_turan needs |A0'| = 8k, got " + std::to_string(sz));
  detail::require_subset(t, a0p, split.block(b0), "median_turan");
  std::int64_t threshold = need >= 0 ? need : 8 * k;
  if (opt.mode == Mode::strict) {
    const int m = detail::equal_block_size(split, b0, b0 + 2);
    if (m < 0) throw InputError("median_turan needs blocks of equal size");
    if (static_cast<std::int64_t>(to_bitset(t, split.span(b0, b0 + 2)).and_count(f)) * 4 > m)
      throw DomainError("median_turan: more than m/4 forbidden vertices");
    const BigInt bound = pow2(static_cast<unsigned>(12 * k));
    if (BigInt(m) < bound) throw InfeasibleError("strict median_turan needs m >= 2^{12k}");
    threshold = (BigInt(m) / bound).convert_to<std::int64_t>();
  }
  auto cands = turan_candidates(t, split, b0, a0p, f, k);
  if (cands.empty() || static_cast<std::int64_t>(cands.front().common.size()) < threshold)
    throw NotFoundError("median_turan: best common out-neighbourhood " +
                        std::to_string(cands.empty() ? 0 : cands.front().common.size()) + " below " +
                        std::to_string(threshold));
  return cands.front();
}

/// Walk X_1 => X_2 => ... through the blocks from `start`, each step advancing
/// one or two blocks, ending in one of the last two blocks.  Pools of up to
/// 8k transitive vertices are carried between steps.
inline TransChain median_sequence(const Tournament& t, const IntervalSplit& split, int start,
                                  std::span<const Vertex> x, const Bitset& f, int k, const SeqOptions& opt = {}) {
  if (k < 1) throw InputError("k must be at least 1");
  const int last = split.count() - 1;
  if (start < 0 || start > last) throw InputError("median_sequence: start block out of range");
  const int sz = static_cast<int>(x.size());
  if (opt.mode == Mode::strict ? sz != 8 * k : sz < k)
    throw InputError("median_sequence needs |X| = 8k, got " + std::to_string(sz));
  detail::require_subset(t, x, split.block(start), "median_sequence");
  for (Vertex v : x)
    if (f.test(v)) throw InputError("median_sequence: X meets F");
  if (!is_transitive_order(t, x)) throw InputError("median_sequence needs X in transitive order");
  if (opt.mode == Mode::strict) {
    const int m = detail::equal_block_size(split, start, last);
    if (m < 0) throw InputError("median_sequence needs blocks of equal size");
    for (int i = start; i <= last; ++i)
      if (static_cast<std::int64_t>(to_bitset(t, split.block(i)).and_count(f)) * 8 > m)
        throw DomainError("median_sequence: block " + std::to_string(i) + " has more than m/8 forbidden vertices");
    if (BigInt(m) < pow2(static_cast<unsigned>(20 * k))) throw InfeasibleError("strict median_sequence needs m >= 2^{20k}");
  }
  TransChain chain;
  Vertices pool(x.begin(), x.end());
  if (static_cast<int>(pool.size()) > 8 * k) pool.resize(static_cast<std::size_t>(8 * k));
  int j = start;
  while (j < last - 1) {
    bool advanced = false;
    for (auto& c : turan_candidates(t, split, j, pool, f, k)) {
      if (static_cast<int>(c.common.size()) < k) continue;
      Vertices next = extremal::transitive_up_to(t, c.common, 8 * k, opt.budget);
      if (static_cast<int>(next.size()) < k) continue;
      chain.blocks.push_back(c.x);
      chain.indices.push_back(j);
      j += c.i;
      pool = std::move(next);
      advanced = true;
      break;
    }
    if (!advanced)
      throw NotFoundError("median_sequence: step from block " + std::to_string(j) + " failed after " +
                          std::to_string(chain.size()) + " sets");
  }
  pool.resize(static_cast<std::size_t>(k));
  chain.blocks.push_back(pool);
  chain.indices.push_back(j);
  return chain;
}

// ---------------------------------------------------------------------------
// Connecting distant sets

struct ConnectResult {
  TransChain chain;
  Ordering ord;  // the ordering after any repair moves
  int improvements = 0;
  int branch = 0;  // 2 or 3 for the short connection; hops added by med_connect
};

/// Not-found from the short connection, carrying the repaired ordering.
struct ConnectFailure : NotFoundError {
  ConnectFailure(const std::string& w, Vertices perm, std::int64_t forward, int improvements)
      : NotFoundError(w), perm(std::move(perm)), forward(forward), improvements(improvements) {}
  Vertices perm;
  std::int64_t forward;
  int improvements;
};

/// Chain X_0 => ... => X_s with s <= 3, X_0 in A0', X_s in At' and the
/// middle sets in (A_1 u ... u A_{t-1}) \ F.  Branches: s = 2 through
/// A^I n A^O; s = 3 through a pair from A^I \ A^O into A^O; otherwise move
/// A^I \ A^O to the end of the middle interval, which must gain forward
/// edges, and retry.
inline ConnectResult med_connect_short(const Tournament& t, const IntervalSplit& split0, std::span<const Vertex> a0p,
                                       std::span<const Vertex> atp, const Bitset& f, int k,
                                       const SeqOptions& opt = {}) {
  if (k < 1) throw InputError("k must be at least 1");
  const int last = split0.count() - 1;
  if (last < 2) throw InputError("med_connect_short needs at least one middle block");
  if (a0p.empty() || atp.empty()) throw InputError("med_connect_short needs nonempty end sets");
  detail::require_subset(t, a0p, split0.block(0), "med_connect_short");
  detail::require_subset(t, atp, split0.block(last), "med_connect_short");
  if (opt.mode == Mode::strict) {
    const int m = detail::equal_block_size(split0, 0, last);
    if (m < 0) throw InputError("med_connect_short needs blocks of equal size");
    if (2 * static_cast<std::int64_t>(f.count()) > m) throw DomainError("med_connect_short: |F| > m/2");
    if (last < 50 || BigInt(m) < 100 * pow2(static_cast<unsigned>(40400 * k)) ||
        BigInt(static_cast<std::int64_t>(std::min(a0p.size(), atp.size()))) < pow2(static_cast<unsigned>(4001 * k)))
      throw InfeasibleError("strict med_connect_short needs t >= 50, m >= 100*2^{40400k}, |A0'|,|At'| >= 2^{4001k}");
  }
  const Bitset a0_set = to_bitset(t, a0p);
  const Bitset at_set = to_bitset(t, atp);
  const std::int64_t need_in = ceil_count(opt.eps * static_cast<std::int64_t>(a0p.size()));
  const std::int64_t need_out = ceil_count(opt.eps * static_cast<std::int64_t>(atp.size()));
  IntervalSplit split = split0;
  int improvements = 0;
  auto ok = [&](TransChain c, int branch) {
    if (!check_chain(t, c)) throw InternalError("med_connect_short produced an invalid chain");
    return ConnectResult{std::move(c), split.ord, improvements, branch};
  };

  for (int round = 0; round <= opt.retry_budget; ++round) {
    Vertices mid = without(split.span(1, last - 1), f);
    Vertices ai, ao, both, ai_only;
    Bitset ao_set(t.size());
    for (Vertex v : mid) {
      bool in = t.degree_into(v, a0_set, Direction::in) >= need_in;
      bool out = t.degree_into(v, at_set, Direction::out) >= need_out;
      if (in) ai.push_back(v);
      if (out) {
        ao.push_back(v);
        ao_set.set(v);
      }
      if (in && out) both.push_back(v);
      if (in && !out) ai_only.push_back(v);
    }
    // s = 2
    if (static_cast<int>(both.size()) >= k) {
      int cap = opt.mode == Mode::strict ? ceil_count(Rational(k) / (opt.eps * opt.eps)) : std::max(4 * k, 12);
      Vertices y = extremal::transitive_up_to(t, both, cap, opt.budget);
      auto mid_ok = [&]() -> std::optional<TransChain> {
        const int n = static_cast<int>(y.size());
        if (n < k) return std::nullopt;
        std::vector<int> idx(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
        for (int tries = 0; tries < 20000; ++tries) {
          Vertices m;
          Bitset ci = a0_set, co = at_set;
          for (int i : idx) {
            Vertex v = y[static_cast<std::size_t>(i)];
            m.push_back(v);
            ci &= t.in(v);
            co &= t.out(v);
          }
          if (ci.count() >= k && co.count() >= k) {
            auto l = extremal::find_transitive(t, ci.to_vector(), k, opt.budget);
            auto r = l ? extremal::find_transitive(t, co.to_vector(), k, opt.budget) : std::nullopt;
            if (l && r) return TransChain{{*l, m, *r}, {}, false};
          }
          int i = k - 1;
          while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
          if (i < 0) break;
          ++idx[static_cast<std::size_t>(i)];
          for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
        }
        return std::nullopt;
      }();
      if (mid_ok) return ok(*mid_ok, 2);
    }
    // s = 3
    Rational d = (ai_only.empty() || ao.empty()) ? Rational(0) : density(t, ai_only, ao);
    const bool dense = opt.mode == Mode::strict ? d > opt.eps : d > 0;
    if (dense) {
      int top = opt.mode == Mode::strict ? ceil_count(Rational(k) / opt.eps) : 4 * k;
      for (int sz = top; sz >= k; --sz) {
        auto p = extremal::try_transitive_pair(t, ai_only, ao, sz, derive_seed(opt.seed, round * 64 + sz),
                                               detail::drc_options(opt));
        if (!p) continue;
        auto left = detail::anchored_subset(t, p->x, a0_set, Direction::in, k, opt.budget);
        if (!left) continue;
        auto right = detail::anchored_subset(t, p->y, at_set, Direction::out, k, opt.budget);
        if (!right) continue;
        return ok(TransChain{{left->second, left->first, right->first, right->second}, {}, false}, 3);
      }
    }
    if (opt.mode == Mode::strict && dense) break;
    // repair: move A^I \ A^O to the end of the middle interval
    Bitset moved = to_bitset(t, ai_only);
    const int begin = split.blocks[1].begin;
    const int end = split.blocks[static_cast<std::size_t>(last - 1)].end;
    Ordering next = median::move_to_interval_end(t, split.ord, moved, begin, end);
    if (next.backward() >= split.ord.backward()) break;
    ++improvements;
    split.ord = std::move(next);
  }
  throw ConnectFailure("med_connect_short: no connection after " + std::to_string(improvements) +
                           " ordering improvements",
                       split.ord.perm(), split.ord.forward(), improvements);
}

/// Chain X_0 => ... => X_s with s <= 5 from X (in A_0) to X' (in A_t): one
/// hop from each end into the first/last four blocks, then the short
/// connection between the landing sets.
inline ConnectResult med_connect(const Tournament& t, const IntervalSplit& split0, std::span<const Vertex> x,
                                 std::span<const Vertex> xp, const Bitset& f, int k, const SeqOptions& opt = {}) {
  if (k < 1) throw InputError("k must be at least 1");
  const int last = split0.count() - 1;
  for (auto s : {x, xp}) {
    const int sz = static_cast<int>(s.size());
    if (opt.mode == Mode::strict ? sz != 4 * k : sz < k)
      throw InputError("med_connect needs |X| = |X'| = 4k, got " + std::to_string(sz));
    if (!is_transitive_order(t, s)) throw InputError("med_connect needs transitive end sets in order");
  }
  if (last < 2) throw InputError("med_connect needs at least one middle block");
  detail::require_subset(t, x, split0.block(0), "med_connect");
  detail::require_subset(t, xp, split0.block(last), "med_connect");
  if (opt.mode == Mode::strict) {
    const int m = detail::equal_block_size(split0, 0, last);
    if (m < 0) throw InputError("med_connect needs blocks of equal size");
    if (2 * static_cast<std::int64_t>(f.count()) > m) throw DomainError("med_connect: |F| > m/2");
    if (last < 60 || BigInt(m) < 100 * pow2(static_cast<unsigned>(40400 * k)))
      throw InfeasibleError("strict med_connect needs t >= 60 and m >= 100*2^{40400k}");
  }
  struct Landing {
    int block;
    Vertices end;  // k-subset of X or X'
    Vertices land;
  };
  auto landings = [&](std::span<const Vertex> from, int lo, int hi, Direction d) {
    std::vector<Landing> out;
    for (int i = lo; i <= hi; ++i) {
      Bitset target = to_bitset(t, detail::block_minus(split0, i, f));
      auto best = extremal::best_common_subset(t, from, target, k, d);
      if (best && best->common.count() >= 1) out.push_back({i, best->x, best->common.to_vector()});
    }
    return out;
  };
  auto front = landings(x, 1, std::min(4, last - 1), Direction::out);
  auto back = landings(xp, std::max(1, last - 4), last - 1, Direction::in);
  struct Pairing {
    std::size_t a, b;
    std::size_t score;
  };
  std::vector<Pairing> pairs;
  for (std::size_t a = 0; a < front.size(); ++a)
    for (std::size_t b = 0; b < back.size(); ++b)
      if (front[a].block <= back[b].block)
        pairs.push_back({a, b, std::min(front[a].land.size(), back[b].land.size())});
  std::stable_sort(pairs.begin(), pairs.end(), [](const Pairing& p, const Pairing& q) {
    return p.score > q.score;
  });

  IntervalSplit split = split0;
  int improvements = 0;
  for (const auto& p : pairs) {
    const Landing& L = front[p.a];
    const Landing& R = back[p.b];
    auto wrap = [&](TransChain inner, int branch) {
      TransChain c;
      c.blocks.push_back(L.end);
      for (auto& b : inner.blocks) c.blocks.push_back(std::move(b));
      c.blocks.push_back(R.end);
      if (!check_chain(t, c)) throw InternalError("med_connect produced an invalid chain");
      return ConnectResult{std::move(c), split.ord, improvements, branch};
    };
    if (R.block - L.block >= 2) {
      if (opt.mode == Mode::strict && R.block - L.block < 50) continue;
      IntervalSplit sub = split.sub(L.block, R.block);
      try {
        ConnectResult r = med_connect_short(t, sub, L.land, R.land, f, k, opt);
        improvements += r.improvements;
        split.ord = r.ord;
        return wrap(std::move(r.chain), r.branch + 2);
      } catch (const ConnectFailure& e) {
        improvements += e.improvements;
        split.ord = Ordering::from(t, e.perm, OrderingMode::given);
      }
    } else if (opt.mode == Mode::opportunistic && R.block - L.block == 1) {
      auto tp = extremal::try_transitive_pair(t, L.land, R.land, k, derive_seed(opt.seed, 77), detail::drc_options(opt));
      if (tp) return wrap(TransChain{{tp->x, tp->y}, {}, false}, 3);
    } else if (opt.mode == Mode::opportunistic) {
      Bitset both = to_bitset(t, L.land) & to_bitset(t, R.land);
      if (auto m = extremal::find_transitive(t, both.to_vector(), k, opt.budget))
        return wrap(TransChain{{*m}, {}, false}, 2);
    }
  }
  throw ConnectFailure("med_connect: no landing pair could be connected", split.ord.perm(), split.ord.forward(),
                       improvements);
}

// ---------------------------------------------------------------------------
// Assembly

/// Concatenates the chain.  Any k+1 consecutive positions meet at most two
/// consecutive blocks when every block has >= k vertices.
inline Vertices assemble_path_power(const Tournament& t, const TransChain& chain, int k) {
  if (k < 1) throw InputError("k must be at least 1");
  if (chain.cyclic) throw InputError("assemble_path_power needs a non-cyclic chain");
  if (chain.blocks.empty()) return {};
  if (chain.blocks.size() > 1)
    for (std::size_t i = 0; i < chain.blocks.size(); ++i)
      if (static_cast<int>(chain.blocks[i].size()) < k)
        throw DomainError("assemble_path_power: block " + std::to_string(i) + " has fewer than k vertices");
  if (Verdict v = check_chain(t, chain); !v) throw DomainError("assemble_path_power: " + v.clause + ": " + v.detail);
  Vertices seq;
  for (const auto& b : chain.blocks) seq.insert(seq.end(), b.begin(), b.end());
  if (!verify_path_power(t, seq, k)) throw InternalError("assembled path power failed verification");
  return seq;
}

inline Vertices assemble_cycle_power(const Tournament& t, const TransChain& chain, int k) {
  if (k < 1) throw InputError("k must be at least 1");
  if (!chain.cyclic) throw InputError("assemble_cycle_power needs a cyclic chain");
  if (chain.blocks.size() < 2) throw DomainError("assemble_cycle_power needs at least two blocks");
  for (std::size_t i = 0; i < chain.blocks.size(); ++i)
    if (static_cast<int>(chain.blocks[i].size()) < k)
      throw DomainError("assemble_cycle_power: block " + std::to_string(i) + " has fewer than k vertices");
  if (Verdict v = check_chain(t, chain); !v) throw DomainError("assemble_cycle_power: " + v.clause + ": " + v.detail);
  Vertices cyc;
  for (const auto& b : chain.blocks) cyc.insert(cyc.end(), b.begin(), b.end());
  if (!verify_cycle_power(t, cyc, k)) throw InternalError("assembled cycle power failed verification");
  return cyc;
}

/// Concatenation of arbitrary pieces (thin pieces allowed), kept only when the
/// result verifies.
inline std::optional<Vertices> concat_checked(const Tournament& t, const std::vector<Vertices>& pieces, int k) {
  Vertices seq;
  for (const auto& p : pieces) seq.insert(seq.end(), p.begin(), p.end());
  if (!verify_path_power(t, seq, k)) return std::nullopt;
  return seq;
}

// ---------------------------------------------------------------------------
// Contiguous segments of a sequence

/// start[j] = smallest i such that seq[i..j] is a k-th power of a path.
inline std::vector<int> segment_starts(const Tournament& t, std::span<const Vertex> seq, int k) {
  const int n = static_cast<int>(seq.size());
  std::vector<int> start(static_cast<std::size_t>(n), 0);
  for (int j = 0; j < n; ++j) {
    int lo = j == 0 ? 0 : start[static_cast<std::size_t>(j - 1)];
    for (int d = 1; d <= k && j - d >= lo; ++d)
      if (!t.edge(seq[static_cast<std::size_t>(j - d)], seq[static_cast<std::size_t>(j)])) {
        lo = j - d + 1;
        break;
      }
    start[static_cast<std::size_t>(j)] = lo;
  }
  return start;
}

inline Vertices longest_segment(const Tournament& t, std::span<const Vertex> seq, int k) {
  auto start = segment_starts(t, seq, k);
  int best_len = 0, best_end = -1;
  for (int j = 0; j < static_cast<int>(seq.size()); ++j) {
    int len = j - start[static_cast<std::size_t>(j)] + 1;
    if (len > best_len) {
      best_len = len;
      best_end = j;
    }
  }
  if (best_end < 0) return {};
  return Vertices(seq.begin() + (best_end - best_len + 1), seq.begin() + best_end + 1);
}

/// Left-to-right cut into maximal k-th powers of paths.
inline std::vector<Vertices> greedy_segments(const Tournament& t, std::span<const Vertex> seq, int k) {
  std::vector<Vertices> out;
  std::size_t i = 0;
  while (i < seq.size()) {
    std::size_t j = i + 1;
    while (j < seq.size()) {
      bool ok = true;
      for (std::size_t d = 1; d <= static_cast<std::size_t>(k) && d <= j - i; ++d)
        if (!t.edge(seq[j - d], seq[j])) {
          ok = false;
          break;
        }
      if (!ok) break;
      ++j;
    }
    out.emplace_back(seq.begin() + static_cast<long>(i), seq.begin() + static_cast<long>(j));
    i = j;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Path powers inside a vertex set

struct PathPowerFind {
  Vertices sequence;
  bool met = false;
  std::string method;
};

struct FindOptions {
  SeqOptions seq{};
  int restarts = 8;
  int oracle_max_n = 12;
};

/// Best verified k-th power of a path inside W: the exact oracle for small W;
/// otherwise the longest of (a) the longest contiguous segment of a median
/// ordering of T[W] and (b) ordered walks across its blocks.
inline PathPowerFind find_path_power(const Tournament& t, std::span<const Vertex> w, int k, int target_len,
                                     std::uint64_t seed, const FindOptions& opt = {}) {
  if (k < 1) throw InputError("k must be at least 1");
  if (w.empty()) throw InputError("find_path_power needs a nonempty vertex set");
  check_vertices(t, w, "find_path_power");
  if (has_duplicates(w)) throw InputError("find_path_power: repeated vertex");
  const Tournament sub = t.induced(w);
  auto lift = [&](const Vertices& local) {
    Vertices g;
    for (Vertex v : local) g.push_back(w[static_cast<std::size_t>(v)]);
    return g;
  };
  PathPowerFind best;
  auto offer = [&](const Vertices& local, const char* how) {
    if (local.size() > best.sequence.size()) {
      best.sequence = lift(local);
      best.method = how;
    }
  };
  const int n = sub.size();
  if (n <= opt.oracle_max_n && n <= opt.seq.budget.max_n_path_search) {
    offer(oracle::max_path_power_len(sub, k, opt.seq.budget).witness, "oracle");
  } else {
    median::MedianOptions mo;
    mo.seed = seed;
    mo.restarts = opt.restarts;
    mo.budget = opt.seq.budget;
    Ordering ord = median::median_order(sub, mo);
    offer(longest_segment(sub, ord.perm(), k), "segment");
    if (static_cast<int>(best.sequence.size()) < std::min(target_len, n)) {
      Bitset none(sub.size());
      for (int m : {8 * k, 4 * k, 2 * k + 1}) {
        if (m > n) continue;
        auto split = median::split_intervals(ord, m, median::Align::remainder_last);
        if (split.count() < 2) continue;
        Vertices x = extremal::transitive_up_to(sub, split.block(0), 8 * k, opt.seq.budget);
        if (static_cast<int>(x.size()) < k) continue;
        try {
          TransChain c = median_sequence(sub, split, 0, x, none, k, opt.seq);
          offer(assemble_path_power(sub, c, k), "walk");
        } catch (const NotFoundError&) {
        }
      }
    }
  }
  if (!verify_path_power(t, best.sequence, k)) throw InternalError("find_path_power produced an invalid sequence");
  best.met = static_cast<int>(best.sequence.size()) >= target_len;
  return best;
}

}  // namespace tourpow::sequencing
