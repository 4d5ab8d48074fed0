#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "tourpow/oracle.hpp"
#include "tourpow/ordering.hpp"
#include "tourpow/random.hpp"
#include "tourpow/verify.hpp"

namespace tourpow::median {

struct MedianOptions {
  OrderingMode mode = OrderingMode::local;
  std::uint64_t seed = 0;
  int restarts = 8;
  oracle::OracleBudget budget{};
};

struct Relocation {
  int from;
  int to;
  std::int64_t gain;  // forward edges gained
};

/// Best relocation of the vertex at position `p`: scans both directions
/// accumulating the change in forward edges.
inline Relocation best_relocation_of(const Tournament& t, std::span<const Vertex> perm, int p) {
  const int n = static_cast<int>(perm.size());
  const Vertex v = perm[static_cast<std::size_t>(p)];
  Relocation best{p, p, 0};
  std::int64_t g = 0;
  for (int q = p + 1; q < n; ++q) {
    g += t.edge(perm[static_cast<std::size_t>(q)], v) ? 1 : -1;
    if (g > best.gain) best = {p, q, g};
  }
  g = 0;
  for (int q = p - 1; q >= 0; --q) {
    g += t.edge(v, perm[static_cast<std::size_t>(q)]) ? 1 : -1;
    if (g > best.gain) best = {p, q, g};
  }
  return best;
}

inline void apply_relocation(Vertices& perm, int from, int to) {
  auto b = perm.begin();
  if (to > from) std::rotate(b + from, b + from + 1, b + to + 1);
  else if (to < from) std::rotate(b + to, b + from, b + from + 1);
}

/// Repeats improving single-vertex relocations until none exists.  Each
/// move gains at least one forward edge, so this terminates.
inline Vertices relocation_local_search(const Tournament& t, Vertices perm) {
  bool improved = true;
  while (improved) {
    improved = false;
    for (int p = 0; p < static_cast<int>(perm.size()); ++p) {
      Relocation r = best_relocation_of(t, perm, p);
      if (r.gain > 0) {
        apply_relocation(perm, r.from, r.to);
        improved = true;
      }
    }
  }
  return perm;
}

/// Any relocation that increases the forward count, found by trying all
/// n*n moves and recounting (independent of the incremental scan).
inline std::optional<Relocation> find_improving_relocation(const Tournament& t, const Ordering& ord) {
  const int n = ord.size();
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      if (p == q) continue;
      Vertices perm = ord.perm();
      apply_relocation(perm, p, q);
      std::int64_t back = count_backward(t, perm);
      if (back < ord.backward()) return Relocation{p, q, ord.backward() - back};
    }
  return std::nullopt;
}

inline Vertices score_order(const Tournament& t) {
  Vertices perm(static_cast<std::size_t>(t.size()));
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(),
                   [&](Vertex a, Vertex b) { return t.out_degree(a) > t.out_degree(b); });
  return perm;
}

/// Median ordering.  exact: the oracle's minimum (lexicographically smallest
/// witness).  local: best of `restarts` relocation-optimal orderings; restart
/// 0 starts from the score order, the rest from seeded shuffles; ties keep
/// the lowest restart index.
inline Ordering median_order(const Tournament& t, const MedianOptions& opt = {}) {
  if (opt.mode == OrderingMode::exact) return oracle::exact_min_backward(t, opt.budget).witness;
  if (opt.restarts < 1) throw InputError("restarts must be positive");
  std::optional<Ordering> best;
  for (int r = 0; r < opt.restarts; ++r) {
    Vertices start;
    if (r == 0) {
      start = score_order(t);
    } else {
      start.resize(static_cast<std::size_t>(t.size()));
      std::iota(start.begin(), start.end(), 0);
      Rng rng(derive_seed(opt.seed, static_cast<std::uint64_t>(r)));
      rng.shuffle(start);
    }
    auto ord = Ordering::from(t, relocation_local_search(t, std::move(start)), OrderingMode::local);
    if (!best || ord.forward() > best->forward()) best = std::move(ord);
  }
  return *best;
}

/// Improves an existing ordering to a relocation-optimal one.
inline Ordering polish(const Tournament& t, const Ordering& ord) {
  return Ordering::from(t, relocation_local_search(t, ord.perm()), OrderingMode::local);
}

/// Moves the members of `moved` lying in positions [begin, end) to the end of
/// that interval, keeping the relative order of everything else.
inline Ordering move_to_interval_end(const Tournament& t, const Ordering& ord, const Bitset& moved, int begin,
                                     int end) {
  Vertices perm = ord.perm();
  Vertices stay, go;
  for (int i = begin; i < end; ++i) (moved.test(ord.at(i)) ? go : stay).push_back(ord.at(i));
  std::copy(stay.begin(), stay.end(), perm.begin() + begin);
  std::copy(go.begin(), go.end(), perm.begin() + begin + static_cast<long>(stay.size()));
  return Ordering::from(t, std::move(perm), OrderingMode::given);
}

// ---------------------------------------------------------------------------
// Interval splits

struct Block {
  int begin;  // position in the ordering
  int end;
  int size() const { return end - begin; }
  friend bool operator==(const Block&, const Block&) = default;
};

enum class Align { remainder_first, remainder_last };

/// Consecutive blocks A_0 < ... < A_t of an ordering interval.
struct IntervalSplit {
  Ordering ord;
  std::vector<Block> blocks;
  int m = 0;

  int count() const { return static_cast<int>(blocks.size()); }
  Vertices block(int i) const {
    const Block& b = blocks[static_cast<std::size_t>(i)];
    return ord.slice(b.begin, b.end);
  }
  /// Union of blocks first..last (inclusive), in order.
  Vertices span(int first, int last) const {
    if (first > last) return {};
    return ord.slice(blocks[static_cast<std::size_t>(first)].begin, blocks[static_cast<std::size_t>(last)].end);
  }
  int block_of_position(int pos) const {
    for (int i = 0; i < count(); ++i)
      if (pos >= blocks[static_cast<std::size_t>(i)].begin && pos < blocks[static_cast<std::size_t>(i)].end) return i;
    return -1;
  }
  /// The blocks first..last as their own split (same ordering).
  IntervalSplit sub(int first, int last) const {
    IntervalSplit s{ord, {}, m};
    for (int i = first; i <= last; ++i) s.blocks.push_back(blocks[static_cast<std::size_t>(i)]);
    return s;
  }
};

/// Splits positions [begin, end) into blocks of size m; a shorter remainder
/// block goes first or last.  m > length gives a single block.
inline IntervalSplit split_intervals(const Ordering& ord, int m, Align align = Align::remainder_first, int begin = 0,
                                     int end = -1) {
  if (end < 0) end = ord.size();
  if (m < 1) throw InputError("block size must be at least 1");
  if (begin < 0 || end > ord.size() || begin > end) throw InputError("split range out of bounds");
  IntervalSplit s{ord, {}, m};
  const int len = end - begin;
  if (len == 0) return s;
  if (m >= len) {
    s.blocks.push_back({begin, end});
    return s;
  }
  const int rem = len % m;
  int pos = begin;
  if (rem && align == Align::remainder_first) {
    s.blocks.push_back({pos, pos + rem});
    pos += rem;
  }
  while (pos + m <= end - (align == Align::remainder_last ? rem : 0)) {
    s.blocks.push_back({pos, pos + m});
    pos += m;
  }
  if (rem && align == Align::remainder_last) s.blocks.push_back({pos, end});
  return s;
}

/// With blocks A_0..A_t of equal size m: every v in A_0 has at least
/// (t-2)m/2 out-neighbours in A_1..A_{t-1}, and every v in A_t as many
/// in-neighbours.  Holds on every relocation-optimal ordering.
inline Verdict check_median_degrees(const Tournament& t, const IntervalSplit& split) {
  if (split.count() < 2) return Verdict::pass();
  const int m = split.blocks.front().size();
  for (const auto& b : split.blocks)
    if (b.size() != m) throw InputError("check_median_degrees needs blocks of equal size");
  const int tt = split.count() - 1;
  const std::int64_t need2 = static_cast<std::int64_t>(tt - 2) * m;  // twice the bound
  Bitset middle = to_bitset(t, split.span(1, tt - 1));
  for (Vertex v : split.block(0)) {
    std::int64_t d = t.degree_into(v, middle, Direction::out);
    if (2 * d < need2)
      return Verdict::fail("first-block out-degree",
                           "vertex " + std::to_string(v) + " has " + std::to_string(d) + " out-neighbours, needs " +
                               std::to_string(need2) + "/2",
                           {v});
  }
  for (Vertex v : split.block(tt)) {
    std::int64_t d = t.degree_into(v, middle, Direction::in);
    if (2 * d < need2)
      return Verdict::fail("last-block in-degree",
                           "vertex " + std::to_string(v) + " has " + std::to_string(d) + " in-neighbours, needs " +
                               std::to_string(need2) + "/2",
                           {v});
  }
  return Verdict::pass();
}

}  // namespace tourpow::median
