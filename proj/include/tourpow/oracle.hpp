#pragma once

// Exhaustive ground-truth solvers.  Every constructive routine in the
// library is validated against these at small n.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "tourpow/ordering.hpp"
#include "tourpow/tournament.hpp"
#include "tourpow/verify.hpp"

namespace tourpow::oracle {

struct OracleBudget {
  int max_n_exact_ordering = 18;
  int max_subset_bits = 20;
  int max_n_path_search = 12;
  double time_limit_seconds = 0;  // 0 = unlimited

  void validate() const {
    if (max_n_exact_ordering < 1 || max_subset_bits < 1 || max_n_path_search < 1 || time_limit_seconds < 0)
      throw InputError("oracle budget values must be positive");
  }
};

namespace detail {

class Deadline {
 public:
  explicit Deadline(double seconds)
      : active_(seconds > 0),
        end_(std::chrono::steady_clock::now() +
             std::chrono::duration_cast<std::chrono::steady_clock::duration>(std::chrono::duration<double>(seconds))) {}
  void tick(const char* what) {
    if (!active_ || (++ticks_ & 0xFFF) != 0) return;
    if (std::chrono::steady_clock::now() > end_)
      throw InfeasibleError(std::string(what) + ": oracle time limit exceeded");
  }

 private:
  bool active_;
  std::chrono::steady_clock::time_point end_;
  std::uint64_t ticks_ = 0;
};

/// Out-neighbourhood rows restricted to `vs`, as masks over local indices.
inline std::vector<std::uint32_t> local_masks(const Tournament& t, std::span<const Vertex> vs) {
  std::vector<std::uint32_t> m(vs.size(), 0);
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = 0; j < vs.size(); ++j)
      if (i != j && t.edge(vs[i], vs[j])) m[i] |= std::uint32_t{1} << j;
  return m;
}

inline Vertices all_vertices(const Tournament& t) {
  Vertices v(static_cast<std::size_t>(t.size()));
  for (int i = 0; i < t.size(); ++i) v[static_cast<std::size_t>(i)] = i;
  return v;
}

}  // namespace detail

struct MinBackward {
  std::int64_t count;
  Ordering witness;
};

/// Minimum number of backward edges over all n! orderings, by dynamic
/// programming over vertex subsets.  best[S] is the cheapest way to order the
/// complement of S once S has been placed first; appending v after S creates
/// |out(v) & S| backward edges.  The witness is the lexicographically
/// smallest optimal ordering.
inline MinBackward exact_min_backward(const Tournament& t, const OracleBudget& budget = {}) {
  budget.validate();
  const int n = t.size();
  if (n > budget.max_n_exact_ordering || n > 24)
    throw InfeasibleError("exact ordering needs n <= " + std::to_string(budget.max_n_exact_ordering) +
                          ", got " + std::to_string(n));
  const auto all = detail::all_vertices(t);
  const auto out = detail::local_masks(t, all);
  const std::uint32_t full = n == 32 ? ~0U : ((std::uint32_t{1} << n) - 1);
  std::vector<std::uint16_t> best(static_cast<std::size_t>(full) + 1, 0);
  for (std::int64_t s = static_cast<std::int64_t>(full) - 1; s >= 0; --s) {
    auto set = static_cast<std::uint32_t>(s);
    std::uint16_t b = UINT16_MAX;
    std::uint32_t rest = full & ~set;
    while (rest) {
      int v = std::countr_zero(rest);
      rest &= rest - 1;
      auto c = static_cast<std::uint16_t>(std::popcount(out[static_cast<std::size_t>(v)] & set) +
                                          best[set | (std::uint32_t{1} << v)]);
      b = std::min(b, c);
    }
    best[set] = b;
  }
  Vertices perm;
  std::uint32_t placed = 0;
  while (placed != full) {
    std::uint32_t rest = full & ~placed;
    while (rest) {
      int v = std::countr_zero(rest);
      rest &= rest - 1;
      auto c = std::popcount(out[static_cast<std::size_t>(v)] & placed) + best[placed | (std::uint32_t{1} << v)];
      if (c == best[placed]) {
        perm.push_back(v);
        placed |= std::uint32_t{1} << v;
        break;
      }
    }
  }
  auto ord = Ordering::from(t, std::move(perm), OrderingMode::exact);
  if (ord.backward() != best[0]) throw InternalError("exact_min_backward witness mismatch");
  return {best[0], std::move(ord)};
}

/// Exact intransitivity eps(T) = (min backward) / n^2.
inline Rational exact_epsilon(const Tournament& t, const OracleBudget& budget = {}) {
  auto r = exact_min_backward(t, budget);
  return Rational(BigInt(r.count), BigInt(static_cast<std::int64_t>(t.size()) * t.size()));
}

/// A maximum transitive subtournament of T[W], in transitive order.  Every
/// transitive set has a source whose out-neighbourhood contains the rest, so
/// best(C) = max over v in C of 1 + best(C & out(v)); memoized over the
/// reachable candidate masks.  Ties pick the smallest source index.
/// Stops early once a set of size `target` is found (0 = no target).
inline Vertices max_transitive_in(const Tournament& t, std::span<const Vertex> w, const OracleBudget& budget = {},
                                  int target = 0) {
  budget.validate();
  if (static_cast<int>(w.size()) > budget.max_subset_bits || w.size() > 31)
    throw InfeasibleError("max_transitive needs |W| <= " + std::to_string(budget.max_subset_bits) + ", got " +
                          std::to_string(w.size()));
  if (w.empty()) return {};
  check_vertices(t, w, "max_transitive");
  const auto out = detail::local_masks(t, w);
  std::unordered_map<std::uint32_t, std::uint8_t> memo;
  detail::Deadline deadline(budget.time_limit_seconds);

  auto solve = [&](auto&& self, std::uint32_t cand) -> int {
    if (cand == 0) return 0;
    if (auto it = memo.find(cand); it != memo.end()) return it->second;
    deadline.tick("max_transitive");
    int best = 0;
    int size = std::popcount(cand);
    std::uint32_t rest = cand;
    while (rest) {
      int v = std::countr_zero(rest);
      rest &= rest - 1;
      std::uint32_t next = cand & out[static_cast<std::size_t>(v)];
      if (1 + std::popcount(next) <= best) continue;
      best = std::max(best, 1 + self(self, next));
      if (best == size) break;
    }
    memo.emplace(cand, static_cast<std::uint8_t>(best));
    return best;
  };

  const std::uint32_t full = (std::uint32_t{1} << w.size()) - 1;
  Vertices result;
  std::uint32_t cand = full;
  int remaining = solve(solve, cand);
  if (target > 0) remaining = std::min(remaining, target);
  while (remaining > 0) {
    std::uint32_t rest = cand;
    while (rest) {
      int v = std::countr_zero(rest);
      rest &= rest - 1;
      std::uint32_t next = cand & out[static_cast<std::size_t>(v)];
      if (1 + solve(solve, next) >= remaining) {
        result.push_back(w[static_cast<std::size_t>(v)]);
        cand = next;
        --remaining;
        break;
      }
    }
  }
  return result;
}

inline Vertices max_transitive(const Tournament& t, const OracleBudget& budget = {}) {
  auto all = detail::all_vertices(t);
  return max_transitive_in(t, all, budget);
}

struct PathPowerResult {
  int length;
  Vertices witness;
};

/// Longest k-th power of a path by exhaustive ordered search.  The search
/// extends a sequence by a vertex dominated by the last min(k, len) entries;
/// visiting candidates in increasing index order makes the first maximum
/// found the lexicographically smallest witness.
inline PathPowerResult max_path_power_len(const Tournament& t, int k, const OracleBudget& budget = {}) {
  budget.validate();
  if (k < 1) throw InputError("k must be at least 1");
  const int n = t.size();
  if (n > budget.max_n_path_search || n > 31)
    throw InfeasibleError("path-power search needs n <= " + std::to_string(budget.max_n_path_search));
  const auto all = detail::all_vertices(t);
  const auto out = detail::local_masks(t, all);
  std::vector<std::uint32_t> in(static_cast<std::size_t>(n), 0);
  for (int v = 0; v < n; ++v)
    for (int u = 0; u < n; ++u)
      if (out[static_cast<std::size_t>(u)] >> v & 1U) in[static_cast<std::size_t>(v)] |= std::uint32_t{1} << u;

  Vertices seq, best_seq;
  int best = 0;
  detail::Deadline deadline(budget.time_limit_seconds);
  auto dfs = [&](auto&& self, std::uint32_t used) -> void {
    deadline.tick("max_path_power_len");
    int len = static_cast<int>(seq.size());
    if (len > best) {
      best = len;
      best_seq = seq;
      if (best == n) return;
    }
    if (len + (n - std::popcount(used)) <= best) return;
    std::uint32_t window = 0;
    for (int i = std::max(0, len - k); i < len; ++i) window |= std::uint32_t{1} << seq[static_cast<std::size_t>(i)];
    for (int v = 0; v < n && best < n; ++v) {
      if (used >> v & 1U) continue;
      if ((window & ~in[static_cast<std::size_t>(v)]) != 0) continue;
      seq.push_back(v);
      self(self, used | (std::uint32_t{1} << v));
      seq.pop_back();
    }
  };
  dfs(dfs, 0);
  return {best, best_seq};
}

namespace detail {

struct CycleSearch {
  const std::vector<std::uint32_t>& in;
  int n;
  int k;
  int min_len;
  bool want_longest;
  Deadline deadline;
  Vertices seq;
  Vertices found;

  bool closes() const {
    const int len = static_cast<int>(seq.size());
    const int reach = std::min(k, len - 1);
    for (int i = 0; i < len; ++i)
      for (int d = 1; d <= reach; ++d) {
        if (i + d < len) continue;
        Vertex a = seq[static_cast<std::size_t>(i)];
        Vertex b = seq[static_cast<std::size_t>((i + d) % len)];
        if (!(in[static_cast<std::size_t>(b)] >> a & 1U)) return false;
      }
    return true;
  }

  // Returns true to stop the whole search.
  bool dfs(std::uint32_t used) {
    deadline.tick("cycle power search");
    const int len = static_cast<int>(seq.size());
    if (len >= std::max(3, min_len) && len > static_cast<int>(found.size()) && closes()) {
      found = seq;
      if (!want_longest || len == n) return true;
    }
    if (want_longest && len + (n - std::popcount(used)) <= static_cast<int>(found.size())) return false;
    std::uint32_t window = 0;
    for (int i = std::max(0, len - k); i < len; ++i) window |= std::uint32_t{1} << seq[static_cast<std::size_t>(i)];
    for (int v = seq.front() + 1; v < n; ++v) {
      if (used >> v & 1U) continue;
      if ((window & ~in[static_cast<std::size_t>(v)]) != 0) continue;
      seq.push_back(v);
      bool stop = dfs(used | (std::uint32_t{1} << v));
      seq.pop_back();
      if (stop) return true;
    }
    return false;
  }
};

inline std::optional<Vertices> cycle_search(const Tournament& t, int k, int min_len, bool want_longest,
                                            const OracleBudget& budget) {
  budget.validate();
  if (k < 1) throw InputError("k must be at least 1");
  const int n = t.size();
  if (n > budget.max_n_path_search || n > 31)
    throw InfeasibleError("cycle-power search needs n <= " + std::to_string(budget.max_n_path_search));
  if (min_len > n) return std::nullopt;
  if (!want_longest && min_len <= 1) return Vertices{0};
  if (!want_longest && min_len == 2 && n >= 2) return t.edge(0, 1) ? Vertices{0, 1} : Vertices{1, 0};
  const auto all = all_vertices(t);
  const auto out = local_masks(t, all);
  std::vector<std::uint32_t> in(static_cast<std::size_t>(n), 0);
  for (int v = 0; v < n; ++v)
    for (int u = 0; u < n; ++u)
      if (out[static_cast<std::size_t>(u)] >> v & 1U) in[static_cast<std::size_t>(v)] |= std::uint32_t{1} << u;
  CycleSearch s{in, n, k, min_len, want_longest, Deadline(budget.time_limit_seconds), {}, {}};
  for (int first = 0; first < n; ++first) {
    s.seq = {first};
    if (s.dfs(std::uint32_t{1} << first)) break;
  }
  if (s.found.empty()) return std::nullopt;
  return s.found;
}

}  // namespace detail

/// A k-th power of a cycle of length >= min_len, or nullopt after exhausting
/// every cyclic sequence (canonically rotated to start at its smallest vertex).
inline std::optional<Vertices> exists_cycle_power(const Tournament& t, int k, int min_len,
                                                  const OracleBudget& budget = {}) {
  return detail::cycle_search(t, k, min_len, false, budget);
}

/// The longest non-degenerate (length >= 3) k-th power of a cycle, if any.
inline std::optional<Vertices> longest_cycle_power(const Tournament& t, int k, const OracleBudget& budget = {}) {
  return detail::cycle_search(t, k, 3, true, budget);
}

struct Biclique {
  Vertices later;    // X: every x is after every y and x -> y
  Vertices earlier;  // Y
};

/// Sets X, Y of size s forming a complete bipartite graph of backward edges
/// with respect to `ord`.  Enumerates the earlier side Y over s-subsets in
/// lexicographic order; X is the s smallest common in-neighbours of Y placed
/// after all of Y.
inline std::optional<Biclique> backward_biclique(const Tournament& t, const Ordering& ord, int s,
                                                 const OracleBudget& budget = {}) {
  budget.validate();
  if (s < 1) throw InputError("biclique side must be at least 1");
  const int n = t.size();
  if (ord.size() != n) throw InputError("ordering size does not match tournament");
  // C(n, s) <= 2^max_subset_bits
  long double subsets = 1;
  for (int i = 0; i < s; ++i) subsets = subsets * (n - i) / (i + 1);
  if (subsets > static_cast<long double>(std::uint64_t{1} << std::min(budget.max_subset_bits, 62)))
    throw InfeasibleError("backward_biclique: C(n,s) exceeds subset budget");
  if (2 * s > n) return std::nullopt;
  detail::Deadline deadline(budget.time_limit_seconds);
  std::vector<int> idx(static_cast<std::size_t>(s));
  for (int i = 0; i < s; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    deadline.tick("backward_biclique");
    Vertices y(idx.begin(), idx.end());
    int last = 0;
    for (Vertex v : y) last = std::max(last, ord.position(v));
    Bitset cand = common_neighbours(t, y, Direction::in);
    Vertices x;
    cand.for_each([&](Vertex v) {
      if (static_cast<int>(x.size()) < s && ord.position(v) > last) x.push_back(v);
    });
    if (static_cast<int>(x.size()) == s) return Biclique{x, y};
    int i = s - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - s + i) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < s; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  return std::nullopt;
}

}  // namespace tourpow::oracle
