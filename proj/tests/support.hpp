// Independent brute-force references for the test suites.  Nothing here
// calls into the library's oracle or search code: only Tournament::edge.
#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "tourpow/tourpow.hpp"

namespace tptest {

using tourpow::Tournament;
using tourpow::Vertex;
using tourpow::Vertices;

inline Tournament from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
  Tournament t(n);
  for (auto [u, v] : edges) t.orient(u, v);
  return t;
}

/// 0 -> 1 -> 2 -> 0
inline Tournament c3() { return from_edges(3, {{0, 1}, {1, 2}, {2, 0}}); }

inline Vertices iota(int n, int from = 0) {
  Vertices v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), from);
  return v;
}

inline std::int64_t backward_of(const Tournament& t, const Vertices& perm) {
  std::int64_t b = 0;
  for (std::size_t i = 0; i < perm.size(); ++i)
    for (std::size_t j = i + 1; j < perm.size(); ++j)
      if (t.edge(perm[j], perm[i])) ++b;
  return b;
}

/// Minimum backward count over all n! permutations.
inline std::int64_t brute_min_backward(const Tournament& t) {
  Vertices p = iota(t.size());
  std::int64_t best = INT64_MAX;
  do best = std::min(best, backward_of(t, p));
  while (std::next_permutation(p.begin(), p.end()));
  return best;
}

inline bool has_triangle(const Tournament& t, const Vertices& s) {
  for (Vertex a : s)
    for (Vertex b : s)
      for (Vertex c : s)
        if (a != b && b != c && a != c && t.edge(a, b) && t.edge(b, c) && t.edge(c, a)) return true;
  return false;
}

/// Size of a greedily built vertex-disjoint family of cyclic triangles; a lower
/// bound on the backward count of every ordering.
inline std::int64_t greedy_triangle_packing(const Tournament& t) {
  const int n = t.size();
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  std::int64_t count = 0;
  for (Vertex a = 0; a < n; ++a)
    for (Vertex b = 0; b < n && !used[static_cast<std::size_t>(a)]; ++b) {
      if (used[static_cast<std::size_t>(b)] || !t.edge(a, b)) continue;
      for (Vertex c = 0; c < n; ++c)
        if (!used[static_cast<std::size_t>(c)] && c != a && c != b && t.edge(b, c) && t.edge(c, a)) {
          used[static_cast<std::size_t>(a)] = used[static_cast<std::size_t>(b)] = used[static_cast<std::size_t>(c)] = 1;
          ++count;
          break;
        }
    }
  return count;
}

inline bool all_forward(const Tournament& t, const Vertices& a, const Vertices& b) {
  for (Vertex x : a)
    for (Vertex y : b)
      if (x == y || !t.edge(x, y)) return false;
  return true;
}

/// Largest transitive subset by scanning all 2^n masks.
inline int brute_max_transitive(const Tournament& t) {
  const int n = t.size();
  int best = 0;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    Vertices s;
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1u) s.push_back(i);
    if (static_cast<int>(s.size()) > best && !has_triangle(t, s)) best = static_cast<int>(s.size());
  }
  return best;
}

inline bool is_path_power(const Tournament& t, const Vertices& seq, int k) {
  for (std::size_t i = 0; i < seq.size(); ++i)
    for (std::size_t j = i + 1; j < seq.size(); ++j) {
      if (seq[i] == seq[j]) return false;
      if (j - i <= static_cast<std::size_t>(k) && !t.edge(seq[i], seq[j])) return false;
    }
  return true;
}

inline bool is_cycle_power(const Tournament& t, const Vertices& cyc, int k) {
  const std::size_t L = cyc.size();
  for (std::size_t i = 0; i < L; ++i)
    for (std::size_t j = i + 1; j < L; ++j)
      if (cyc[i] == cyc[j]) return false;
  if (L <= 2) return true;
  for (std::size_t i = 0; i < L; ++i)
    for (std::size_t d = 1; d <= std::min<std::size_t>(static_cast<std::size_t>(k), L - 1); ++d)
      if (!t.edge(cyc[i], cyc[(i + d) % L])) return false;
  return true;
}

/// Longest k-th power of a path: depth-first over all sequences, checking
/// only the newest vertex against its k predecessors.
inline int brute_max_path_power(const Tournament& t, int k) {
  const int n = t.size();
  int best = 0;
  Vertices seq;
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  auto rec = [&](auto&& self) -> void {
    best = std::max(best, static_cast<int>(seq.size()));
    if (best == n) return;
    for (int v = 0; v < n; ++v) {
      if (used[static_cast<std::size_t>(v)]) continue;
      bool ok = true;
      for (std::size_t back = 1; back <= static_cast<std::size_t>(k) && back <= seq.size() && ok; ++back)
        ok = t.edge(seq[seq.size() - back], v);
      if (!ok) continue;
      used[static_cast<std::size_t>(v)] = 1;
      seq.push_back(v);
      self(self);
      seq.pop_back();
      used[static_cast<std::size_t>(v)] = 0;
    }
  };
  rec(rec);
  return best;
}

/// Longest k-th power of a cycle of length >= 3 (0 when none).
inline int brute_max_cycle_power(const Tournament& t, int k) {
  const int n = t.size();
  int best = 0;
  Vertices seq;
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  // the smallest vertex of the cycle is placed first
  for (int s = 0; s < n; ++s) {
    seq = {s};
    used.assign(static_cast<std::size_t>(n), 0);
    used[static_cast<std::size_t>(s)] = 1;
    auto rec_from = [&](auto&& self) -> void {
      if (seq.size() >= 3 && static_cast<int>(seq.size()) > best && is_cycle_power(t, seq, k))
        best = static_cast<int>(seq.size());
      for (int v = s + 1; v < n; ++v) {
        if (used[static_cast<std::size_t>(v)] || !t.edge(seq.back(), v)) continue;
        used[static_cast<std::size_t>(v)] = 1;
        seq.push_back(v);
        self(self);
        seq.pop_back();
        used[static_cast<std::size_t>(v)] = 0;
      }
    };
    rec_from(rec_from);
  }
  return best;
}

/// reach[u][v]: v reachable from u, by Floyd-Warshall.
inline std::vector<std::vector<char>> reachability(const Tournament& t) {
  const int n = t.size();
  std::vector<std::vector<char>> r(static_cast<std::size_t>(n), std::vector<char>(static_cast<std::size_t>(n), 0));
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) r[u][v] = u == v || t.edge(u, v);
  for (int w = 0; w < n; ++w)
    for (int u = 0; u < n; ++u)
      if (r[u][w])
        for (int v = 0; v < n; ++v)
          if (r[w][v]) r[u][v] = 1;
  return r;
}

inline bool is_partition_of(const Tournament& t, const std::vector<Vertices>& parts, int k) {
  std::vector<int> hit(static_cast<std::size_t>(t.size()), 0);
  for (const auto& p : parts) {
    if (p.empty() || !is_path_power(t, p, k)) return false;
    for (Vertex v : p) ++hit[static_cast<std::size_t>(v)];
  }
  return std::all_of(hit.begin(), hit.end(), [](int h) { return h == 1; });
}

/// Hand-built k-absorber on fresh vertices.  The sets S_0..S_r and Q are laid
/// out around a cycle of blocks; every block-to-block edge is oriented the
/// way the definition needs, everything else points forward in label order.
struct BuiltAbsorber {
  Tournament t;
  tourpow::absorber::Absorber h;
};

inline BuiltAbsorber build_absorber(int k, int r_prime, int r, int extra = 0) {
  const int s = 2 * k;
  const int n = (r + 1) * s + r_prime + extra;
  Tournament t(n);
  tourpow::absorber::Absorber h;
  h.k = k;
  h.r_prime = r_prime;
  int next = 0;
  for (int i = 0; i <= r; ++i) {
    h.S.push_back(iota(s, next));
    next += s;
  }
  h.Q = iota(r_prime, next);
  auto force = [&](const Vertices& a, const Vertices& b) {
    for (Vertex x : a)
      for (Vertex y : b) t.orient(x, y);
  };
  for (int i = 0; i < r; ++i) force(h.S[static_cast<std::size_t>(i)], h.S[static_cast<std::size_t>(i + 1)]);
  force(h.S[static_cast<std::size_t>(r)], h.S[0]);
  force(h.S[0], h.Q);
  force(h.Q, h.S[static_cast<std::size_t>(r_prime + 1)]);
  for (int i = 1; i <= r_prime; ++i) {
    Vertex q = h.Q[static_cast<std::size_t>(i - 1)];
    force(h.S[static_cast<std::size_t>(i)], {q});
    force({q}, h.S[static_cast<std::size_t>(i + 1)]);
  }
  return {std::move(t), std::move(h)};
}

}  // namespace tptest
