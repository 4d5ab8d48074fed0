#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "tourpow/rational.hpp"
#include "tourpow/tournament.hpp"

namespace tourpow {

/// Outcome of a certificate check.  On failure `clause` names the violated
/// condition and `witness` carries the offending vertices.
struct Verdict {
  bool ok = true;
  std::string clause;
  std::string detail;
  Vertices witness;
  std::size_t count = 0;  // partitions: number of parts

  explicit operator bool() const { return ok; }

  static Verdict pass(std::size_t count = 0) {
    Verdict v;
    v.count = count;
    return v;
  }
  static Verdict fail(std::string clause, std::string detail, Vertices witness = {}) {
    Verdict v;
    v.ok = false;
    v.clause = std::move(clause);
    v.detail = std::move(detail);
    v.witness = std::move(witness);
    return v;
  }
};

/// d(A,B) = e(A,B) / (|A||B|) for disjoint nonempty A, B.
inline Rational density(const Tournament& t, std::span<const Vertex> a, std::span<const Vertex> b) {
  if (a.empty() || b.empty()) throw DomainError("density of an empty set");
  Bitset bs = to_bitset(t, b);
  Bitset as = to_bitset(t, a);
  if (as.intersects(bs)) throw DomainError("density of overlapping sets");
  if (has_duplicates(a) || has_duplicates(b)) throw InputError("density: repeated vertex");
  return Rational(BigInt(edge_count(t, a, bs)), BigInt(static_cast<std::int64_t>(a.size()) *
                                                       static_cast<std::int64_t>(b.size())));
}

/// A => B: disjoint, and every A-B edge points from A to B.
inline bool dominates(const Tournament& t, std::span<const Vertex> a, std::span<const Vertex> b) {
  Bitset bs = to_bitset(t, b);
  check_vertices(t, a, "dominates");
  for (Vertex v : a) {
    if (bs.test(v)) return false;
    if (t.out(v).and_count(bs) != bs.count()) return false;
  }
  return true;
}

/// Topological order of T[S] when it is acyclic.  A tournament is transitive
/// iff its internal out-degrees are pairwise distinct; sorting by decreasing
/// out-degree then yields the order.
inline std::optional<Vertices> is_transitive(const Tournament& t, std::span<const Vertex> s) {
  Bitset bs = to_bitset(t, s);
  if (static_cast<std::size_t>(bs.count()) != s.size()) throw InputError("is_transitive: repeated vertex");
  const int m = static_cast<int>(s.size());
  std::vector<int> slot(static_cast<std::size_t>(m), -1);
  Vertices order(static_cast<std::size_t>(m));
  for (Vertex v : s) {
    int d = t.out(v).and_count(bs);
    int p = m - 1 - d;
    if (slot[static_cast<std::size_t>(p)] != -1) return std::nullopt;
    slot[static_cast<std::size_t>(p)] = v;
    order[static_cast<std::size_t>(p)] = v;
  }
  return order;
}

inline bool is_transitive_order(const Tournament& t, std::span<const Vertex> seq) {
  for (std::size_t i = 0; i < seq.size(); ++i)
    for (std::size_t j = i + 1; j < seq.size(); ++j)
      if (!t.edge(seq[i], seq[j])) return false;
  return true;
}

/// x_i -> x_j whenever i < j <= i + k.
inline Verdict verify_path_power(const Tournament& t, std::span<const Vertex> seq, int k) {
  if (k < 1) throw InputError("k must be at least 1");
  check_vertices(t, seq, "path power");
  Bitset seen(t.size());
  for (Vertex v : seq) {
    if (seen.test(v)) return Verdict::fail("distinct", "vertex repeated", {v});
    seen.set(v);
  }
  const std::size_t len = seq.size();
  for (std::size_t i = 0; i < len; ++i)
    for (std::size_t j = i + 1; j < len && j <= i + static_cast<std::size_t>(k); ++j)
      if (!t.edge(seq[i], seq[j]))
        return Verdict::fail("edge", "missing edge at positions " + std::to_string(i) + "->" + std::to_string(j),
                             {seq[i], seq[j]});
  return Verdict::pass();
}

/// Cyclic version: x_i -> x_{i+d mod L} for d = 1..min(k, L-1).  Cycles on
/// one or two vertices are degenerate and pass.
inline Verdict verify_cycle_power(const Tournament& t, std::span<const Vertex> cyc, int k) {
  if (k < 1) throw InputError("k must be at least 1");
  check_vertices(t, cyc, "cycle power");
  Bitset seen(t.size());
  for (Vertex v : cyc) {
    if (seen.test(v)) return Verdict::fail("distinct", "vertex repeated", {v});
    seen.set(v);
  }
  const std::size_t len = cyc.size();
  if (len <= 2) return Verdict::pass();
  const std::size_t reach = std::min<std::size_t>(static_cast<std::size_t>(k), len - 1);
  for (std::size_t i = 0; i < len; ++i)
    for (std::size_t d = 1; d <= reach; ++d) {
      std::size_t j = (i + d) % len;
      if (!t.edge(cyc[i], cyc[j]))
        return Verdict::fail("edge", "missing edge at cyclic positions " + std::to_string(i) + "->" +
                                         std::to_string(j),
                             {cyc[i], cyc[j]});
    }
  return Verdict::pass();
}

/// Parts pairwise disjoint, covering V(T), each a k-th power of a path.
inline Verdict verify_partition(const Tournament& t, const std::vector<Vertices>& parts, int k) {
  if (k < 1) throw InputError("k must be at least 1");
  Bitset seen(t.size());
  for (std::size_t p = 0; p < parts.size(); ++p) {
    check_vertices(t, parts[p], "partition");
    if (parts[p].empty()) return Verdict::fail("nonempty", "part " + std::to_string(p) + " is empty");
    for (Vertex v : parts[p]) {
      if (seen.test(v)) return Verdict::fail("disjointness", "vertex in two parts", {v});
      seen.set(v);
    }
  }
  if (seen.count() != t.size()) {
    Bitset missing = seen;
    missing.flip();
    return Verdict::fail("coverage", std::to_string(missing.count()) + " vertices uncovered", missing.to_vector());
  }
  for (std::size_t p = 0; p < parts.size(); ++p) {
    Verdict v = verify_path_power(t, parts[p], k);
    if (!v) return Verdict::fail("part " + std::to_string(p), v.detail, v.witness);
  }
  return Verdict::pass(parts.size());
}

}  // namespace tourpow
