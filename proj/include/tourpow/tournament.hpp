#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tourpow/bitset.hpp"
#include "tourpow/errors.hpp"

namespace tourpow {

enum class Direction { out, in };

/// Complete oriented graph on vertices 0..n-1 stored as a dense matrix of
/// out-neighbourhood rows.  A freshly constructed tournament is transitive
/// (i -> j for i < j); generators reorient edges with orient().
class Tournament {
 public:
  static constexpr int kMaxVertices = 16384;

  explicit Tournament(int n) : n_(n) {
    if (n < 1) throw InputError("tournament needs at least one vertex");
    if (n > kMaxVertices)
      throw InputError("tournament has " + std::to_string(n) + " vertices; cap is " +
                       std::to_string(kMaxVertices));
    out_.assign(static_cast<std::size_t>(n), Bitset(n));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) out_[static_cast<std::size_t>(i)].set(j);
  }

  int size() const { return n_; }

  bool edge(Vertex u, Vertex v) const { return out_[static_cast<std::size_t>(u)].test(v); }

  /// Makes u -> v (and therefore removes v -> u).
  void orient(Vertex u, Vertex v) {
    if (u == v) throw InputError("cannot orient a loop");
    out_[static_cast<std::size_t>(u)].set(v);
    out_[static_cast<std::size_t>(v)].reset(u);
  }

  const Bitset& out(Vertex v) const { return out_[static_cast<std::size_t>(v)]; }

  Bitset in(Vertex v) const {
    Bitset b = out_[static_cast<std::size_t>(v)];
    b.flip();
    b.reset(v);
    return b;
  }

  Bitset neighbours(Vertex v, Direction d) const { return d == Direction::out ? out(v) : in(v); }

  int out_degree(Vertex v) const { return out(v).count(); }

  /// Number of neighbours of v inside `set` in direction d.
  int degree_into(Vertex v, const Bitset& set, Direction d) const {
    int o = out(v).and_count(set);
    if (d == Direction::out) return o;
    return set.count() - o - (set.test(v) ? 1 : 0);
  }

  Tournament induced(std::span<const Vertex> vs) const {
    Tournament t(static_cast<int>(vs.size()));
    for (std::size_t i = 0; i < vs.size(); ++i)
      for (std::size_t j = i + 1; j < vs.size(); ++j)
        if (!edge(vs[i], vs[j])) t.orient(static_cast<Vertex>(j), static_cast<Vertex>(i));
    return t;
  }

  Tournament reversed() const {
    Tournament t(n_);
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j)
        if (edge(i, j)) t.orient(j, i);
        else t.orient(i, j);
    return t;
  }

  friend bool operator==(const Tournament&, const Tournament&) = default;

 private:
  int n_;
  std::vector<Bitset> out_;
};

// ---------------------------------------------------------------------------
// Vertex-set helpers

inline void check_vertices(const Tournament& t, std::span<const Vertex> vs, const char* what) {
  for (Vertex v : vs)
    if (v < 0 || v >= t.size())
      throw InputError(std::string(what) + ": vertex " + std::to_string(v) + " out of range [0," +
                       std::to_string(t.size()) + ")");
}

inline Bitset to_bitset(const Tournament& t, std::span<const Vertex> vs) {
  check_vertices(t, vs, "vertex set");
  return Bitset::from(t.size(), vs);
}

inline bool has_duplicates(std::span<const Vertex> vs) {
  Vertices s(vs.begin(), vs.end());
  std::sort(s.begin(), s.end());
  return std::adjacent_find(s.begin(), s.end()) != s.end();
}

inline Vertices sorted(Vertices vs) {
  std::sort(vs.begin(), vs.end());
  return vs;
}

/// Members of `vs` not in `removed`, order preserved.
inline Vertices without(std::span<const Vertex> vs, const Bitset& removed) {
  Vertices out;
  for (Vertex v : vs)
    if (!removed.test(v)) out.push_back(v);
  return out;
}

/// Members of `vs` that lie in `keep`, order preserved.
inline Vertices restricted(std::span<const Vertex> vs, const Bitset& keep) {
  Vertices out;
  for (Vertex v : vs)
    if (keep.test(v)) out.push_back(v);
  return out;
}

/// Vertices adjacent (direction-wise) to every member of `set`: common
/// out-neighbourhood for Direction::out, common in-neighbourhood for in.
inline Bitset common_neighbours(const Tournament& t, std::span<const Vertex> set, Direction d) {
  Bitset c = Bitset::full(t.size());
  for (Vertex v : set) c &= t.neighbours(v, d);
  return c;
}

/// e(A,B): number of edges directed from A to B.
inline std::int64_t edge_count(const Tournament& t, std::span<const Vertex> a, const Bitset& b) {
  std::int64_t e = 0;
  for (Vertex v : a) e += t.out(v).and_count(b);
  return e;
}

inline std::int64_t edge_count(const Tournament& t, std::span<const Vertex> a, std::span<const Vertex> b) {
  return edge_count(t, a, to_bitset(t, b));
}

/// Strongly connected components (Tarjan), each sorted, listed in the
/// topological order of the condensation.
inline std::vector<Vertices> strongly_connected_components(const Tournament& t) {
  const int n = t.size();
  std::vector<int> index(static_cast<std::size_t>(n), -1), low(static_cast<std::size_t>(n), 0);
  std::vector<char> on_stack(static_cast<std::size_t>(n), 0);
  Vertices stack;
  std::vector<Vertices> comps;
  int counter = 0;

  struct Frame {
    Vertex v;
    Vertex next;
  };
  for (Vertex root = 0; root < n; ++root) {
    if (index[static_cast<std::size_t>(root)] != -1) continue;
    std::vector<Frame> frames{{root, 0}};
    index[static_cast<std::size_t>(root)] = low[static_cast<std::size_t>(root)] = counter++;
    stack.push_back(root);
    on_stack[static_cast<std::size_t>(root)] = 1;
    while (!frames.empty()) {
      Frame& f = frames.back();
      auto fv = static_cast<std::size_t>(f.v);
      if (f.next < n) {
        Vertex w = f.next++;
        if (!t.edge(f.v, w)) continue;
        auto wi = static_cast<std::size_t>(w);
        if (index[wi] == -1) {
          index[wi] = low[wi] = counter++;
          stack.push_back(w);
          on_stack[wi] = 1;
          frames.push_back({w, 0});
        } else if (on_stack[wi]) {
          low[fv] = std::min(low[fv], index[wi]);
        }
        continue;
      }
      if (low[fv] == index[fv]) {
        Vertices comp;
        Vertex w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[static_cast<std::size_t>(w)] = 0;
          comp.push_back(w);
        } while (w != f.v);
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
      }
      Vertex done = f.v;
      frames.pop_back();
      if (!frames.empty()) {
        auto p = static_cast<std::size_t>(frames.back().v);
        low[p] = std::min(low[p], low[static_cast<std::size_t>(done)]);
      }
    }
  }
  std::reverse(comps.begin(), comps.end());
  return comps;
}

}  // namespace tourpow
