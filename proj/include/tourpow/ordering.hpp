#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tourpow/tournament.hpp"

namespace tourpow {

enum class OrderingMode { given, exact, local };

inline const char* to_string(OrderingMode m) {
  switch (m) {
    case OrderingMode::given: return "given";
    case OrderingMode::exact: return "exact";
    case OrderingMode::local: return "local";
  }
  return "?";
}

/// Number of backward edges (later -> earlier) of the sequence `perm`.
inline std::int64_t count_backward(const Tournament& t, std::span<const Vertex> perm) {
  Bitset prefix(t.size());
  std::int64_t back = 0;
  for (Vertex v : perm) {
    back += t.out(v).and_count(prefix);
    prefix.set(v);
  }
  return back;
}

/// A permutation of V(T) with its cached forward/backward edge counts.
class Ordering {
 public:
  Ordering() = default;

  static Ordering from(const Tournament& t, Vertices perm, OrderingMode mode = OrderingMode::given) {
    const int n = t.size();
    if (static_cast<int>(perm.size()) != n)
      throw InputError("ordering has " + std::to_string(perm.size()) + " entries for " + std::to_string(n) +
                       " vertices");
    Ordering o;
    o.pos_.assign(static_cast<std::size_t>(n), -1);
    for (int i = 0; i < n; ++i) {
      Vertex v = perm[static_cast<std::size_t>(i)];
      if (v < 0 || v >= n) throw InputError("ordering entry " + std::to_string(v) + " out of range");
      if (o.pos_[static_cast<std::size_t>(v)] != -1)
        throw InputError("ordering repeats vertex " + std::to_string(v));
      o.pos_[static_cast<std::size_t>(v)] = i;
    }
    o.backward_ = count_backward(t, perm);
    o.forward_ = static_cast<std::int64_t>(n) * (n - 1) / 2 - o.backward_;
    o.perm_ = std::move(perm);
    o.mode_ = mode;
    return o;
  }

  static Ordering identity(const Tournament& t) {
    Vertices p(static_cast<std::size_t>(t.size()));
    for (int i = 0; i < t.size(); ++i) p[static_cast<std::size_t>(i)] = i;
    return from(t, std::move(p));
  }

  int size() const { return static_cast<int>(perm_.size()); }
  const Vertices& perm() const { return perm_; }
  Vertex at(int i) const { return perm_[static_cast<std::size_t>(i)]; }
  int position(Vertex v) const { return pos_[static_cast<std::size_t>(v)]; }
  std::int64_t forward() const { return forward_; }
  std::int64_t backward() const { return backward_; }
  OrderingMode mode() const { return mode_; }
  void set_mode(OrderingMode m) { mode_ = m; }

  /// Vertices at positions [begin, end).
  Vertices slice(int begin, int end) const {
    return Vertices(perm_.begin() + begin, perm_.begin() + end);
  }

 private:
  Vertices perm_;
  std::vector<int> pos_;
  std::int64_t forward_ = 0;
  std::int64_t backward_ = 0;
  OrderingMode mode_ = OrderingMode::given;
};

struct BackwardEdge {
  Vertex from;  // later endpoint
  Vertex to;    // earlier endpoint
  int length;   // position difference
  friend bool operator==(const BackwardEdge&, const BackwardEdge&) = default;
};

/// All edges v_j -> v_i with i < j, annotated with length j - i, sorted by
/// (earlier position, later position).
inline std::vector<BackwardEdge> backward_edges(const Tournament& t, const Ordering& ord) {
  if (ord.size() != t.size()) throw InputError("ordering size does not match tournament");
  std::vector<BackwardEdge> out;
  for (int i = 0; i < ord.size(); ++i)
    for (int j = i + 1; j < ord.size(); ++j)
      if (t.edge(ord.at(j), ord.at(i))) out.push_back({ord.at(j), ord.at(i), j - i});
  return out;
}

}  // namespace tourpow
