#pragma once

#include <bit>
#include <cassert>
#include <cstdint>
#include <span>
#include <vector>

namespace tourpow {

using Vertex = std::int32_t;
using Vertices = std::vector<Vertex>;

/// Fixed-width dynamic bitset over vertex indices.  Rows of the orientation
/// matrix and every neighbourhood computation go through this type, so the
/// intersection-count primitives avoid allocating.
class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(int n) : n_(n), words_(static_cast<std::size_t>((n + 63) / 64), 0) {}

  static Bitset from(int n, std::span<const Vertex> members) {
    Bitset b(n);
    for (Vertex v : members) b.set(v);
    return b;
  }

  static Bitset full(int n) {
    Bitset b(n);
    for (auto& w : b.words_) w = ~std::uint64_t{0};
    b.trim();
    return b;
  }

  int size() const { return n_; }

  bool test(int i) const {
    assert(i >= 0 && i < n_);
    return (words_[static_cast<std::size_t>(i) >> 6] >> (i & 63)) & 1U;
  }
  void set(int i) { words_[static_cast<std::size_t>(i) >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(int i) { words_[static_cast<std::size_t>(i) >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  void assign(int i, bool value) { value ? set(i) : reset(i); }

  int count() const {
    int c = 0;
    for (auto w : words_) c += std::popcount(w);
    return c;
  }

  bool none() const {
    for (auto w : words_)
      if (w) return false;
    return true;
  }

  int and_count(const Bitset& other) const {
    assert(other.n_ == n_);
    int c = 0;
    for (std::size_t i = 0; i < words_.size(); ++i) c += std::popcount(words_[i] & other.words_[i]);
    return c;
  }

  bool intersects(const Bitset& other) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & other.words_[i]) return true;
    return false;
  }

  bool is_subset_of(const Bitset& other) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~other.words_[i]) return false;
    return true;
  }

  Bitset& operator&=(const Bitset& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  Bitset& operator|=(const Bitset& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  /// this := this \ o
  Bitset& subtract(const Bitset& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
    return *this;
  }
  Bitset& flip() {
    for (auto& w : words_) w = ~w;
    trim();
    return *this;
  }

  friend Bitset operator&(Bitset a, const Bitset& b) { return a &= b; }
  friend Bitset operator|(Bitset a, const Bitset& b) { return a |= b; }
  friend bool operator==(const Bitset&, const Bitset&) = default;

  /// Calls f(v) for each member in increasing order.
  template <class F>
  void for_each(F&& f) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t w = words_[i];
      while (w) {
        int b = std::countr_zero(w);
        f(static_cast<Vertex>(i * 64 + static_cast<std::size_t>(b)));
        w &= w - 1;
      }
    }
  }

  Vertices to_vector() const {
    Vertices out;
    out.reserve(static_cast<std::size_t>(count()));
    for_each([&](Vertex v) { out.push_back(v); });
    return out;
  }

 private:
  void trim() {
    if (n_ % 64 != 0 && !words_.empty()) words_.back() &= (std::uint64_t{1} << (n_ % 64)) - 1;
  }

  int n_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace tourpow
