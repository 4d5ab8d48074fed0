#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "tourpow/oracle.hpp"
#include "tourpow/random.hpp"
#include "tourpow/tournament.hpp"

namespace tourpow::construct {

inline Tournament transitive_tournament(int n) { return Tournament(n); }

/// Every pair oriented by an independent fair coin.
inline Tournament random_tournament(int n, std::uint64_t seed) {
  Tournament t(n);
  Rng rng(seed);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.coin()) t.orient(j, i);
  return t;
}

/// Transitive tournament with each edge reversed independently with
/// probability p.  Backward edges with respect to the identity ordering are
/// exactly the reversed ones.
inline Tournament random_reversal(int n, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw InputError("reversal probability must lie in [0,1]");
  Tournament t(n);
  Rng rng(seed);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.bernoulli(p)) t.orient(j, i);
  return t;
}

inline bool is_prime(int q) {
  if (q < 2) return false;
  for (int d = 2; d * d <= q; ++d)
    if (q % d == 0) return false;
  return true;
}

/// Quadratic-residue tournament: i -> j iff j - i is a nonzero square mod q.
inline Tournament paley(int q) {
  if (q > 10000 || !is_prime(q) || q % 4 != 3)
    throw DomainError("Paley tournament needs a prime q = 3 (mod 4), q <= 10^4; got " + std::to_string(q));
  std::vector<char> residue(static_cast<std::size_t>(q), 0);
  for (int x = 1; x < q; ++x) residue[static_cast<std::size_t>((x * x) % q)] = 1;
  Tournament t(q);
  for (int i = 0; i < q; ++i)
    for (int j = i + 1; j < q; ++j)
      if (!residue[static_cast<std::size_t>((j - i) % q)]) t.orient(j, i);
  return t;
}

struct Blowup {
  Tournament tournament;
  std::vector<int> part;        // part[v] = block index of v
  std::vector<Vertices> blocks;  // consecutive vertex ranges
};

/// Places the given blocks side by side with every cross edge oriented from
/// the lower-indexed block to the higher one.
inline Blowup blowup(std::span<const Tournament> inners) {
  if (inners.empty()) throw InputError("blowup needs at least one block");
  int n = 0;
  for (const auto& b : inners) n += b.size();
  Blowup out{Tournament(n), std::vector<int>(static_cast<std::size_t>(n)), {}};
  int base = 0;
  for (std::size_t bi = 0; bi < inners.size(); ++bi) {
    const auto& b = inners[bi];
    Vertices blk;
    for (int i = 0; i < b.size(); ++i) {
      blk.push_back(base + i);
      out.part[static_cast<std::size_t>(base + i)] = static_cast<int>(bi);
      for (int j = i + 1; j < b.size(); ++j)
        if (b.edge(j, i)) out.tournament.orient(base + j, base + i);
    }
    out.blocks.push_back(std::move(blk));
    base += b.size();
  }
  return out;
}

/// Largest-first known TT_k-free tournaments on at least 2^{k/2} vertices,
/// then seeded random search validated by the exact oracle.
inline Tournament no_tt_block(int k, std::uint64_t seed, int attempts = 2000,
                              const oracle::OracleBudget& budget = {}) {
  if (k < 3) throw DomainError("no_tt_block needs k >= 3");
  const int need = static_cast<int>(std::ceil(std::pow(2.0, k / 2.0) - 1e-9));
  auto tt_free = [&](const Tournament& t) {
    return static_cast<int>(oracle::max_transitive(t, budget).size()) < k;
  };
  for (int q : {3, 7, 11}) {
    if (q < need) continue;
    if (q > budget.max_subset_bits) break;
    Tournament t = paley(q);
    if (tt_free(t)) return t;
  }
  if (need > budget.max_subset_bits)
    throw NotFoundError("no_tt_block(" + std::to_string(k) + "): " + std::to_string(need) +
                        " vertices exceed the oracle budget");
  for (int a = 0; a < attempts; ++a) {
    Tournament t = random_tournament(need, derive_seed(seed, static_cast<std::uint64_t>(a)));
    if (tt_free(t)) return t;
  }
  throw NotFoundError("no_tt_block(" + std::to_string(k) + "): search budget exhausted");
}

enum class InnerKind { transitive, random, paley, cycle3, no_tt };

/// Generator for the inner tournament of every block of a blow-up.
struct InnerSpec {
  InnerKind kind = InnerKind::random;
  int param = 0;  // k for no_tt
};

inline Tournament make_inner(const InnerSpec& spec, int size, std::uint64_t seed) {
  switch (spec.kind) {
    case InnerKind::transitive: return transitive_tournament(size);
    case InnerKind::random: return random_tournament(size, seed);
    case InnerKind::paley: return paley(size);
    case InnerKind::cycle3:
      if (size != 3) throw InputError("cycle3 inner blocks have size 3");
      return paley(3);
    case InnerKind::no_tt: {
      Tournament b = no_tt_block(spec.param, seed);
      if (b.size() < size) throw InputError("no_tt block smaller than requested block size");
      Vertices first;
      for (int i = 0; i < size; ++i) first.push_back(i);
      return b.induced(first);
    }
  }
  throw InputError("unknown inner generator");
}

inline Blowup blowup(std::span<const int> sizes, const InnerSpec& inner, std::uint64_t seed) {
  std::vector<Tournament> blocks;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] < 1) throw InputError("block sizes must be positive");
    blocks.push_back(make_inner(inner, sizes[i], derive_seed(seed, i)));
  }
  return blowup(blocks);
}

}  // namespace tourpow::construct
