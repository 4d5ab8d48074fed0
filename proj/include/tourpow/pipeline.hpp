#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tourpow/absorber.hpp"
#include "tourpow/extremal.hpp"
#include "tourpow/median.hpp"
#include "tourpow/sequencing.hpp"

namespace tourpow::pipeline {

struct PipelineConfig {
  Mode mode = Mode::opportunistic;
  int block_size = 0;  // 0: chosen from n
  int stride = 80;
  int r_prime_cap = 4;
  int retries = extremal::kDefaultRetries;
  std::uint64_t seed = 0;
  oracle::OracleBudget budget{};
  int restarts = 8;
  int chain_set_size = 0;  // 0: 2k
  int pool_size = 0;       // 0: 4k
  int absorber_attempts = 4;
  bool find_absorbers = true;
};

inline void check_config(const PipelineConfig& c) {
  if (c.block_size < 0 || c.chain_set_size < 0 || c.pool_size < 0) throw InputError("sizes must be non-negative");
  if (c.stride < 3) throw InputError("stride must be at least 3");
  if (c.retries < 1 || c.restarts < 1) throw InputError("retries and restarts must be positive");
  if (c.r_prime_cap < 1) throw InputError("r' cap must be positive");
}

namespace detail {

inline Ordering median_of(const Tournament& t, const PipelineConfig& cfg, std::uint64_t salt) {
  median::MedianOptions mo;
  mo.seed = derive_seed(cfg.seed, salt);
  mo.restarts = cfg.restarts;
  mo.budget = cfg.budget;
  return median::median_order(t, mo);
}

inline Vertices lift(std::span<const Vertex> local, std::span<const Vertex> map) {
  Vertices g;
  g.reserve(local.size());
  for (Vertex v : local) g.push_back(map[static_cast<std::size_t>(v)]);
  return g;
}

struct Layout {
  int m;
  int stride;
};

inline Layout layout(int n, int cs, const PipelineConfig& cfg) {
  int m = cfg.block_size > 0 ? cfg.block_size
                             : std::max(3 * cs, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n)))));
  const int blocks = std::max(1, n / m);
  return {m, std::clamp(cfg.stride, 3, std::max(3, blocks / 3))};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Partition into k-th powers of paths

struct PartitionStats {
  int parts = 0;
  int absorbers = 0;
  int absorber_vertices = 0;
  int chains = 0;
  int stitched = 0;   // leftover vertices placed between transitive sets
  int stranded = 0;   // vertices covered by the final segmentation
  int singletons = 0;
  int block_size = 0;
  int stride = 0;
  std::vector<std::string> log;
};

struct PartitionResult {
  std::vector<Vertices> parts;
  PartitionStats stats;
};

namespace detail {

/// Chains X_1 => X_2 => ... over the blocks of one residue class, extracted
/// until some block runs short.  Sets have cs vertices, or k when cs-sets
/// cannot be found (opportunistic); a backward witness or failure at both
/// sizes splits the class in halves.
inline void extract_chains(const Tournament& t, const std::vector<int>& ids, std::vector<Vertices>& avail, int cs,
                           int k, std::uint64_t seed, const PipelineConfig& cfg,
                           std::vector<std::vector<Vertices>>& out, std::vector<std::string>& log) {
  if (ids.size() < 2) return;
  extremal::ChainOptions co{cfg.mode, cfg.retries, cfg.budget};
  std::vector<int> sizes{cs};
  if (cs > k && cfg.mode == Mode::opportunistic) sizes.push_back(k);
  for (int round = 0;; ++round) {
    std::optional<extremal::Chain> chain;
    for (int size : sizes) {
      std::vector<Vertices> blocks;
      for (int i : ids)
        if (static_cast<int>(avail[static_cast<std::size_t>(i)].size()) >= size)
          blocks.push_back(avail[static_cast<std::size_t>(i)]);
      if (blocks.size() != ids.size()) continue;
      try {
        auto res = extremal::transitive_chain(t, blocks, size, derive_seed(seed, static_cast<std::uint64_t>(round)), co);
        if (auto* c = std::get_if<extremal::Chain>(&res)) chain = *c;
      } catch (const NotFoundError&) {
      }
      if (chain) break;
    }
    if (!chain) {
      if (round == 0) log.push_back("class split at " + std::to_string(ids.size()) + " blocks");
      const auto mid = static_cast<long>(ids.size() / 2);
      std::vector<int> lo(ids.begin(), ids.begin() + mid), hi(ids.begin() + mid, ids.end());
      extract_chains(t, lo, avail, cs, k, derive_seed(seed, 0x10), cfg, out, log);
      extract_chains(t, hi, avail, cs, k, derive_seed(seed, 0x11), cfg, out, log);
      return;
    }
    for (std::size_t j = 0; j < ids.size(); ++j) {
      auto& a = avail[static_cast<std::size_t>(ids[j])];
      a = without(a, to_bitset(t, chain->sets[j]));
    }
    out.push_back(std::move(chain->sets));
  }
}

}  // namespace detail

/// Partition of V(T) into k-th powers of paths.  Stages: absorbers from
/// backward witnesses far apart in a median ordering, chained into one part;
/// transitive chains per residue class of blocks in the residual ordering;
/// leftover vertices stitched between transitive sets from earlier and later
/// blocks; whatever remains is cut greedily along the ordering.  Every part
/// is verified.
inline PartitionResult partition_path_powers(const Tournament& t, int k, const PipelineConfig& cfg = {}) {
  if (k < 1) throw InputError("k must be at least 1");
  check_config(cfg);
  const int n = t.size();
  if (cfg.mode == Mode::strict && BigInt(n) < pow2(static_cast<unsigned>(81000 * k)))
    throw InfeasibleError("strict partition needs blocks of size m = 2^{81000k}, but n = " + std::to_string(n));
  PartitionResult res;
  auto& st = res.stats;
  auto finish = [&]() {
    if (Verdict v = verify_partition(t, res.parts, k); !v)
      throw InternalError("partition failed verification: " + v.clause + ": " + v.detail);
    st.parts = static_cast<int>(res.parts.size());
    st.singletons = static_cast<int>(std::count_if(res.parts.begin(), res.parts.end(),
                                                   [](const Vertices& p) { return p.size() == 1; }));
    return res;
  };
  if (n == 0) return finish();
  const int cs = cfg.chain_set_size > 0 ? cfg.chain_set_size : 2 * k;
  if (cs < k) throw InputError("chain set size must be at least k");
  const int pool = cfg.pool_size > 0 ? cfg.pool_size : 4 * k;

  Ordering ord = detail::median_of(t, cfg, 0);
  if (verify_path_power(t, ord.perm(), k)) {
    res.parts.push_back(ord.perm());
    st.log.push_back("median ordering is already a path power");
    return finish();
  }

  // absorbers
  Bitset removed(n);
  std::vector<absorber::Absorber> found;
  if (cfg.find_absorbers) {
    absorber::AbsorberOptions ao{cfg.mode, cfg.retries, cfg.budget, true};
    int attempts = 0;
    for (int pass = 0; attempts < cfg.absorber_attempts; ++pass) {
      Vertices rest = without(oracle::detail::all_vertices(t), removed);
      const Tournament sub = t.induced(rest);
      const auto lay = detail::layout(sub.size(), 2 * k, cfg);
      auto split = median::split_intervals(detail::median_of(sub, cfg, 100 + static_cast<std::uint64_t>(pass)), lay.m,
                                           median::Align::remainder_first);
      const int first = (split.count() > 0 && split.blocks[0].size() < lay.m) ? 1 : 0;
      const int full = split.count() - first;
      if (full < lay.stride + 1) break;
      bool witness = false, built = false;
      for (int w = 0; w < lay.stride && !built && attempts < cfg.absorber_attempts; ++w) {
        std::vector<int> ids;
        for (int i = first + w; i < split.count(); i += lay.stride) ids.push_back(i);
        if (ids.size() < 2) continue;
        std::vector<Vertices> blocks;
        for (int i : ids) blocks.push_back(split.block(i));
        extremal::ChainOutcome out;
        try {
          out = extremal::transitive_chain(sub, blocks, 2 * k, derive_seed(cfg.seed, 0xAB00 + pass * 97 + w),
                                           {cfg.mode, cfg.retries, cfg.budget});
        } catch (const NotFoundError&) {
          continue;
        }
        auto* bw = std::get_if<extremal::BackwardWitness>(&out);
        if (!bw) continue;
        witness = true;
        ++attempts;
        const int lo = ids[static_cast<std::size_t>(bw->index)], hi = ids[static_cast<std::size_t>(bw->index + 1)];
        try {
          auto h = absorber::find_absorber(sub, split.sub(lo, hi), bw->earlier, bw->later, k, cfg.r_prime_cap,
                                           derive_seed(cfg.seed, 0xAB5 + static_cast<std::uint64_t>(attempts)), ao);
          for (auto& s : h.S) s = detail::lift(s, rest);
          h.Q = detail::lift(h.Q, rest);
          for (Vertex v : h.vertices()) removed.set(v);
          st.absorber_vertices += static_cast<int>(h.size());
          found.push_back(std::move(h));
          built = true;
        } catch (const NotFoundError& e) {
          st.log.push_back(std::string("absorber: ") + e.what());
        }
      }
      if (!witness) break;
    }
  }
  st.absorbers = static_cast<int>(found.size());
  if (!found.empty()) {
    absorber::AbsorberOptions ao{cfg.mode, cfg.retries, cfg.budget, true};
    try {
      res.parts.push_back(absorber::chain_absorbers(t, found, derive_seed(cfg.seed, 0xC4), ao));
    } catch (const NotFoundError& e) {
      st.log.push_back(std::string("absorbers kept apart: ") + e.what());
      for (const auto& h : found) res.parts.push_back(absorber::span_path(t, h, {}, {}));
    }
  }

  // residual ordering and blocks
  const Vertices rest = without(oracle::detail::all_vertices(t), removed);
  if (rest.empty()) return finish();
  const Tournament sub = t.induced(rest);
  const Ordering rord = detail::median_of(sub, cfg, 1);
  const auto lay = detail::layout(sub.size(), cs, cfg);
  st.block_size = lay.m;
  st.stride = lay.stride;
  const auto split = median::split_intervals(rord, lay.m, median::Align::remainder_first);
  const int first = (split.count() > 0 && split.blocks[0].size() < lay.m) ? 1 : 0;
  Vertices stranded = first ? split.block(0) : Vertices{};
  const int nb = split.count() - first;  // full blocks A_1..A_t live at first..first+nb-1
  std::vector<Vertices> avail;
  for (int i = first; i < split.count(); ++i) avail.push_back(split.block(i));

  // chains per residue class
  std::vector<std::vector<Vertices>> chains;
  for (int w = 0; w < lay.stride && w < nb; ++w) {
    std::vector<int> ids;
    for (int i = w; i < nb; i += lay.stride) ids.push_back(i);
    detail::extract_chains(sub, ids, avail, cs, k, derive_seed(cfg.seed, 0xC0 + static_cast<std::uint64_t>(w)), cfg,
                           chains, st.log);
  }
  st.chains = static_cast<int>(chains.size());

  // leftovers: pools of spare chain vertices before and after each leftover
  struct Home {
    int chain, set;
  };
  std::vector<int> block_of(static_cast<std::size_t>(sub.size()), -1);
  for (int i = 0; i < nb; ++i)
    for (Vertex v : split.block(first + i)) block_of[static_cast<std::size_t>(v)] = i;
  std::map<Vertex, Home> home;
  std::vector<std::vector<int>> spare(chains.size());
  for (std::size_t c = 0; c < chains.size(); ++c) {
    spare[c].resize(chains[c].size());
    for (std::size_t s = 0; s < chains[c].size(); ++s) {
      spare[c][s] = static_cast<int>(chains[c][s].size()) - k;
      for (Vertex v : chains[c][s]) home[v] = {static_cast<int>(c), static_cast<int>(s)};
    }
  }
  std::vector<Vertices> by_block(static_cast<std::size_t>(nb));
  for (const auto& [v, h] : home) by_block[static_cast<std::size_t>(block_of[static_cast<std::size_t>(v)])].push_back(v);
  Bitset reserved(sub.size());
  const int s = lay.stride, half = (lay.stride + 1) / 2;
  auto take_pool = [&](Vertex u, int lo, int hi, Direction d) {
    Vertices p;
    for (int b = std::max(0, lo); b <= std::min(nb - 1, hi) && static_cast<int>(p.size()) < pool; ++b)
      for (Vertex v : by_block[static_cast<std::size_t>(b)]) {
        if (static_cast<int>(p.size()) >= pool) break;
        if (reserved.test(v)) continue;
        const Home& h = home[v];
        int& sp = spare[static_cast<std::size_t>(h.chain)][static_cast<std::size_t>(h.set)];
        if (sp <= 0) continue;
        if (!(d == Direction::in ? sub.edge(v, u) : sub.edge(u, v))) continue;
        --sp;
        reserved.set(v);
        p.push_back(v);
      }
    return p;
  };
  struct Item {
    Vertex u;
    Vertices minus, plus;
  };
  std::map<std::pair<int, int>, std::vector<Item>> groups;
  for (int i = 0; i < nb; ++i)
    for (std::size_t j = 0; j < avail[static_cast<std::size_t>(i)].size(); ++j) {
      Vertex u = avail[static_cast<std::size_t>(i)][j];
      Item it{u, take_pool(u, i - s, i - half, Direction::in), take_pool(u, i + half, i + s, Direction::out)};
      groups[{i % (3 * s), static_cast<int>(j)}].push_back(std::move(it));
    }

  std::vector<Vertices> local_parts;
  Bitset used_spares(sub.size());
  extremal::ChainOptions co{cfg.mode, cfg.retries, cfg.budget};
  std::function<void(std::span<const Item>, std::uint64_t)> stitch = [&](std::span<const Item> run,
                                                                          std::uint64_t seed) {
    if (run.empty()) return;
    std::vector<Vertices> pools;
    for (std::size_t i = 0; i < run.size(); ++i) {
      const bool head = i == 0, tail = i + 1 == run.size();
      if (!(run[i].minus.empty() && head)) pools.push_back(run[i].minus);
      if (!(run[i].plus.empty() && tail)) pools.push_back(run[i].plus);
    }
    std::optional<extremal::Chain> ch;
    bool ok = std::all_of(pools.begin(), pools.end(), [&](const Vertices& p) { return static_cast<int>(p.size()) >= k; });
    if (ok && !pools.empty()) {
      try {
        auto r = extremal::transitive_chain(sub, pools, k, seed, co);
        if (auto* c = std::get_if<extremal::Chain>(&r)) ch = *c;
      } catch (const NotFoundError&) {
      }
    } else if (ok && run.size() == 1) {
      stranded.push_back(run[0].u);
      return;
    }
    if (ch) {
      std::vector<Vertices> pieces;
      std::size_t p = 0;
      for (std::size_t i = 0; i < run.size(); ++i) {
        const bool head = i == 0, tail = i + 1 == run.size();
        if (!(run[i].minus.empty() && head)) pieces.push_back(ch->sets[p++]);
        pieces.push_back({run[i].u});
        if (!(run[i].plus.empty() && tail)) pieces.push_back(ch->sets[p++]);
      }
      if (auto seq = sequencing::concat_checked(sub, pieces, k)) {
        for (const auto& y : ch->sets)
          for (Vertex v : y) used_spares.set(v);
        st.stitched += static_cast<int>(run.size());
        local_parts.push_back(std::move(*seq));
        return;
      }
    }
    if (run.size() == 1) {
      stranded.push_back(run[0].u);
      return;
    }
    const std::size_t mid = run.size() / 2;
    stitch(run.subspan(0, mid), derive_seed(seed, 1));
    stitch(run.subspan(mid), derive_seed(seed, 2));
  };
  std::uint64_t gseed = derive_seed(cfg.seed, 0x5717);
  for (auto& [key, items] : groups) {
    // a missing pool can only sit at the ends of a run
    std::size_t beg = 0;
    for (std::size_t i = 0; i <= items.size(); ++i) {
      bool cut = i == items.size() || (i > beg && (items[i - 1].plus.empty() || items[i].minus.empty()));
      if (!cut) continue;
      stitch(std::span<const Item>(items).subspan(beg, i - beg), gseed = derive_seed(gseed, i));
      beg = i;
    }
  }

  for (auto& c : chains) {
    sequencing::TransChain tc;
    for (auto& set : c) tc.blocks.push_back(without(set, used_spares));
    local_parts.push_back(sequencing::assemble_path_power(sub, tc, k));
  }
  st.stranded = static_cast<int>(stranded.size());
  std::sort(stranded.begin(), stranded.end(),
            [&](Vertex a, Vertex b) { return rord.position(a) < rord.position(b); });
  for (auto& seg : sequencing::greedy_segments(sub, stranded, k)) local_parts.push_back(std::move(seg));
  for (const auto& p : local_parts) res.parts.push_back(detail::lift(p, rest));
  return finish();
}

// ---------------------------------------------------------------------------
// Density increment

enum class Branch { p1, p2 };

inline const char* to_string(Branch b) { return b == Branch::p1 ? "P1" : "P2"; }

struct DensityIncrement {
  Branch branch;
  std::vector<BackwardEdge> long_edges;  // E_tau
  std::int64_t e_tau = 0, e1 = 0, e2 = 0, f = 0;
  std::string part;     // "I1", "J", "I2" or "J'" for P2
  int begin = 0, end = 0;  // positions of T' in the ordering
  Vertices sub;            // vertices of T' in ordering order
  bool guaranteed = false;  // the ordering was exact, so the P2 bound is proved
};

/// Either many long backward edges (length >= cn/4, at least c*eps*n^2/4 of
/// them) or an interval of the ordering of size >= n/2 carrying enough
/// backward edges to be 2(1-c)eps-intransitive when the ordering is a median.
inline DensityIncrement density_increment(const Tournament& t, const Ordering& ord, const Rational& eps,
                                          const Rational& c) {
  if (!(eps > 0 && eps <= Rational(1, 4))) throw DomainError("density_increment needs 0 < eps <= 1/4");
  if (!(c > 0 && c < Rational(1, 3))) throw DomainError("density_increment needs 0 < c < 1/3");
  const std::int64_t n = ord.size();
  if (n != t.size()) throw InputError("ordering does not match the tournament");
  const Rational n2(n * n);
  if (Rational(ord.backward()) < eps * n2)
    throw DomainError("ordering has " + std::to_string(ord.backward()) + " backward edges, fewer than eps*n^2 = " +
                      tourpow::to_string(Rational(eps * n2)));
  DensityIncrement out{};
  out.guaranteed = ord.mode() == OrderingMode::exact;
  const auto edges = backward_edges(t, ord);
  const std::int64_t half_up = (n + 1) / 2, half_down = n / 2;
  for (const auto& e : edges) {
    const bool is_long = 4 * Rational(e.length) >= c * n;
    const int pf = ord.position(e.from), pt = ord.position(e.to);
    const bool in1 = pf < half_up && pt < half_up;
    const bool in2 = pf >= half_down && pt >= half_down;
    if (is_long) {
      out.long_edges.push_back(e);
      ++out.e_tau;
    }
    if (in1) ++out.e1;
    if (in2) ++out.e2;
    if (!is_long && !in1 && !in2) ++out.f;
  }
  const Rational bound = c * eps * n2;  // four times the P1 threshold
  if (4 * Rational(out.e_tau) >= bound) {
    out.branch = Branch::p1;
    return out;
  }
  out.branch = Branch::p2;
  const bool f_small = 4 * Rational(out.f) < bound;
  const Rational jr = (1 + c / 2) * n / 2;
  const auto jlen = static_cast<int>((numerator(jr) / denominator(jr)).convert_to<std::int64_t>());
  if (out.e1 >= out.e2) {
    out.part = f_small ? "I1" : "J";
    out.begin = 0;
    out.end = f_small ? static_cast<int>(half_up) : jlen;
  } else {
    out.part = f_small ? "I2" : "J'";
    out.end = static_cast<int>(n);
    out.begin = f_small ? static_cast<int>(half_down) : static_cast<int>(n) - jlen;
  }
  out.sub = ord.slice(out.begin, out.end);
  return out;
}

// ---------------------------------------------------------------------------
// Refinement to a subtournament with many long backward edges

struct RefineStep {
  int n;
  Rational eps;
  Branch branch;
  std::string part;
  std::int64_t e_tau, e1, e2, f;
};

struct RefineResult {
  Vertices map;       // local label of T~ -> vertex of T
  Tournament sub;
  Ordering ord;       // the final ordering of T~ (local labels)
  Rational eps_tilde;
  std::optional<Rational> eps_exact;  // oracle value for small T~
  std::vector<RefineStep> trace;
  std::vector<BackwardEdge> long_edges;  // E_tau of the final step
  bool product_ok = false;               // eps~ * n~ >= eps * n / 5
  bool clamped = false;                  // a heuristic ordering forced eps~ below the proved value
};

/// Iterates the density increment with c = current eps until P1 fires.
inline RefineResult refine_intransitive(const Tournament& t, const Rational& eps, const PipelineConfig& cfg = {}) {
  if (!(eps > 0 && eps <= Rational(1, 4))) throw DomainError("refine_intransitive needs 0 < eps <= 1/4");
  const int n = t.size();
  if (n < 1) throw InputError("refine_intransitive needs a nonempty tournament");
  Vertices cur = oracle::detail::all_vertices(t);
  Rational e = eps;
  bool clamped = false;
  std::vector<RefineStep> trace;
  const int limit = static_cast<int>(std::ceil(std::log2(std::max(2, n)))) + 2;
  for (int step = 0; step <= limit; ++step) {
    Tournament sub = t.induced(cur);
    median::MedianOptions mo;
    mo.seed = derive_seed(cfg.seed, 0xDE + static_cast<std::uint64_t>(step));
    mo.restarts = cfg.restarts;
    mo.budget = cfg.budget;
    if (sub.size() <= cfg.budget.max_n_exact_ordering) mo.mode = OrderingMode::exact;
    Ordering ord = median::median_order(sub, mo);
    const Rational n2(static_cast<std::int64_t>(sub.size()) * sub.size());
    if (step > 0 && Rational(ord.backward()) < e * n2) {
      if (cfg.mode == Mode::strict) throw InternalError("density increment guarantee failed on an exact ordering");
      e = std::max(Rational(ord.backward()) / n2, eps);
      clamped = true;
      if (Rational(ord.backward()) < e * n2) throw NotFoundError("refinement lost its backward edges");
    }
    e = std::min(e, Rational(1, 4));
    DensityIncrement di = density_increment(sub, ord, e, e);
    trace.push_back({sub.size(), e, di.branch, di.part, di.e_tau, di.e1, di.e2, di.f});
    if (di.branch == Branch::p1) {
      RefineResult r{cur, std::move(sub), ord, e, std::nullopt, std::move(trace), di.long_edges, false, clamped};
      if (r.sub.size() <= cfg.budget.max_n_exact_ordering) r.eps_exact = oracle::exact_epsilon(r.sub, cfg.budget);
      r.product_ok = r.eps_tilde * r.sub.size() * 5 >= eps * n;
      if (cfg.mode == Mode::strict && !r.product_ok) throw InternalError("eps~ n~ < eps n / 5");
      return r;
    }
    cur = detail::lift(di.sub, cur);
    e = 2 * (1 - e) * e;
  }
  throw InternalError("refine_intransitive exceeded log2 n steps");
}

// ---------------------------------------------------------------------------
// Long cycle powers

struct CycleStats {
  std::string method;  // oracle, pipeline or segment
  int length = 0;
  Rational target;     // eps * n / 1500
  bool target_met = false;
  int refine_steps = 0;
  Rational eps_tilde;
  int sub_n = 0;
  int blocks = 0, subblocks = 0;
  int pairs = 0;
  std::vector<std::string> log;
};

struct CycleResult {
  Vertices cycle;
  CycleStats stats;
};

namespace detail {

/// Longest x_i..x_j, contiguous in `seq`, that is a k-th power of a cycle:
/// a k-th power segment whose wrap-around pairs are present.
inline Vertices segment_closure(const Tournament& t, std::span<const Vertex> seq, int k) {
  auto start = sequencing::segment_starts(t, seq, k);
  const int n = static_cast<int>(seq.size());
  Vertices best;
  const int min_len = std::max(3, 2 * k + 1);
  for (int j = 0; j < n; ++j)
    for (int i = start[static_cast<std::size_t>(j)]; j - i + 1 >= min_len; ++i) {
      if (j - i + 1 <= static_cast<int>(best.size())) break;
      bool ok = true;
      for (int a = 0; a < k && ok; ++a)
        for (int b = 0; a + b < k && ok; ++b)
          ok = t.edge(seq[static_cast<std::size_t>(j - a)], seq[static_cast<std::size_t>(i + b)]);
      if (!ok) continue;
      Vertices c(seq.begin() + i, seq.begin() + j + 1);
      if (verify_cycle_power(t, c, k)) {
        best = std::move(c);
        break;
      }
    }
  return best;
}

}  // namespace detail

/// k-th power of a long cycle.  Small tournaments go to the exact search.
/// Otherwise: refine to T~ with many long backward edges; split a median
/// ordering into blocks; pick blocks a < b (b >= a + 3) with the most
/// backward edges; pair dense subblocks; for each pair a backward
/// transitive pair Z' => Z, an ordered walk from Z across A_{a+1}, and a
/// connection back to the next Z'.  The longest closed segment of the
/// ordering is kept as an alternative; the longer verified cycle wins.
inline CycleResult find_cycle_power(const Tournament& t, int k, const Rational& eps, const PipelineConfig& cfg = {}) {
  if (k < 1) throw InputError("k must be at least 1");
  check_config(cfg);
  if (!(eps > 0 && eps < Rational(1, 4))) throw DomainError("find_cycle_power needs 0 < eps < 1/4");
  const int n = t.size();
  if (cfg.mode == Mode::strict &&
      std::log2(std::max(1, n)) < 41000.0 * k * std::log2(to_double(1 / eps)))
    throw InfeasibleError("strict cycle power needs n >= eps^{-41000k}");
  CycleResult res;
  auto& st = res.stats;
  st.target = eps * n / 1500;
  auto done = [&](Vertices c, const char* how) {
    if (!verify_cycle_power(t, c, k) || c.size() < 3) throw InternalError("cycle power failed verification");
    res.cycle = std::move(c);
    st.method = how;
    st.length = static_cast<int>(res.cycle.size());
    st.target_met = Rational(st.length) >= st.target;
    return res;
  };
  if (n <= std::min(12, cfg.budget.max_n_path_search)) {
    auto c = oracle::longest_cycle_power(t, k, cfg.budget);
    if (!c || c->size() < 3) throw NotFoundError("no k-th power of a cycle of length >= 3");
    return done(*c, "oracle");
  }

  Vertices best;
  const char* how = "segment";
  auto offer = [&](Vertices c, const char* h) {
    if (c.size() > best.size() && c.size() >= 3 && verify_cycle_power(t, c, k)) {
      best = std::move(c);
      how = h;
    }
  };
  const Ordering full = detail::median_of(t, cfg, 0xC7);
  offer(detail::segment_closure(t, full.perm(), k), "segment");

  try {
    RefineResult rr = refine_intransitive(t, eps, cfg);
    st.refine_steps = static_cast<int>(rr.trace.size());
    st.eps_tilde = rr.eps_tilde;
    st.sub_n = rr.sub.size();
    const Tournament& sub = rr.sub;
    const Ordering& ord = rr.ord;
    const int nn = sub.size();
    const Vertices& local_to_global = rr.map;
    offer(detail::lift(detail::segment_closure(sub, ord.perm(), k), local_to_global), "segment");

    const int min_block = 4 * k;
    const int tb = static_cast<int>(std::min<std::int64_t>(ceil_count(Rational(12) / rr.eps_tilde), nn / min_block));
    if (tb >= 4) {
      const int m0 = nn / tb;
      const int tp = std::max(2, m0 / (2 * k));
      const int mp = m0 / tp;
      const int m = mp * tp;
      st.blocks = tb;
      st.subblocks = tp;
      if (mp >= k) {
        auto fine = median::split_intervals(ord, mp, median::Align::remainder_last, 0, tb * m);
        auto block_of = [&](int pos) { return pos / m; };
        std::vector<std::vector<std::int64_t>> cnt(static_cast<std::size_t>(tb), std::vector<std::int64_t>(static_cast<std::size_t>(tb)));
        for (const auto& e : backward_edges(sub, ord)) {
          int pf = ord.position(e.from), pt = ord.position(e.to);
          if (pf >= tb * m) continue;
          int bf = block_of(pf), bt = block_of(pt);
          if (bf >= bt + 3) ++cnt[static_cast<std::size_t>(bt)][static_cast<std::size_t>(bf)];
        }
        int a = -1, b = -1;
        std::int64_t top = 0;
        for (int i = 0; i < tb; ++i)
          for (int j = i + 3; j < tb; ++j)
            if (cnt[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] > top) {
              top = cnt[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
              a = i;
              b = j;
            }
        if (a >= 0) {
          st.log.push_back("blocks a=" + std::to_string(a) + " b=" + std::to_string(b) + " with " + std::to_string(top) +
                           " backward edges");
          struct Pair {
            int j, jp;
            Rational d;
            Vertices z, zp;
          };
          std::vector<Pair> cand;
          const Rational thr = rr.eps_tilde * rr.eps_tilde / 400;
          for (int j = 0; j < tp; ++j)
            for (int jp = 0; jp < tp; ++jp) {
              Rational d = density(sub, fine.block(b * tp + jp), fine.block(a * tp + j));
              if (d >= thr && d > 0) cand.push_back({j, jp, d, {}, {}});
            }
          std::stable_sort(cand.begin(), cand.end(), [](const Pair& x, const Pair& y) { return x.d > y.d; });
          std::vector<Pair> pairs;
          std::vector<bool> uj(static_cast<std::size_t>(tp)), ujp(static_cast<std::size_t>(tp));
          extremal::DrcOptions dopt{cfg.mode, cfg.retries, cfg.budget, {}};
          for (auto& p : cand) {
            if (uj[static_cast<std::size_t>(p.j)] || ujp[static_cast<std::size_t>(p.jp)]) continue;
            for (int sz = std::min(4 * k, mp); sz >= k; --sz) {
              auto tpair = extremal::try_transitive_pair(sub, fine.block(b * tp + p.jp), fine.block(a * tp + p.j), sz,
                                                         derive_seed(cfg.seed, static_cast<std::uint64_t>(p.j * 131 + p.jp)),
                                                         dopt);
              if (!tpair) continue;
              p.zp = tpair->x;
              p.z = tpair->y;
              uj[static_cast<std::size_t>(p.j)] = ujp[static_cast<std::size_t>(p.jp)] = true;
              pairs.push_back(p);
              break;
            }
          }
          std::sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) { return x.j > y.j; });
          st.pairs = static_cast<int>(pairs.size());
          sequencing::SeqOptions so;
          so.mode = cfg.mode;
          so.retries = cfg.retries;
          so.budget = cfg.budget;
          so.seed = cfg.seed;

          auto build = [&](const std::vector<Pair>& ps) -> std::optional<Vertices> {
            const int r = static_cast<int>(ps.size());
            Bitset used(nn);
            for (const auto& p : ps) {
              for (Vertex v : p.z) used.set(v);
              for (Vertex v : p.zp) used.set(v);
            }
            std::vector<sequencing::TransChain> walks;
            std::vector<int> ends;
            const int walk_end = (a + 2) * tp - 1;
            for (const auto& p : ps) {
              const int startb = a * tp + p.j;
              Bitset f = used;
              for (Vertex v : p.z) f.reset(v);
              try {
                auto w = sequencing::median_sequence(sub, fine.sub(startb, walk_end), 0, p.z, f, k, so);
                for (const auto& x : w.blocks)
                  for (Vertex v : x) used.set(v);
                ends.push_back(startb + w.indices.back());
                walks.push_back(std::move(w));
              } catch (const NotFoundError& e) {
                st.log.push_back(std::string("walk: ") + e.what());
                return std::nullopt;
              }
            }
            sequencing::TransChain cyc;
            cyc.cyclic = true;
            for (int i = 0; i < r; ++i) {
              const auto& w = walks[static_cast<std::size_t>(i)];
              const auto& next = ps[static_cast<std::size_t>((i + 1) % r)];
              const int target = b * tp + next.jp;
              try {
                auto conn = sequencing::med_connect(sub, fine.sub(ends[static_cast<std::size_t>(i)], target),
                                                    w.blocks.back(), next.zp, used, k, so);
                for (std::size_t x = 0; x + 1 < w.blocks.size(); ++x) cyc.blocks.push_back(w.blocks[x]);
                for (const auto& y : conn.chain.blocks) {
                  cyc.blocks.push_back(y);
                  for (Vertex v : y) used.set(v);
                }
              } catch (const NotFoundError& e) {
                st.log.push_back(std::string("closing: ") + e.what());
                return std::nullopt;
              }
            }
            try {
              return sequencing::assemble_cycle_power(sub, cyc, k);
            } catch (const DomainError& e) {
              st.log.push_back(std::string("assembly: ") + e.what());
              return std::nullopt;
            }
          };
          if (!pairs.empty()) {
            if (auto c = build(pairs)) offer(detail::lift(*c, local_to_global), "pipeline");
            for (std::size_t i = 0; i < pairs.size() && best.size() < static_cast<std::size_t>(nn); ++i)
              if (auto c = build({pairs[i]})) offer(detail::lift(*c, local_to_global), "pipeline");
          }
        }
      }
    }
  } catch (const DomainError& e) {
    st.log.push_back(std::string("refinement skipped: ") + e.what());
  } catch (const NotFoundError& e) {
    st.log.push_back(std::string("refinement: ") + e.what());
  }
  if (best.size() < 3) throw NotFoundError("no k-th power of a cycle of length >= 3 found");
  return done(best, how);
}

}  // namespace tourpow::pipeline
