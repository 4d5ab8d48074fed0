// tourpow: generate tournaments, analyse them, run the constructions and
// check certificates.
//
// Exit codes: 0 ok, 2 usage or input, 3 infeasible, 4 not found,
// 5 verification failure.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tourpow/tourpow.hpp"

namespace {

using namespace tourpow;
using json = nlohmann::json;

enum Exit { kOk = 0, kUsage = 2, kInfeasible = 3, kNotFound = 4, kVerify = 5 };

struct Common {
  int k = 1;
  std::string eps = "auto";
  std::uint64_t seed = 0;
  std::string mode = "opportunistic";
  int m = 0;
  int stride = 80;
  int retries = 50;
  double budget = 0;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--k", c.k, "power k")->check(CLI::PositiveNumber);
  app->add_option("--eps", c.eps, "intransitivity: 'auto' or a rational such as 1/20");
  app->add_option("--seed", c.seed, "random seed");
  app->add_option("--mode", c.mode, "strict or opportunistic")->check(CLI::IsMember({"strict", "opportunistic"}));
  app->add_option("--m", c.m, "block size (0 = automatic)")->check(CLI::NonNegativeNumber);
  app->add_option("--stride", c.stride, "block stride of the partition")->check(CLI::Range(3, 1 << 20));
  app->add_option("--retries", c.retries, "retries per randomized step")->check(CLI::PositiveNumber);
  app->add_option("--budget", c.budget, "oracle time limit in seconds (0 = none)")->check(CLI::NonNegativeNumber);
}

oracle::OracleBudget budget_of(const Common& c) {
  oracle::OracleBudget b;
  b.time_limit_seconds = c.budget;
  return b;
}

pipeline::PipelineConfig config_of(const Common& c) {
  pipeline::PipelineConfig cfg;
  cfg.mode = parse_mode(c.mode);
  cfg.block_size = c.m;
  cfg.stride = c.stride;
  cfg.retries = c.retries;
  cfg.seed = c.seed;
  cfg.budget = budget_of(c);
  return cfg;
}

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

std::string rat(const Rational& r) { return tourpow::to_string(r); }

// ---------------------------------------------------------------------------
// gen

struct GenArgs {
  std::string type = "random";
  int n = 0;
  double p = 0.5;
  int q = 7;
  std::string blocks;
  std::string inner = "random";
  int inner_k = 4;
  std::uint64_t seed = 0;
  std::string out;
};

std::vector<int> parse_blocks(const std::string& s) {
  // "3x7" = three blocks of 7, or a comma list "2,5,3"
  std::vector<int> out;
  auto num = [&](const std::string& x) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(x, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != x.size() || v < 1) throw InputError("bad block spec '" + s + "'");
    return v;
  };
  if (auto x = s.find('x'); x != std::string::npos) {
    int count = num(s.substr(0, x)), size = num(s.substr(x + 1));
    out.assign(static_cast<std::size_t>(count), size);
  } else {
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) out.push_back(num(part));
  }
  if (out.empty()) throw InputError("empty block spec");
  return out;
}

construct::InnerKind parse_inner(const std::string& s) {
  using construct::InnerKind;
  if (s == "transitive") return InnerKind::transitive;
  if (s == "random") return InnerKind::random;
  if (s == "paley") return InnerKind::paley;
  if (s == "cycle3") return InnerKind::cycle3;
  if (s == "no_tt") return InnerKind::no_tt;
  throw InputError("unknown inner generator '" + s + "'");
}

Tournament generate(const GenArgs& g) {
  auto need_n = [&] {
    if (g.n < 1) throw InputError("--n must be at least 1");
  };
  if (g.type == "transitive") return need_n(), construct::transitive_tournament(g.n);
  if (g.type == "random") return need_n(), construct::random_tournament(g.n, g.seed);
  if (g.type == "reversal") return need_n(), construct::random_reversal(g.n, g.p, g.seed);
  if (g.type == "paley") return construct::paley(g.q);
  if (g.type == "blowup") {
    if (g.blocks.empty()) throw InputError("blowup needs --blocks");
    return construct::blowup(parse_blocks(g.blocks), {parse_inner(g.inner), g.inner_k}, g.seed).tournament;
  }
  throw InputError("unknown type '" + g.type + "'");
}

int cmd_gen(const GenArgs& g) {
  std::string text = io::render(generate(g));
  if (g.out.empty())
    std::cout << text;
  else
    io::write_text(g.out, text);
  return kOk;
}

// ---------------------------------------------------------------------------
// analyze

int cmd_analyze(const std::string& file, const Common& c) {
  Tournament t = io::read_tournament(file);
  const auto b = budget_of(c);
  const int n = t.size();
  json r{{"n", n}, {"edges", static_cast<std::int64_t>(n) * (n - 1) / 2}};
  const Rational n2(static_cast<std::int64_t>(n) * n);

  median::MedianOptions mo;
  mo.seed = c.seed;
  Ordering local = median::median_order(t, mo);
  r["median"] = {{"backward", local.backward()},
                 {"forward", local.forward()},
                 {"mode", "local"},
                 {"relocation_optimal", !median::find_improving_relocation(t, local).has_value()}};
  r["eps_upper"] = rat(Rational(local.backward()) / n2);
  r["eps_upper_source"] = "local median ordering";
  try {
    auto ex = oracle::exact_min_backward(t, b);
    r["min_backward"] = ex.count;
    r["eps_exact"] = rat(Rational(ex.count) / n2);
  } catch (const InfeasibleError& e) {
    r["min_backward"] = nullptr;
    r["eps_exact"] = nullptr;
    r["eps_exact_unavailable"] = e.what();
  }
  try {
    r["max_transitive"] = oracle::max_transitive(t, b).size();
  } catch (const InfeasibleError& e) {
    r["max_transitive"] = nullptr;
    r["max_transitive_unavailable"] = e.what();
  }
  r["transitive_lower"] = extremal::greedy_transitive(t, oracle::detail::all_vertices(t)).size();
  r["strong_components"] = strongly_connected_components(t).size();
  emit(r);
  return kOk;
}

// ---------------------------------------------------------------------------
// run

Rational resolve_eps(const Tournament& t, const Common& c) {
  if (c.eps != "auto") return parse_rational(c.eps);
  const Rational n2(static_cast<std::int64_t>(t.size()) * t.size());
  try {
    return Rational(oracle::exact_min_backward(t, budget_of(c)).count) / n2;
  } catch (const InfeasibleError&) {
    median::MedianOptions mo;
    mo.seed = c.seed;
    return Rational(median::median_order(t, mo).backward()) / n2;
  }
}

int finish_run(const Tournament& t, const io::Certificate& cert, const std::string& out, json stats) {
  std::string text = io::to_json(cert).dump(2) + "\n";
  if (!out.empty()) io::write_text(out, text);
  // re-read what was written and check it from scratch
  io::Certificate back = out.empty() ? io::parse_certificate(text) : io::read_certificate(out);
  Verdict v = io::verify_certificate(t, back);
  stats["certificate"] = out.empty() ? json(io::to_json(cert)) : json(out);
  stats["verified"] = v.ok;
  if (!v) {
    stats["clause"] = v.clause;
    stats["detail"] = v.detail;
    emit(stats);
    return kVerify;
  }
  emit(stats);
  return kOk;
}

int cmd_run(const std::string& task, const std::string& file, const Common& c, const std::string& out) {
  Tournament t = io::read_tournament(file);
  const int n = t.size();
  const Mode mode = parse_mode(c.mode);
  const std::string prov = "tourpow " + task + " seed=" + std::to_string(c.seed) + " mode=" + c.mode;
  json stats{{"task", task}, {"n", n}, {"k", c.k}, {"seed", c.seed}, {"mode", c.mode}};

  if (task == "path-power") {
    sequencing::FindOptions fo;
    fo.seq.mode = mode;
    fo.seq.retries = c.retries;
    fo.seq.budget = budget_of(c);
    auto r = sequencing::find_path_power(t, oracle::detail::all_vertices(t), c.k, n, c.seed, fo);
    stats["length"] = r.sequence.size();
    stats["spanning"] = r.met;
    stats["method"] = r.method;
    return finish_run(t, io::path_certificate(n, c.k, r.sequence, prov), out, stats);
  }
  if (task == "partition") {
    auto r = pipeline::partition_path_powers(t, c.k, config_of(c));
    const auto& s = r.stats;
    stats["parts"] = s.parts;
    stats["singletons"] = s.singletons;
    stats["absorbers"] = s.absorbers;
    stats["absorber_vertices"] = s.absorber_vertices;
    stats["chains"] = s.chains;
    stats["stitched"] = s.stitched;
    stats["stranded"] = s.stranded;
    stats["block_size"] = s.block_size;
    stats["stride"] = s.stride;
    stats["log"] = s.log;
    return finish_run(t, io::partition_certificate(n, c.k, r.parts, prov), out, stats);
  }
  if (task == "cycle-power") {
    Rational eps = resolve_eps(t, c);
    stats["eps"] = rat(eps);
    if (eps == 0) throw NotFoundError("the tournament is transitive: no cycle at all");
    if (eps >= Rational(1, 4)) throw DomainError("eps must be below 1/4");
    auto r = pipeline::find_cycle_power(t, c.k, eps, config_of(c));
    const auto& s = r.stats;
    stats["method"] = s.method;
    stats["length"] = s.length;
    stats["target"] = rat(s.target);
    stats["target_met"] = s.target_met;
    stats["refine_steps"] = s.refine_steps;
    stats["eps_tilde"] = rat(s.eps_tilde);
    stats["sub_n"] = s.sub_n;
    stats["log"] = s.log;
    return finish_run(t, io::cycle_certificate(n, c.k, r.cycle, prov), out, stats);
  }
  if (task == "absorber") {
    const int m = c.m > 0 ? c.m : std::max(8 * c.k, n / 10);
    median::MedianOptions mo;
    mo.seed = c.seed;
    auto split = median::split_intervals(median::median_order(t, mo), m);
    const int last = split.count() - 1;
    if (last < 1) throw InputError("absorber needs at least two blocks; lower --m");
    // Xt first, then X0 inside its common out-neighbourhood; shrink until both reach 2k
    Vertices x0, xt;
    const Vertices tail = extremal::transitive_up_to(t, split.block(last), 8 * c.k, budget_of(c));
    for (int s = static_cast<int>(tail.size()); s >= 2 * c.k && x0.empty(); --s) {
      Vertices cand(tail.begin(), tail.begin() + s);
      Vertices below;
      for (Vertex v : split.block(0))
        if (dominates(t, cand, std::span<const Vertex>(&v, 1))) below.push_back(v);
      Vertices x = extremal::transitive_up_to(t, below, 8 * c.k, budget_of(c));
      if (static_cast<int>(x.size()) >= 2 * c.k) {
        x0 = std::move(x);
        xt = std::move(cand);
      }
    }
    if (x0.empty()) throw NotFoundError("no transitive pair between the last and first blocks");
    absorber::AbsorberOptions ao;
    ao.mode = mode;
    ao.retries = c.retries;
    ao.budget = budget_of(c);
    auto h = absorber::find_absorber(t, split, x0, xt, c.k, 4, c.seed, ao);
    stats["r"] = h.r();
    stats["r_prime"] = h.r_prime;
    stats["size"] = h.size();
    stats["block_size"] = m;
    return finish_run(t, io::absorber_certificate(n, h, prov), out, stats);
  }
  throw InputError("unknown task '" + task + "'");
}

// ---------------------------------------------------------------------------
// verify

int cmd_verify(const std::string& file, const std::string& cert_file, const std::string& kind) {
  Tournament t = io::read_tournament(file);
  io::Certificate c = io::read_certificate(cert_file);
  if (!kind.empty() && io::parse_kind(kind) != c.kind)
    throw InputError(std::string("certificate kind is ") + io::to_string(c.kind) + ", expected " + kind);
  Verdict v = io::verify_certificate(t, c);
  json r{{"kind", io::to_string(c.kind)}, {"k", c.k}, {"ok", v.ok}};
  if (!v) r.update({{"clause", v.clause}, {"detail", v.detail}, {"witness", v.witness}});
  emit(r);
  return v ? kOk : kVerify;
}

// ---------------------------------------------------------------------------
// sweep

int cmd_sweep(const GenArgs& g, int seeds, const std::string& measure, const Common& c) {
  if (seeds < 1) throw InputError("--seeds must be positive");
  json rows = json::array();
  double sum = 0;
  for (int s = 0; s < seeds; ++s) {
    GenArgs gs = g;
    gs.seed = g.seed + static_cast<std::uint64_t>(s);
    Tournament t = generate(gs);
    const Rational n2(static_cast<std::int64_t>(t.size()) * t.size());
    json row{{"seed", gs.seed}};
    double value = 0;
    if (measure == "eps") {
      Rational e = oracle::exact_epsilon(t, budget_of(c));
      row["eps"] = rat(e);
      value = to_double(e);
    } else if (measure == "backward") {
      value = static_cast<double>(Ordering::identity(t).backward());
      row["backward"] = value;
    } else if (measure == "parts") {
      Common cs = c;
      cs.seed = gs.seed;
      auto r = pipeline::partition_path_powers(t, c.k, config_of(cs));
      value = r.stats.parts;
      row["parts"] = r.stats.parts;
    } else if (measure == "cycle") {
      Common cs = c;
      cs.seed = gs.seed;
      Rational e = resolve_eps(t, cs);
      try {
        value = pipeline::find_cycle_power(t, c.k, std::min(e, Rational(1, 5)), config_of(cs)).stats.length;
      } catch (const NotFoundError&) {
        value = 0;
      }
      row["length"] = value;
    } else {
      throw InputError("unknown measure '" + measure + "'");
    }
    sum += value;
    rows.push_back(row);
  }
  emit({{"type", g.type}, {"measure", measure}, {"seeds", seeds}, {"mean", sum / seeds}, {"rows", rows}});
  return kOk;
}

int exit_code(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::input:
    case ErrorKind::domain: return kUsage;
    case ErrorKind::infeasible: return kInfeasible;
    case ErrorKind::not_found: return kNotFound;
    case ErrorKind::internal: return kVerify;
  }
  return kVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"k-th powers of paths and cycles in tournaments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", tourpow::io::kToolVersion);

  GenArgs g;
  auto* gen = app.add_subcommand("gen", "write a tournament file");
  gen->add_option("--type", g.type, "transitive, random, reversal, paley or blowup")
      ->check(CLI::IsMember({"transitive", "random", "reversal", "paley", "blowup"}));
  gen->add_option("--n", g.n, "number of vertices");
  gen->add_option("--p", g.p, "reversal probability");
  gen->add_option("--q", g.q, "Paley order");
  gen->add_option("--blocks", g.blocks, "blow-up blocks: 3x7 or 2,5,3");
  gen->add_option("--inner", g.inner, "blow-up inner blocks: transitive, random, paley, cycle3, no_tt");
  gen->add_option("--inner-k", g.inner_k, "k for no_tt inner blocks");
  gen->add_option("--seed", g.seed, "random seed");
  gen->add_option("-o,--out", g.out, "output file (default stdout)");

  Common ca;
  std::string afile;
  auto* analyze = app.add_subcommand("analyze", "report intransitivity and ordering statistics");
  analyze->add_option("file", afile, "tournament file")->required();
  add_common(analyze, ca);

  Common cr;
  std::string task, rfile, rout;
  auto* run = app.add_subcommand("run", "run a construction and write a verified certificate");
  run->add_option("task", task, "path-power, partition, cycle-power or absorber")
      ->required()
      ->check(CLI::IsMember({"path-power", "partition", "cycle-power", "absorber"}));
  run->add_option("file", rfile, "tournament file")->required();
  run->add_option("-o,--out", rout, "certificate file (default: embedded in the report)");
  add_common(run, cr);

  std::string vfile, vcert, vkind;
  auto* verify = app.add_subcommand("verify", "check a certificate against a tournament");
  verify->add_option("file", vfile, "tournament file")->required();
  verify->add_option("certificate", vcert, "certificate file")->required();
  verify->add_option("--kind", vkind, "expected certificate kind");

  GenArgs sg;
  Common cs;
  int seeds = 20;
  std::string measure = "eps";
  auto* sweep = app.add_subcommand("sweep", "aggregate a statistic over seeds");
  sweep->add_option("--type", sg.type, "generator type")
      ->check(CLI::IsMember({"transitive", "random", "reversal", "paley", "blowup"}));
  sweep->add_option("--n", sg.n, "number of vertices");
  sweep->add_option("--p", sg.p, "reversal probability");
  sweep->add_option("--blocks", sg.blocks, "blow-up blocks");
  sweep->add_option("--inner", sg.inner, "blow-up inner blocks");
  sweep->add_option("--seeds", seeds, "number of seeds");
  sweep->add_option("--measure", measure, "eps, backward, parts or cycle")
      ->check(CLI::IsMember({"eps", "backward", "parts", "cycle"}));
  add_common(sweep, cs);
  sweep->add_option("--first-seed", sg.seed, "first generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*gen) return cmd_gen(g);
    if (*analyze) return cmd_analyze(afile, ca);
    if (*run) return cmd_run(task, rfile, cr, rout);
    if (*verify) return cmd_verify(vfile, vcert, vkind);
    if (*sweep) return cmd_sweep(sg, seeds, measure, cs);
  } catch (const Error& e) {
    std::cerr << "tourpow: " << e.what() << '\n';
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "tourpow: " << e.what() << '\n';
    return kVerify;
  }
  return kUsage;
}
