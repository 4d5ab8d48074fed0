#pragma once

#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tourpow/absorber.hpp"
#include "tourpow/tournament.hpp"
#include "tourpow/verify.hpp"

namespace tourpow::io {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kCertificateFormat = "tourpow-certificate";

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Tournament text format
//
//   TOURNAMENT v1 n=<n>
//   n rows of n characters: '1' at (i,j) iff i -> j, '-' on the diagonal

inline std::string render(const Tournament& t) {
  const int n = t.size();
  std::string s = "TOURNAMENT v1 n=" + std::to_string(n) + "\n";
  s.reserve(s.size() + static_cast<std::size_t>(n) * static_cast<std::size_t>(n + 1));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) s += i == j ? '-' : (t.edge(i, j) ? '1' : '0');
    s += '\n';
  }
  return s;
}

inline Tournament parse_tournament(std::istream& in) {
  std::string line;
  auto next = [&](const char* what) {
    if (!std::getline(in, line)) throw InputError(std::string("tournament file: missing ") + what);
    if (!line.empty() && line.back() == '\r') line.pop_back();
  };
  next("header");
  const std::string tag = "TOURNAMENT v1 n=";
  if (line.rfind(tag, 0) != 0) throw InputError("tournament file: bad header '" + line + "'");
  long long n = -1;
  try {
    std::size_t used = 0;
    n = std::stoll(line.substr(tag.size()), &used);
    if (used != line.size() - tag.size()) n = -1;
  } catch (const std::exception&) {
    n = -1;
  }
  if (n < 0 || n > Tournament::kMaxVertices) throw InputError("tournament file: bad vertex count in '" + line + "'");
  std::vector<std::string> rows(static_cast<std::size_t>(n));
  for (auto& r : rows) {
    next("row");
    if (static_cast<long long>(line.size()) != n) throw InputError("tournament file: row of length " + std::to_string(line.size()));
    r = line;
  }
  while (std::getline(in, line))
    if (line.find_first_not_of(" \t\r") != std::string::npos) throw InputError("tournament file: trailing content");
  Tournament t(static_cast<int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const char c = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (i == j) {
        if (c != '-') throw InputError("tournament file: diagonal must be '-'");
        continue;
      }
      if (c != '0' && c != '1') throw InputError(std::string("tournament file: unexpected character '") + c + "'");
      const char d = rows[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
      if ((c == '1') == (d == '1'))
        throw InputError("tournament file: pair (" + std::to_string(i) + "," + std::to_string(j) + ") is not oriented exactly once");
      if (c == '1' && i < j) t.orient(i, j);
      if (c == '0' && i < j) t.orient(j, i);
    }
  return t;
}

inline Tournament parse_tournament(const std::string& text) {
  std::istringstream in(text);
  return parse_tournament(in);
}

inline Tournament read_tournament(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return parse_tournament(in);
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << text;
  if (!out) throw InputError("write failed: " + path);
}

// ---------------------------------------------------------------------------
// Certificates

enum class Kind { path_power, cycle_power, partition, absorber, backward_pair };

inline const char* to_string(Kind k) {
  switch (k) {
    case Kind::path_power: return "path_power";
    case Kind::cycle_power: return "cycle_power";
    case Kind::partition: return "partition";
    case Kind::absorber: return "absorber";
    case Kind::backward_pair: return "backward_pair";
  }
  return "?";
}

inline Kind parse_kind(const std::string& s) {
  for (Kind k : {Kind::path_power, Kind::cycle_power, Kind::partition, Kind::absorber, Kind::backward_pair})
    if (s == to_string(k)) return k;
  throw InputError("unknown certificate kind '" + s + "'");
}

struct Certificate {
  Kind kind;
  int k = 1;
  int n = 0;
  json payload;
  std::string provenance;
  std::string tool_version = kToolVersion;
};

inline json to_json(const Certificate& c) {
  return json{{"format", kCertificateFormat}, {"version", 1},        {"tool_version", c.tool_version},
              {"kind", to_string(c.kind)},   {"k", c.k},             {"n", c.n},
              {"payload", c.payload},        {"provenance", c.provenance}};
}

inline Certificate certificate_from_json(const json& j) {
  try {
    if (!j.is_object()) throw InputError("certificate must be a JSON object");
    if (j.value("format", std::string()) != kCertificateFormat) throw InputError("not a certificate");
    if (j.value("version", 0) != 1) throw InputError("unsupported certificate version");
    Certificate c{parse_kind(j.at("kind").get<std::string>()), j.at("k").get<int>(), j.at("n").get<int>(),
                  j.at("payload"), j.value("provenance", std::string()), j.value("tool_version", std::string())};
    if (!c.payload.is_object()) throw InputError("payload must be an object");
    return c;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed certificate: ") + e.what());
  }
}

inline Certificate parse_certificate(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("certificate is not valid JSON: ") + e.what());
  }
  return certificate_from_json(j);
}

inline Certificate read_certificate(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_certificate(ss.str());
}

inline Certificate path_certificate(int n, int k, const Vertices& seq, std::string provenance) {
  return {Kind::path_power, k, n, json{{"sequence", seq}}, std::move(provenance)};
}
inline Certificate cycle_certificate(int n, int k, const Vertices& cyc, std::string provenance) {
  return {Kind::cycle_power, k, n, json{{"cycle", cyc}}, std::move(provenance)};
}
inline Certificate partition_certificate(int n, int k, const std::vector<Vertices>& parts, std::string provenance) {
  return {Kind::partition, k, n, json{{"parts", parts}}, std::move(provenance)};
}
inline Certificate absorber_certificate(int n, const absorber::Absorber& h, std::string provenance) {
  return {Kind::absorber, h.k, n, json{{"S", h.S}, {"Q", h.Q}, {"r_prime", h.r_prime}}, std::move(provenance)};
}
inline Certificate backward_pair_certificate(int n, int k, const Vertices& later, const Vertices& earlier,
                                             std::string provenance) {
  return {Kind::backward_pair, k, n, json{{"later", later}, {"earlier", earlier}}, std::move(provenance)};
}

namespace detail {

inline Vertices vertices_at(const json& p, const char* key) {
  if (!p.contains(key) || !p.at(key).is_array()) throw InputError(std::string("payload needs array '") + key + "'");
  Vertices out;
  for (const auto& v : p.at(key)) {
    if (!v.is_number_integer()) throw InputError(std::string("payload '") + key + "' must hold integers");
    out.push_back(v.get<Vertex>());
  }
  return out;
}

inline std::vector<Vertices> lists_at(const json& p, const char* key) {
  if (!p.contains(key) || !p.at(key).is_array()) throw InputError(std::string("payload needs array '") + key + "'");
  std::vector<Vertices> out;
  for (const auto& part : p.at(key)) {
    json wrap{{"x", part}};
    out.push_back(vertices_at(wrap, "x"));
  }
  return out;
}

inline void check_range(const Tournament& t, std::span<const Vertex> vs) {
  for (Vertex v : vs)
    if (v < 0 || v >= t.size()) throw InputError("certificate vertex " + std::to_string(v) + " out of range");
}

}  // namespace detail

inline absorber::Absorber absorber_from(const Certificate& c) {
  absorber::Absorber h;
  h.k = c.k;
  h.S = detail::lists_at(c.payload, "S");
  h.Q = detail::vertices_at(c.payload, "Q");
  if (!c.payload.contains("r_prime") || !c.payload.at("r_prime").is_number_integer())
    throw InputError("absorber payload needs r_prime");
  h.r_prime = c.payload.at("r_prime").get<int>();
  return h;
}

/// Independent re-check of a certificate against the tournament.  Malformed
/// certificates raise InputError; a well-formed but false claim fails.
inline Verdict verify_certificate(const Tournament& t, const Certificate& c) {
  if (c.n != t.size())
    throw InputError("certificate is for n = " + std::to_string(c.n) + ", tournament has " + std::to_string(t.size()));
  if (c.k < 1) throw InputError("certificate k must be at least 1");
  switch (c.kind) {
    case Kind::path_power: {
      Vertices s = detail::vertices_at(c.payload, "sequence");
      detail::check_range(t, s);
      return verify_path_power(t, s, c.k);
    }
    case Kind::cycle_power: {
      Vertices s = detail::vertices_at(c.payload, "cycle");
      detail::check_range(t, s);
      return verify_cycle_power(t, s, c.k);
    }
    case Kind::partition: {
      auto parts = detail::lists_at(c.payload, "parts");
      for (const auto& p : parts) detail::check_range(t, p);
      return verify_partition(t, parts, c.k);
    }
    case Kind::absorber: {
      auto h = absorber_from(c);
      for (const auto& s : h.S) detail::check_range(t, s);
      detail::check_range(t, h.Q);
      return absorber::verify_absorber(t, h);
    }
    case Kind::backward_pair: {
      Vertices later = detail::vertices_at(c.payload, "later");
      Vertices earlier = detail::vertices_at(c.payload, "earlier");
      detail::check_range(t, later);
      detail::check_range(t, earlier);
      if (static_cast<int>(later.size()) < c.k || static_cast<int>(earlier.size()) < c.k)
        return Verdict::fail("size", "sets must have at least k vertices");
      if (has_duplicates(later) || has_duplicates(earlier) || to_bitset(t, later).intersects(to_bitset(t, earlier)))
        return Verdict::fail("disjoint", "repeated vertex");
      if (!is_transitive_order(t, later)) return Verdict::fail("transitive", "later set is not in transitive order", later);
      if (!is_transitive_order(t, earlier))
        return Verdict::fail("transitive", "earlier set is not in transitive order", earlier);
      if (!dominates(t, later, earlier)) return Verdict::fail("domination", "later set does not dominate earlier set");
      return Verdict::pass();
    }
  }
  throw InputError("unknown certificate kind");
}

}  // namespace tourpow::io
