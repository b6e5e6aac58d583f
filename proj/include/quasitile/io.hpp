#pragma once

// JSON and binary serialization. Requires nlohmann/json (vendored as json.hpp).

#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "quasitile/density.hpp"
#include "quasitile/entropy.hpp"
#include "quasitile/quasitiling.hpp"
#include "quasitile/symbolic.hpp"

namespace quasitile::io {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Scalars
// ---------------------------------------------------------------------------

/// Writes key_num, key_den and key (as a double) into j.
inline void put_rational(json& j, const std::string& key, const Rational& r) {
  j[key + "_num"] = r.num();
  j[key + "_den"] = r.den();
  j[key] = r.to_double();
}

inline Rational get_rational(const json& j, const std::string& key) {
  if (j.contains(key + "_num") && j.contains(key + "_den"))
    return Rational(j.at(key + "_num").get<std::int64_t>(), j.at(key + "_den").get<std::int64_t>());
  const json& v = j.at(key);
  if (v.is_string()) return Rational::parse(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
  throw DomainError("field '" + key + "' needs an exact value (" + key + "_num/" + key + "_den or a string)");
}

// ---------------------------------------------------------------------------
// Group elements and subsets
// ---------------------------------------------------------------------------

inline json to_json(const GroupElement& g) {
  json a = json::array();
  for (auto v : g.coords()) a.push_back(v);
  return a;
}

inline GroupElement element_from_json(const GroupSpec& G, const json& j) {
  if (!j.is_array()) throw DomainError("group element must be a JSON integer array");
  if (j.size() != G.rank())
    throw DomainError("group element has " + std::to_string(j.size()) + " coordinates, " + G.name() + " needs " +
                      std::to_string(G.rank()));
  GroupElement g = GroupElement::zero(G.rank());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number_integer()) throw DomainError("group element coordinates must be integers");
    g[i] = j[i].get<std::int64_t>();
  }
  return g;
}

inline json to_json(const FiniteSubset& F) {
  json a = json::array();
  for (const auto& g : F) a.push_back(to_json(g));
  return a;
}

/// Accepts an array of elements, or {"box": {"lo": [...], "hi": [...]}} (half-open).
inline FiniteSubset subset_from_json(const GroupSpec& G, const json& j) {
  if (j.is_object() && j.contains("box")) {
    const json& b = j.at("box");
    std::vector<std::int64_t> lo = b.at("lo").get<std::vector<std::int64_t>>();
    std::vector<std::int64_t> hi = b.at("hi").get<std::vector<std::int64_t>>();
    return FiniteSubset::box(G, lo, hi);
  }
  if (j.is_object() && j.contains("elements")) return subset_from_json(G, j.at("elements"));
  if (!j.is_array()) throw DomainError("subset must be a JSON array of elements or a box object");
  std::vector<GroupElement> elems;
  elems.reserve(j.size());
  for (const auto& e : j) elems.push_back(element_from_json(G, e));
  return FiniteSubset(G, std::move(elems));
}

// ---------------------------------------------------------------------------
// Windows
// ---------------------------------------------------------------------------

inline json to_json(const Window& W) {
  json j;
  j["group"] = W.group().name();
  if (W.region().is_box()) {
    j["box"] = {{"lo", std::vector<std::int64_t>(W.region().box_lo().begin(), W.region().box_lo().end())},
                {"hi", std::vector<std::int64_t>(W.region().box_hi().begin(), W.region().box_hi().end())}};
  } else {
    j["elements"] = to_json(W.region());
  }
  return j;
}

inline GroupSpec group_from_json(const json& j) { return GroupSpec::parse(j.at("group").get<std::string>()); }

inline std::shared_ptr<const Window> window_from_json(const json& j) {
  const GroupSpec G = group_from_json(j);
  return std::make_shared<const Window>(subset_from_json(G, j));
}

// ---------------------------------------------------------------------------
// Quasitilings
// ---------------------------------------------------------------------------

inline json to_json(const Quasitiling& t) {
  json j;
  j["group"] = t.group().name();
  j["window"] = to_json(t.window());
  j["shapes"] = json::array();
  j["centers"] = json::array();
  for (std::size_t i = 0; i < t.levels(); ++i) {
    j["shapes"].push_back(to_json(t.shape(i)));
    j["centers"].push_back(to_json(t.center_set(i)));
  }
  json meta = json::object();
  if (t.meta().eps) {
    meta["eps"] = t.meta().eps->to_double();
    meta["eps_num"] = t.meta().eps->num();
    meta["eps_den"] = t.meta().eps->den();
  }
  if (t.meta().covering) {
    meta["covering_num"] = t.meta().covering->num();
    meta["covering_den"] = t.meta().covering->den();
    meta["covering"] = t.meta().covering->to_double();
  }
  if (t.meta().maximal) meta["maximal"] = *t.meta().maximal;
  j["meta"] = meta;
  return j;
}

inline Quasitiling quasitiling_from_json(const json& j) {
  auto W = window_from_json(j.at("window"));
  const GroupSpec& G = W->group();
  if (j.contains("group") && !(GroupSpec::parse(j.at("group").get<std::string>()) == G))
    throw DomainError("quasitiling group differs from its window's group");
  const json& js = j.at("shapes");
  const json& jc = j.at("centers");
  if (!js.is_array() || !jc.is_array() || js.size() != jc.size())
    throw DomainError("shapes and centers must be arrays of equal length");
  std::vector<FiniteSubset> shapes, centers;
  for (std::size_t i = 0; i < js.size(); ++i) {
    shapes.push_back(subset_from_json(G, js[i]));
    centers.push_back(subset_from_json(G, jc[i]));
  }
  QuasitilingMeta meta;
  if (j.contains("meta")) {
    const json& m = j.at("meta");
    if (m.contains("eps_num")) meta.eps = Rational(m.at("eps_num").get<std::int64_t>(), m.at("eps_den").get<std::int64_t>());
    if (m.contains("covering_num"))
      meta.covering = Rational(m.at("covering_num").get<std::int64_t>(), m.at("covering_den").get<std::int64_t>());
    if (m.contains("maximal")) meta.maximal = m.at("maximal").get<bool>();
  }
  return Quasitiling(std::move(shapes), std::move(centers), std::move(W), std::move(meta));
}

// ---------------------------------------------------------------------------
// Patterns and configurations
// ---------------------------------------------------------------------------

inline json to_json(const Pattern& P) {
  return {{"domain", to_json(P.domain())}, {"alphabet", P.alphabet().size}, {"values", P.values()}};
}

inline Pattern pattern_from_json(const GroupSpec& G, const json& j) {
  FiniteSubset dom = subset_from_json(G, j.at("domain"));
  Alphabet a(j.at("alphabet").get<std::int64_t>());
  std::vector<std::uint8_t> vals;
  for (const auto& v : j.at("values")) {
    const auto x = v.get<std::int64_t>();
    if (x < 0 || x >= a.size) throw DomainError("pattern symbol outside the alphabet");
    vals.push_back(static_cast<std::uint8_t>(x));
  }
  return Pattern(std::move(dom), std::move(vals), a);
}

/// Row-major JSON: {"window": ..., "rows": [{"alphabet": n, "values": [...]}, ...]}, values in
/// the window's canonical order.
inline json to_json(const Configuration& y) {
  json rows = json::array();
  for (std::size_t r = 0; r < y.rows(); ++r) rows.push_back({{"alphabet", y.alphabet(r).size}, {"values", y.row(r)}});
  return {{"window", to_json(y.window())}, {"rows", rows}};
}

inline Configuration configuration_from_json(const json& j) {
  auto W = window_from_json(j.at("window"));
  std::vector<Alphabet> alphabets;
  std::vector<std::vector<std::uint8_t>> values;
  for (const auto& row : j.at("rows")) {
    alphabets.emplace_back(row.at("alphabet").get<std::int64_t>());
    std::vector<std::uint8_t> v;
    v.reserve(W->size());
    for (const auto& x : row.at("values")) {
      const auto s = x.get<std::int64_t>();
      if (s < 0 || s > 255) throw DomainError("configuration symbol out of range");
      v.push_back(static_cast<std::uint8_t>(s));
    }
    values.push_back(std::move(v));
  }
  return Configuration(std::move(W), std::move(alphabets), std::move(values));
}

// Compact binary grid, all integers little-endian:
//   "QTCG" | u32 group kind (0 = Z^d, 1 = Heisenberg) | u32 rank
//   | rank × (i64 lo, i64 hi)   half-open window box
//   | u32 rows | rows × u32 alphabet size
//   | rows × |W| bytes          symbols, row by row, window in canonical order
inline constexpr std::array<char, 4> kBinaryMagic{'Q', 'T', 'C', 'G'};

namespace detail {

template <class T>
void put_le(std::ostream& os, T v) {
  unsigned char buf[sizeof(T)];
  auto u = static_cast<std::make_unsigned_t<T>>(v);
  for (std::size_t i = 0; i < sizeof(T); ++i) buf[i] = static_cast<unsigned char>(u >> (8 * i));
  os.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <class T>
T get_le(std::istream& is) {
  unsigned char buf[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(buf), sizeof(T))) throw DomainError("truncated binary configuration");
  std::make_unsigned_t<T> u = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) u |= static_cast<std::make_unsigned_t<T>>(buf[i]) << (8 * i);
  return static_cast<T>(u);
}

}  // namespace detail

inline void write_binary(std::ostream& os, const Configuration& y) {
  const Window& W = y.window();
  if (!W.region().is_box()) throw DomainError("binary configurations require a box window");
  os.write(kBinaryMagic.data(), 4);
  detail::put_le<std::uint32_t>(os, W.group().kind() == GroupSpec::Kind::Zd ? 0 : 1);
  detail::put_le<std::uint32_t>(os, static_cast<std::uint32_t>(W.group().rank()));
  for (std::size_t i = 0; i < W.group().rank(); ++i) {
    detail::put_le<std::int64_t>(os, W.region().box_lo()[i]);
    detail::put_le<std::int64_t>(os, W.region().box_hi()[i]);
  }
  detail::put_le<std::uint32_t>(os, static_cast<std::uint32_t>(y.rows()));
  for (std::size_t r = 0; r < y.rows(); ++r) detail::put_le<std::uint32_t>(os, static_cast<std::uint32_t>(y.alphabet(r).size));
  for (std::size_t r = 0; r < y.rows(); ++r)
    os.write(reinterpret_cast<const char*>(y.row(r).data()), static_cast<std::streamsize>(y.row(r).size()));
}

inline Configuration read_binary(std::istream& is) {
  std::array<char, 4> magic{};
  if (!is.read(magic.data(), 4) || magic != kBinaryMagic) throw DomainError("not a binary configuration (bad magic)");
  const auto kind = detail::get_le<std::uint32_t>(is);
  const auto rank = detail::get_le<std::uint32_t>(is);
  GroupSpec G = GroupSpec::zd(1);
  if (kind == 0)
    G = GroupSpec::zd(static_cast<int>(rank));
  else if (kind == 1 && rank == 3)
    G = GroupSpec::heisenberg();
  else
    throw DomainError("binary configuration has an unknown group");
  std::vector<std::int64_t> lo(rank), hi(rank);
  for (std::size_t i = 0; i < rank; ++i) {
    lo[i] = detail::get_le<std::int64_t>(is);
    hi[i] = detail::get_le<std::int64_t>(is);
  }
  auto W = std::make_shared<const Window>(FiniteSubset::box(G, lo, hi));
  const auto rows = detail::get_le<std::uint32_t>(is);
  if (rows == 0 || rows > 4096) throw DomainError("binary configuration has an invalid row count");
  std::vector<Alphabet> alphabets;
  for (std::size_t r = 0; r < rows; ++r) alphabets.emplace_back(detail::get_le<std::uint32_t>(is));
  std::vector<std::vector<std::uint8_t>> values(rows, std::vector<std::uint8_t>(W->size()));
  for (auto& row : values)
    if (!is.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(row.size())))
      throw DomainError("truncated binary configuration");
  return Configuration(std::move(W), std::move(alphabets), std::move(values));
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

inline json to_json(const WindowDensity& d) {
  json j;
  put_rational(j, "value", d.value);
  j["argmin"] = to_json(d.argmin);
  j["interior_size"] = d.interior_size;
  return j;
}

inline json to_json(const CoreLemmaReport& r) {
  json j;
  put_rational(j, "delta_used", r.delta_used);
  put_rational(j, "defect", r.defect);
  put_rational(j, "core_fraction", r.core_fraction);
  j["core_size"] = r.core_size;
  j["hypothesis_met"] = r.hypothesis_met;
  j["pass"] = r.pass;
  return j;
}

inline json to_json(const BoundaryLemmaReport& r) {
  json j;
  put_rational(j, "boundary_mass", r.boundary_mass);
  put_rational(j, "bound", r.bound);
  put_rational(j, "delta_used", r.delta_used);
  put_rational(j, "defect", r.defect);
  j["boundary_tiles"] = r.boundary_tiles;
  j["hypothesis_met"] = r.hypothesis_met;
  j["pass"] = r.pass;
  return j;
}

inline json to_json(const LargeCoreReport& r) {
  json j;
  j["D_E"] = to_json(r.d_e);
  j["D_Eprime"] = to_json(r.d_eprime);
  put_rational(j, "difference", r.difference);
  put_rational(j, "boundary_bound", r.boundary_bound);
  put_rational(j, "core_slack", r.core_slack);
  j["tiles_disjoint"] = r.tiles_disjoint;
  j["hypotheses_met"] = r.hypotheses_met;
  j["pass"] = r.pass;
  return j;
}

inline json to_json(const FrequencyLemmaReport& r) {
  json j;
  put_rational(j, "fr_F", r.fr_F);
  put_rational(j, "tile_avg", r.tile_avg);
  put_rational(j, "diff", r.diff);
  put_rational(j, "delta_used", r.delta_used);
  put_rational(j, "coverage", r.coverage);
  j["tiles_inside"] = r.tiles_inside;
  j["shapes_invariant"] = r.shapes_invariant;
  j["coverage_ok"] = r.coverage_ok;
  j["hypotheses_met"] = r.hypotheses_met;
  j["pass"] = r.pass;
  return j;
}

inline json to_json(const DisjointnessCertificate& c) {
  json j;
  json assign = json::array();
  for (const auto& [g, t] : c.assignment) assign.push_back({to_json(g), t});
  j["assignment"] = assign;
  j["retained"] = c.retained;
  json frac = json::array();
  for (const auto& r : c.retained_fraction) frac.push_back({{"num", r.num()}, {"den", r.den()}});
  j["retained_fraction"] = frac;
  return j;
}

inline json to_json(const EpsDisjointResult& r, bool include_assignment = false) {
  json j;
  j["pass"] = r.pass;
  if (r.certificate) {
    json c = to_json(*r.certificate);
    if (!include_assignment) c.erase("assignment");
    j["certificate"] = c;
  }
  if (r.obstruction) {
    const auto& o = *r.obstruction;
    json ob;
    ob["tiles"] = o.tiles;
    ob["demand"] = o.demand;
    ob["supply"] = o.supply;
    json el = json::array();
    for (const auto& g : o.elements) el.push_back(to_json(g));
    ob["elements"] = el;
    j["obstruction"] = ob;
  }
  return j;
}

inline json to_json(const AbsorbResult& r) {
  json j;
  j["set"] = to_json(r.set);
  j["size"] = r.set.ssize();
  j["absorbed_tiles"] = r.absorbed_tiles;
  j["no_boundary_tiles"] = r.no_boundary_tiles;
  j["within_spread"] = r.within_spread;
  j["spread_size"] = r.spread_size;
  return j;
}

inline json to_json(const EmpiricalEntropyReport& r) {
  return {{"H_n_hat", r.h_n_hat}, {"sample_count", r.sample_count}, {"distinct_patterns", r.distinct_patterns}};
}

// ---------------------------------------------------------------------------
// Files
// ---------------------------------------------------------------------------

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot write '" + path + "'");
  out << content;
  if (!out) throw DomainError("write to '" + path + "' failed");
}

inline json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw DomainError("invalid JSON in " + what + ": " + e.what());
  }
}

inline json load_json(const std::string& path) { return parse_json(read_file(path), "'" + path + "'"); }

/// Loads a configuration from JSON or from the binary grid format (detected by magic).
inline Configuration load_configuration(const std::string& path) {
  const std::string data = read_file(path);
  if (data.size() >= 4 && std::memcmp(data.data(), kBinaryMagic.data(), 4) == 0) {
    std::istringstream in(data);
    return read_binary(in);
  }
  return configuration_from_json(parse_json(data, "'" + path + "'"));
}

}  // namespace quasitile::io
