#pragma once

// JSON file formats.
//
//   rack      {"kind":"rack","n":N,"base":null|int,"table":[[...]]}
//   group     {"kind":"group","n":N,"table":[[...]]}
//   groupoid  {"kind":"groupoid","objects":k,"arrows":n,"s":[..],"t":[..],
//              "unit":[..],"inv":[..],"comp":[[x,y,z],...]}
//   rackoid   {"kind":"rackoid","objects":k,"arrows":n,"s":[..],"t":[..],
//              "unit":[..]|null,"bisections":[[sec..],..],"op":[[..],..]}
//   leibniz   {"kind":"leibniz","dim":d,"c":[[[..]]]}, entries "p/q" or numbers
//   augment   {"kind":"augment","mode":"rack"|"rackoid"|"fiber-product",...}
//   hemi      {"kind":"hemi-catalog","dim":n,"steps_per_unit":S,
//              "bisections":[{"field":"..","time":u,"omega":".."},..]}

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hemi.hpp"
#include "leibniz.hpp"
#include "rackoid.hpp"

namespace rackworks::io {

using nlohmann::json;

inline json read_json_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw InputError("cannot read file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error &e) {
    throw InputError("'" + path + "' is not valid JSON: " + e.what());
  }
}

inline void write_json_file(const std::string &path, const json &j) {
  std::ofstream out(path);
  if (!out)
    throw InputError("cannot write file '" + path + "'");
  out << j.dump(2) << "\n";
  if (!out)
    throw InputError("write to '" + path + "' failed");
}

namespace detail {

inline const json &field(const json &j, const char *key) {
  if (!j.is_object() || !j.contains(key))
    throw InputError(std::string("missing field '") + key + "'");
  return j.at(key);
}

template <class T> T get(const json &j, const char *key) {
  try {
    return field(j, key).get<T>();
  } catch (const json::exception &e) {
    throw InputError(std::string("field '") + key + "' has the wrong type");
  }
}

inline void require_kind(const json &j, const std::string &kind) {
  const auto k = get<std::string>(j, "kind");
  if (k != kind)
    throw InputError("expected kind '" + kind + "', got '" + k + "'");
}

inline Table square_table(const json &j, int n, const char *what) {
  const auto t = get<Table>(j, "table");
  if (static_cast<int>(t.size()) != n)
    throw InputError(std::string(what) + ": table has " + std::to_string(t.size()) +
                     " rows, expected " + std::to_string(n));
  for (const auto &row : t) {
    if (static_cast<int>(row.size()) != n)
      throw InputError(std::string(what) + ": table row has wrong length");
    for (int v : row)
      if (v < 0 || v >= n)
        throw InputError(std::string(what) + ": table entry out of range");
  }
  return t;
}

inline FinitePrecategory precategory(const json &j) {
  FinitePrecategory pc;
  pc.objects = get<int>(j, "objects");
  pc.arrows = get<int>(j, "arrows");
  pc.s = get<std::vector<int>>(j, "s");
  pc.t = get<std::vector<int>>(j, "t");
  if (j.contains("unit") && !j.at("unit").is_null())
    pc.unit = get<std::vector<int>>(j, "unit");
  if (pc.objects <= 0 || pc.arrows <= 0)
    throw InputError("objects and arrows must be positive");
  if (static_cast<int>(pc.s.size()) != pc.arrows || static_cast<int>(pc.t.size()) != pc.arrows)
    throw InputError("s and t need one entry per arrow");
  if (pc.unital() && static_cast<int>(pc.unit.size()) != pc.objects)
    throw InputError("unit needs one entry per object");
  for (const auto *v : {&pc.s, &pc.t})
    for (int x : *v)
      if (x < 0 || x >= pc.objects)
        throw InputError("source/target entry out of range");
  for (int u : pc.unit)
    if (u < 0 || u >= pc.arrows)
      throw InputError("unit entry out of range");
  return pc;
}

inline void put_precategory(json &j, const FinitePrecategory &pc) {
  j["objects"] = pc.objects;
  j["arrows"] = pc.arrows;
  j["s"] = pc.s;
  j["t"] = pc.t;
  j["unit"] = pc.unital() ? json(pc.unit) : json(nullptr);
}

inline Rational rational(const json &v) {
  if (v.is_string())
    return parse_rational(v.get<std::string>());
  if (v.is_number_integer())
    return Rational(v.get<long long>());
  if (v.is_number_float())
    return parse_rational(v.dump());
  throw InputError("rational entry must be a number or a \"p/q\" string");
}

} // namespace detail

inline FiniteRack rack_from_json(const json &j) {
  detail::require_kind(j, "rack");
  const int n = detail::get<int>(j, "n");
  if (n <= 0)
    throw InputError("rack: n must be positive");
  FiniteRack r{detail::square_table(j, n, "rack"), std::nullopt};
  if (j.contains("base") && !j.at("base").is_null()) {
    const int b = detail::get<int>(j, "base");
    if (b < 0 || b >= n)
      throw InputError("rack: base out of range");
    r.base = b;
  }
  return r;
}

inline json to_json(const FiniteRack &r) {
  return {{"kind", "rack"},
          {"n", r.size()},
          {"base", r.base ? json(*r.base) : json(nullptr)},
          {"table", r.table}};
}

inline Table group_table_from_json(const json &j) {
  detail::require_kind(j, "group");
  const int n = detail::get<int>(j, "n");
  if (n <= 0)
    throw InputError("group: n must be positive");
  return detail::square_table(j, n, "group");
}

inline json to_json(const FiniteGroup &g) {
  return {{"kind", "group"}, {"n", g.size()}, {"table", g.table()}};
}

inline FiniteGroupoid groupoid_from_json(const json &j) {
  detail::require_kind(j, "groupoid");
  FiniteGroupoid g;
  g.pc = detail::precategory(j);
  if (!g.pc.unital())
    throw InputError("groupoid: unit is required");
  g.inv = detail::get<std::vector<int>>(j, "inv");
  if (static_cast<int>(g.inv.size()) != g.pc.arrows)
    throw InputError("groupoid: inv needs one entry per arrow");
  for (int v : g.inv)
    if (v < 0 || v >= g.pc.arrows)
      throw InputError("groupoid: inv entry out of range");
  g.comp.assign(g.pc.arrows, std::vector<int>(g.pc.arrows, -1));
  for (const auto &triple : detail::get<std::vector<std::vector<int>>>(j, "comp")) {
    if (triple.size() != 3)
      throw InputError("groupoid: comp entries are [x,y,z] triples");
    for (int v : triple)
      if (v < 0 || v >= g.pc.arrows)
        throw InputError("groupoid: comp entry out of range");
    if (g.comp[triple[0]][triple[1]] >= 0)
      throw InputError("groupoid: duplicate composite for (" + std::to_string(triple[0]) + "," +
                       std::to_string(triple[1]) + ")");
    g.comp[triple[0]][triple[1]] = triple[2];
  }
  return g;
}

inline json to_json(const FiniteGroupoid &g) {
  json j{{"kind", "groupoid"}};
  detail::put_precategory(j, g.pc);
  j["inv"] = g.inv;
  json comp = json::array();
  for (int x = 0; x < g.arrows(); ++x)
    for (int y = 0; y < g.arrows(); ++y)
      if (g.comp[x][y] >= 0)
        comp.push_back({x, y, g.comp[x][y]});
  j["comp"] = comp;
  return j;
}

/// Bisections are read as source sections; underline is t∘sec, so a
/// malformed section is reported by check_rackoid rather than rejected here.
inline RackoidTable rackoid_from_json(const json &j) {
  detail::require_kind(j, "rackoid");
  RackoidTable r;
  r.pc = detail::precategory(j);
  for (const auto &sec : detail::get<std::vector<std::vector<int>>>(j, "bisections")) {
    if (static_cast<int>(sec.size()) != r.pc.objects)
      throw InputError("rackoid: bisection needs one arrow per object");
    Bisection b{sec, std::vector<int>(sec.size())};
    for (std::size_t m = 0; m < sec.size(); ++m) {
      if (sec[m] < 0 || sec[m] >= r.pc.arrows)
        throw InputError("rackoid: bisection entry out of range");
      b.underline[m] = r.pc.t[sec[m]];
    }
    r.bis.push_back(std::move(b));
  }
  r.op = detail::get<Table>(j, "op");
  return r;
}

inline json to_json(const RackoidTable &r) {
  json j{{"kind", "rackoid"}};
  detail::put_precategory(j, r.pc);
  json bis = json::array();
  for (const auto &b : r.bis)
    bis.push_back(b.sec);
  j["bisections"] = bis;
  j["op"] = r.op;
  return j;
}

inline LeibnizStructure<Rational> leibniz_from_json(const json &j) {
  detail::require_kind(j, "leibniz");
  const int d = detail::get<int>(j, "dim");
  if (d <= 0)
    throw InputError("leibniz: dim must be positive");
  const auto &c = detail::field(j, "c");
  if (!c.is_array())
    throw InputError("leibniz: c must be a nested array");
  std::vector<std::vector<std::vector<Rational>>> cube;
  for (const auto &plane : c) {
    if (!plane.is_array())
      throw InputError("leibniz: c must be a nested array");
    auto &P = cube.emplace_back();
    for (const auto &row : plane) {
      if (!row.is_array())
        throw InputError("leibniz: c must be a nested array");
      auto &R = P.emplace_back();
      for (const auto &v : row)
        R.push_back(detail::rational(v));
    }
  }
  if (static_cast<int>(cube.size()) != d)
    throw InputError("leibniz: c has " + std::to_string(cube.size()) + " planes, expected " +
                     std::to_string(d));
  return LeibnizStructure<Rational>::from_cube(cube);
}

inline json to_json(const LeibnizStructure<Rational> &s) {
  json c = json::array();
  for (int i = 0; i < s.dim(); ++i) {
    json plane = json::array();
    for (int j = 0; j < s.dim(); ++j) {
      json row = json::array();
      for (int k = 0; k < s.dim(); ++k)
        row.push_back(to_string(s.at(i, j, k)));
      plane.push_back(row);
    }
    c.push_back(plane);
  }
  return {{"kind", "leibniz"}, {"dim", s.dim()}, {"c", c}};
}

/// Hemi catalog; omega defaults to the zero form.
inline std::vector<HemiBisection> hemi_catalog_from_json(const json &j, int dim) {
  detail::require_kind(j, "hemi-catalog");
  const int n = detail::get<int>(j, "dim");
  if (n != dim)
    throw InputError("hemi catalog has dim " + std::to_string(n) + ", expected " +
                     std::to_string(dim));
  const int steps = j.contains("steps_per_unit") ? detail::get<int>(j, "steps_per_unit")
                                                 : kDefaultStepsPerUnit;
  if (steps < 1)
    throw InputError("hemi catalog: steps_per_unit must be positive");
  std::vector<HemiBisection> out;
  for (const auto &b : detail::field(j, "bisections")) {
    const auto fieldSrc = detail::get<std::string>(b, "field");
    const double time = detail::get<double>(b, "time");
    const auto omegaSrc =
        b.contains("omega") ? detail::get<std::string>(b, "omega") : std::string();
    out.push_back(HemiBisection::of(
        omegaSrc.empty() ? expr::zeros(n) : parse_expr_list(omegaSrc, n),
        FlowDiffeo{parse_expr_list(fieldSrc, n), time, steps}));
  }
  if (out.empty())
    throw InputError("hemi catalog is empty");
  return out;
}

/// Comma-separated decimals.
inline std::vector<double> parse_point(const std::string &src, int n) {
  std::vector<double> out;
  std::stringstream ss(src);
  std::string piece;
  while (std::getline(ss, piece, ',')) {
    std::istringstream is(piece);
    is.imbue(std::locale::classic());
    double v;
    if (!(is >> v) || !(is >> std::ws).eof() || !std::isfinite(v))
      throw InputError("malformed coordinate '" + piece + "' in point '" + src + "'");
    out.push_back(v);
  }
  if (static_cast<int>(out.size()) != n)
    throw InputError("point '" + src + "' needs " + std::to_string(n) + " coordinates");
  return out;
}

} // namespace rackworks::io
