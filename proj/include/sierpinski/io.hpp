#pragma once

#include <charconv>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sierpinski/dense_oracle.hpp"
#include "sierpinski/errors.hpp"
#include "sierpinski/fractal_graph.hpp"
#include "sierpinski/measure_laplacian.hpp"
#include "sierpinski/spectral_decimation.hpp"
#include "sierpinski/vertex_function.hpp"

namespace sierpinski::io {

using json = nlohmann::ordered_json;

/// Shortest decimal string that parses back to exactly x.
inline std::string format_double(double x) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc{})
    throw Error("format_double: conversion failed");
  return {buf, end};
}

inline std::string word_string(const Address &a) {
  std::string s;
  for (std::size_t k = 0; k < a.size(); ++k)
    s.push_back(static_cast<char>('0' + a.letter(k)));
  return s;
}

// --- graph -----------------------------------------------------------------

/// Wavefront OBJ: one `v` per vertex, one `l` per edge (1-based indices).
inline void write_obj(std::ostream &os, const LevelGraph &g) {
  os << "# Sierpinski tetrahedron graph, level " << g.level() << "\n";
  os << "# " << g.size() << " vertices, " << g.edges().size() << " edges\n";
  for (const auto &v : embed(g))
    os << "v " << format_double(v.coords[0]) << ' ' << format_double(v.coords[1]) << ' '
       << format_double(v.coords[2]) << '\n';
  for (const auto &[a, b] : g.edges())
    os << "l " << a + 1 << ' ' << b + 1 << '\n';
}

/// {level, vertices: [{id, word, base, xyz}], edges: [[i, j]]}
inline json graph_json(const LevelGraph &g) {
  json vertices = json::array();
  const auto embedded = embed(g);
  for (std::size_t i = 0; i < embedded.size(); ++i) {
    const auto &v = embedded[i];
    vertices.push_back({{"id", i},
                        {"word", word_string(v.address)},
                        {"base", v.address.base()},
                        {"xyz", {v.coords[0], v.coords[1], v.coords[2]}}});
  }
  json edges = json::array();
  for (const auto &[a, b] : g.edges())
    edges.push_back({a, b});
  return {{"level", g.level()}, {"vertices", std::move(vertices)}, {"edges", std::move(edges)}};
}

// --- functions and estimates ------------------------------------------------

inline void write_vertex_function_csv(std::ostream &os, const VertexFunction &u) {
  os << "address,x,y,z,value\n";
  const LevelGraph &g = u.graph();
  for (VertexIndex v = 0; v < g.size(); ++v) {
    const auto p = embed(g.address(v));
    os << g.address(v).to_string() << ',' << format_double(p[0]) << ',' << format_double(p[1])
       << ',' << format_double(p[2]) << ',' << format_double(u[v]) << '\n';
  }
}

inline void write_laplacian_csv(std::ostream &os, std::span<const LaplacianEstimate> rows) {
  os << "level,address,value\n";
  for (const auto &r : rows)
    os << r.level << ',' << r.vertex.to_string() << ',' << format_double(r.value) << '\n';
}

// --- spectra -----------------------------------------------------------------

inline json record_json(const Lineage &lineage, double value, std::uint64_t multiplicity) {
  return {{"value", value},
          {"multiplicity", multiplicity},
          {"birth_level", lineage.birth_level},
          {"birth_value", lineage.birth_value},
          {"branches", lineage.branch_string()}};
}

/// {level, records: [{value, multiplicity, birth_level, birth_value, branches}]}
inline json spectrum_json(const SpectrumTable &t) {
  json records = json::array();
  for (const auto &r : t.records)
    records.push_back(record_json(r.lineage, r.value, r.multiplicity));
  return {{"level", t.level}, {"records", std::move(records)}};
}

inline SpectrumTable spectrum_from_json(const json &j) {
  try {
    SpectrumTable t;
    t.level = j.at("level").get<int>();
    for (const auto &r : j.at("records")) {
      EigenvalueRecord rec;
      rec.level = t.level;
      rec.value = r.at("value").get<double>();
      rec.multiplicity = r.at("multiplicity").get<std::uint64_t>();
      rec.lineage.birth_level = r.at("birth_level").get<int>();
      rec.lineage.birth_value = r.at("birth_value").get<int>();
      rec.lineage.branches = Lineage::parse_branches(r.at("branches").get<std::string>());
      t.total_multiplicity += rec.multiplicity;
      t.records.push_back(std::move(rec));
    }
    return t;
  } catch (const json::exception &e) {
    throw DomainError(std::string("spectrum_from_json: ") + e.what());
  }
}

inline void write_spectrum_csv(std::ostream &os, const SpectrumTable &t) {
  os << "level,value,multiplicity,birth_level,birth_value,branches\n";
  for (const auto &r : t.records)
    os << t.level << ',' << format_double(r.value) << ',' << r.multiplicity << ','
       << r.lineage.birth_level << ',' << r.lineage.birth_value << ','
       << r.lineage.branch_string() << '\n';
}

inline json limit_spectrum_json(int m_birth_max, std::span<const LimitEigenvalue> limits) {
  json records = json::array();
  for (const auto &r : limits) {
    json rec = record_json(r.lineage, r.value, r.multiplicity);
    rec["generations_used"] = r.generations_used;
    records.push_back(std::move(rec));
  }
  return {{"birth_level_max", m_birth_max}, {"records", std::move(records)}};
}

inline void write_limit_spectrum_csv(std::ostream &os, std::span<const LimitEigenvalue> limits) {
  os << "value,multiplicity,birth_level,birth_value,branches,generations_used\n";
  for (const auto &r : limits)
    os << format_double(r.value) << ',' << r.multiplicity << ',' << r.lineage.birth_level << ','
       << r.lineage.birth_value << ',' << r.lineage.branch_string() << ','
       << r.generations_used << '\n';
}

inline void write_counting_csv(std::ostream &os,
                               std::span<const std::pair<double, std::uint64_t>> steps) {
  os << "x,N\n";
  for (const auto &[x, n] : steps)
    os << format_double(x) << ',' << n << '\n';
}

inline json weyl_fit_json(const WeylFit &fit) {
  return {{"alpha_hat", fit.alpha_hat},
          {"alpha_expected", DimensionConstants::weyl_alpha},
          {"formula", DimensionConstants::weyl_alpha_formula},
          {"intercept", fit.intercept},
          {"rms_residual", fit.rms_residual},
          {"max_residual", fit.max_residual},
          {"points_used", fit.points_used},
          {"x_low", fit.x_low},
          {"x_high", fit.x_high}};
}

inline void write_oracle_csv(std::ostream &os, int level, const oracle::EigenDecomposition &eig) {
  os << "level,index,eigenvalue\n";
  for (std::size_t k = 0; k < eig.values.size(); ++k)
    os << level << ',' << k << ',' << format_double(eig.values[k]) << '\n';
}

inline json constants_json() {
  using C = DimensionConstants;
  auto entry = [](double v, const char *f) { return json{{"value", v}, {"formula", f}}; };
  return {{"hausdorff", entry(C::hausdorff, C::hausdorff_formula)},
          {"beta", entry(C::beta, C::beta_formula)},
          {"resistance_dim", entry(C::resistance_dim, C::resistance_dim_formula)},
          {"weyl_alpha", entry(C::weyl_alpha, C::weyl_alpha_formula)},
          {"energy_ratio", entry(2.0 / 3.0, "2/3")}};
}

} // namespace sierpinski::io
