#pragma once

#include <array>
#include <cmath>
#include <memory>
#include <vector>

#include "sierpinski/errors.hpp"
#include "sierpinski/fractal_graph.hpp"
#include "sierpinski/numerics.hpp"
#include "sierpinski/vertex_function.hpp"

namespace sierpinski {

/// Energy renormalization constant r: E_m(harmonic ext.) = r E_{m-1}.
inline constexpr double kEnergyRatio = 2.0 / 3.0;

/// r^{-m} = (3/2)^m.
inline double energy_scale(int m) { return std::pow(1.5, m); }

struct EnergyReport {
  int level = 0;
  double raw = 0.0;        ///< E_m(u) = sum over edges (u(X) - u(Y))^2
  double normalized = 0.0; ///< (3/2)^m E_m(u)
};

/// E_m(u, v) = sum over undirected edges X ~ Y of (u(X)-u(Y))(v(X)-v(Y)).
inline double energy_bilinear(const VertexFunction &u, const VertexFunction &v) {
  VertexFunction::require_same_graph(u, v);
  const auto edges = u.graph().edges();
  return pairwise_sum(0, edges.size(), [&](std::size_t e) {
    const auto [x, y] = edges[e];
    return (u[x] - u[y]) * (v[x] - v[y]);
  });
}

inline EnergyReport energy(const VertexFunction &u) {
  const auto edges = u.graph().edges();
  const double raw = pairwise_sum(0, edges.size(), [&](std::size_t e) {
    const double d = u[edges[e][0]] - u[edges[e][1]];
    return d * d;
  });
  return {u.level(), raw, energy_scale(u.level()) * raw};
}

/// Normalized bilinear form (3/2)^m E_m(u, v).
inline double normalized_energy_bilinear(const VertexFunction &u, const VertexFunction &v) {
  return energy_scale(u.level()) * energy_bilinear(u, v);
}

/// Energy-minimizing values at the six edge midpoints of a cell with corner
/// values (a, b, c, d), ordered as kMidpointPairs. Each midpoint gets weight
/// 2/6 from its two edge corners and 1/6 from the opposite two.
constexpr std::array<double, 6> harmonic_extension_cell(double a, double b, double c, double d) {
  return {
      (2 * a + 2 * b + c + d) / 6,
      (a + 2 * b + 2 * c + d) / 6,
      (2 * a + b + 2 * c + d) / 6,
      (2 * a + b + c + 2 * d) / 6,
      (a + 2 * b + c + 2 * d) / 6,
      (a + b + 2 * (c + d)) / 6,
  };
}

constexpr std::array<double, 6> harmonic_extension_cell(const std::array<double, 4> &corners) {
  return harmonic_extension_cell(corners[0], corners[1], corners[2], corners[3]);
}

/// Harmonic extension from ST_{m-1} to ST_m, one (m-1)-cell at a time.
inline VertexFunction harmonic_extend(const VertexFunction &u,
                                      std::shared_ptr<const LevelGraph> target = nullptr) {
  const int m = u.level() + 1;
  if (!target)
    target = shared_level(m);
  if (target->level() != m)
    throw ContractError("harmonic_extend: target graph has the wrong level");

  VertexFunction out(target);
  // V_{m-1} occupies the leading indices of V_m.
  std::copy(u.values().begin(), u.values().end(), out.values().begin());
  const auto coarse = u.graph().cells();
  const auto fine = target->cells();
  for (std::size_t c = 0; c < coarse.size(); ++c) {
    const Cell &corner = coarse[c];
    const auto x = harmonic_extension_cell(u[corner[0]], u[corner[1]], u[corner[2]], u[corner[3]]);
    for (std::size_t s = 0; s < kMidpointPairs.size(); ++s) {
      const auto [k, l] = kMidpointPairs[s];
      // The midpoint (k, l) is corner l of child cell k.
      out[fine[4 * c + k][l]] = x[s];
    }
  }
  return out;
}

/// The harmonic function on ST_m with the given values on V_0.
inline VertexFunction harmonize(const std::array<double, 4> &boundary, int m) {
  if (m < 0)
    throw DomainError("harmonize: level must be nonnegative");
  VertexFunction u(shared_level(0), {boundary.begin(), boundary.end()});
  for (int k = 1; k <= m; ++k)
    u = harmonic_extend(u);
  return u;
}

/// u o f_i as a function on ST_{m-1}: the values of u on the cell f_i(ST).
inline VertexFunction compose_with_map(const VertexFunction &u, std::uint8_t i) {
  if (u.level() < 1)
    throw ContractError("compose_with_map: needs level >= 1");
  auto coarse = shared_level(u.level() - 1);
  VertexFunction out(coarse);
  for (VertexIndex v = 0; v < coarse->size(); ++v)
    out[v] = u[u.graph().require_index(coarse->address(v).with_prefix(i))];
  return out;
}

} // namespace sierpinski
