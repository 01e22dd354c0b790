#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sierpinski/address.hpp"
#include "sierpinski/errors.hpp"

namespace sierpinski {

using VertexIndex = std::uint32_t;
using Edge = std::array<VertexIndex, 2>;
using Cell = std::array<VertexIndex, 4>;
using Point3 = std::array<double, 3>;

inline constexpr int kDefaultLevelCap = 12;

/// The six unordered corner pairs of a cell, in the order used for midpoint
/// values everywhere in the library: x1..x6 <-> 01, 12, 02, 03, 13, 23.
inline constexpr std::array<std::array<std::uint8_t, 2>, 6> kMidpointPairs{
    {{0, 1}, {1, 2}, {0, 2}, {0, 3}, {1, 3}, {2, 3}}};

/// Position of the midpoint of corners (k, l) in kMidpointPairs.
constexpr std::size_t midpoint_slot(std::uint8_t k, std::uint8_t l) {
  if (k > l)
    std::swap(k, l);
  for (std::size_t s = 0; s < kMidpointPairs.size(); ++s)
    if (kMidpointPairs[s][0] == k && kMidpointPairs[s][1] == l)
      return s;
  throw ContractError("midpoint_slot: corners must differ");
}

/// Number of vertices of ST_m: N_0 = 4, N_m = 4 N_{m-1} - 6.
constexpr std::uint64_t vertex_count(int m) {
  std::uint64_t n = 4;
  for (int k = 0; k < m; ++k)
    n = 4 * n - 6;
  return n;
}

constexpr std::uint64_t cell_count(int m) { return std::uint64_t{1} << (2 * m); }

/// The graph ST_m. Vertices are the canonical addresses of V_m: the four
/// corners first, then every other point ordered by (word length, word,
/// base). Because of that order the first vertex_count(m-1) vertices are
/// exactly V_{m-1}, in the same order as in ST_{m-1}.
///
/// Immutable once built.
class LevelGraph {
public:
  int level() const noexcept { return level_; }
  std::size_t size() const noexcept { return vertices_.size(); }
  std::span<const Address> vertices() const noexcept { return vertices_; }
  const Address &address(VertexIndex v) const { return vertices_.at(v); }
  std::span<const Edge> edges() const noexcept { return edges_; }
  /// Cells in lexicographic word order; cell[k] is the index of f_W(P_k).
  std::span<const Cell> cells() const noexcept { return cells_; }
  static constexpr std::array<VertexIndex, 4> boundary() noexcept { return {0, 1, 2, 3}; }
  static constexpr bool is_boundary(VertexIndex v) noexcept { return v < 4; }

  std::span<const VertexIndex> neighbors(VertexIndex v) const {
    check(v);
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }
  std::size_t degree(VertexIndex v) const { return neighbors(v).size(); }

  std::optional<VertexIndex> index_of(const Address &a) const {
    const Address c = canonicalize(a);
    auto it = std::lower_bound(vertices_.begin(), vertices_.end(), c);
    if (it == vertices_.end() || *it != c)
      return std::nullopt;
    return static_cast<VertexIndex>(it - vertices_.begin());
  }
  VertexIndex require_index(const Address &a) const {
    if (auto v = index_of(a))
      return *v;
    throw ContractError("vertex " + a.to_string() + " is not in V_" +
                        std::to_string(level_));
  }

  void check(VertexIndex v) const {
    if (v >= vertices_.size())
      throw ContractError("vertex index " + std::to_string(v) +
                          " out of range for level " + std::to_string(level_));
  }

private:
  friend LevelGraph build_level(int m, int cap);

  int level_ = 0;
  std::vector<Address> vertices_;
  std::vector<Edge> edges_;
  std::vector<Cell> cells_;
  std::vector<std::size_t> offsets_;
  std::vector<VertexIndex> adjacency_;
};

/// Build ST_m by refining ST_0 = K_4 cell by cell. Each (m-1)-cell f_W
/// receives six new points f_{W k}(P_l), k < l; child cell f_{W k} keeps
/// corner k and takes the midpoints (k, j) as its other corners.
inline LevelGraph build_level(int m, int cap = kDefaultLevelCap) {
  if (m < 0)
    throw DomainError("build_level: level must be nonnegative");
  if (m > cap)
    throw ResourceError("build_level: level " + std::to_string(m) +
                        " exceeds cap " + std::to_string(cap) + " (" +
                        std::to_string(vertex_count(m)) + " vertices)");
  if (static_cast<std::size_t>(m) > Address::kMaxLength ||
      vertex_count(m) > std::uint64_t{UINT32_MAX})
    throw ResourceError("build_level: level " + std::to_string(m) +
                        " is beyond addressable range");

  LevelGraph g;
  g.level_ = m;
  g.vertices_.reserve(vertex_count(m));
  for (std::uint8_t i = 0; i < 4; ++i)
    g.vertices_.emplace_back(i);
  g.cells_ = {Cell{0, 1, 2, 3}};

  // Words of the current cells, parallel to g.cells_.
  std::vector<Address> words{Address{}};
  for (int level = 1; level <= m; ++level) {
    std::vector<Cell> cells;
    std::vector<Address> next_words;
    cells.reserve(4 * g.cells_.size());
    next_words.reserve(4 * g.cells_.size());
    for (std::size_t c = 0; c < g.cells_.size(); ++c) {
      const Cell &parent = g.cells_[c];
      const Address &word = words[c];
      std::array<VertexIndex, 6> mid{};
      // Emit in (k, l) lexicographic order so vertices stay sorted.
      for (std::uint8_t k = 0; k < 4; ++k)
        for (std::uint8_t l = k + 1; l < 4; ++l) {
          Address a = word;
          a.push_back(k);
          a.set_base(l);
          mid[midpoint_slot(k, l)] = static_cast<VertexIndex>(g.vertices_.size());
          g.vertices_.push_back(a);
        }
      for (std::uint8_t k = 0; k < 4; ++k) {
        Cell child{};
        for (std::uint8_t j = 0; j < 4; ++j)
          child[j] = (j == k) ? parent[k] : mid[midpoint_slot(k, j)];
        cells.push_back(child);
        Address w = word;
        w.push_back(k);
        next_words.push_back(w);
      }
    }
    g.cells_ = std::move(cells);
    words = std::move(next_words);
  }

  g.edges_.reserve(6 * g.cells_.size());
  for (const Cell &cell : g.cells_)
    for (const auto &[k, l] : kMidpointPairs) {
      auto a = cell[k], b = cell[l];
      if (a > b)
        std::swap(a, b);
      g.edges_.push_back({a, b});
    }
  std::sort(g.edges_.begin(), g.edges_.end());

  const std::size_t n = g.vertices_.size();
  g.offsets_.assign(n + 1, 0);
  for (const auto &[a, b] : g.edges_) {
    ++g.offsets_[a + 1];
    ++g.offsets_[b + 1];
  }
  for (std::size_t v = 0; v < n; ++v)
    g.offsets_[v + 1] += g.offsets_[v];
  g.adjacency_.resize(g.offsets_[n]);
  std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const auto &[a, b] : g.edges_) {
    g.adjacency_[fill[a]++] = b;
    g.adjacency_[fill[b]++] = a;
  }
  for (std::size_t v = 0; v < n; ++v)
    std::sort(g.adjacency_.begin() + g.offsets_[v], g.adjacency_.begin() + g.offsets_[v + 1]);
  return g;
}

/// Process-wide cache of built levels; graphs are immutable so sharing is safe.
inline std::shared_ptr<const LevelGraph> shared_level(int m, int cap = kDefaultLevelCap) {
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const LevelGraph>> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(m); it != cache.end())
      return it->second;
  }
  auto g = std::make_shared<const LevelGraph>(build_level(m, cap));
  std::lock_guard lock(mutex);
  return cache.emplace(m, std::move(g)).first->second;
}

inline std::vector<VertexIndex> neighbors(const LevelGraph &g, VertexIndex v) {
  auto span = g.neighbors(v);
  return {span.begin(), span.end()};
}

// ---------------------------------------------------------------------------
// Embedding

/// Corners of the unit regular tetrahedron used for all coordinate exports.
inline const std::array<Point3, 4> &tetrahedron_corners() {
  static const std::array<Point3, 4> corners{{
      {0.0, 0.0, 0.0},
      {1.0, 0.0, 0.0},
      {0.5, std::sqrt(3.0) / 2.0, 0.0},
      {0.5, std::sqrt(3.0) / 6.0, std::sqrt(6.0) / 3.0},
  }};
  return corners;
}

/// f_i(X) = (X + P_i) / 2.
inline Point3 contract(std::uint8_t i, const Point3 &x) {
  const Point3 &p = tetrahedron_corners().at(i);
  return {(x[0] + p[0]) / 2.0, (x[1] + p[1]) / 2.0, (x[2] + p[2]) / 2.0};
}

inline Point3 embed(const Address &a) {
  Point3 x = tetrahedron_corners()[a.base()];
  for (std::size_t k = a.size(); k-- > 0;)
    x = contract(a.letter(k), x);
  return x;
}

struct EmbeddedVertex {
  Address address;
  Point3 coords;
};

inline std::vector<EmbeddedVertex> embed(const LevelGraph &g) {
  std::vector<EmbeddedVertex> out;
  out.reserve(g.size());
  for (const Address &a : g.vertices())
    out.push_back({a, embed(a)});
  return out;
}

} // namespace sierpinski
