#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "sierpinski/errors.hpp"
#include "sierpinski/fractal_graph.hpp"

namespace sierpinski {

/// A real value at every vertex of a LevelGraph.
class VertexFunction {
public:
  explicit VertexFunction(std::shared_ptr<const LevelGraph> graph)
      : graph_(std::move(graph)), values_(graph_->size(), 0.0) {}

  VertexFunction(std::shared_ptr<const LevelGraph> graph, std::vector<double> values)
      : graph_(std::move(graph)), values_(std::move(values)) {
    if (values_.size() != graph_->size())
      throw ContractError("VertexFunction: " + std::to_string(values_.size()) +
                          " values for " + std::to_string(graph_->size()) + " vertices");
    for (double x : values_)
      if (!std::isfinite(x))
        throw DomainError("VertexFunction: non-finite value");
  }

  static VertexFunction constant(std::shared_ptr<const LevelGraph> graph, double c) {
    const auto n = graph->size();
    return VertexFunction(std::move(graph), std::vector<double>(n, c));
  }

  const LevelGraph &graph() const noexcept { return *graph_; }
  const std::shared_ptr<const LevelGraph> &graph_ptr() const noexcept { return graph_; }
  int level() const noexcept { return graph_->level(); }
  std::size_t size() const noexcept { return values_.size(); }

  double operator[](VertexIndex v) const { return values_[v]; }
  double &operator[](VertexIndex v) { return values_[v]; }
  double at(const Address &a) const { return values_[graph_->require_index(a)]; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  double max_abs() const {
    double m = 0.0;
    for (double x : values_)
      m = std::max(m, std::abs(x));
    return m;
  }

  VertexFunction &operator+=(const VertexFunction &o) {
    require_same_graph(*this, o);
    for (std::size_t i = 0; i < values_.size(); ++i)
      values_[i] += o.values_[i];
    return *this;
  }
  VertexFunction &operator-=(const VertexFunction &o) {
    require_same_graph(*this, o);
    for (std::size_t i = 0; i < values_.size(); ++i)
      values_[i] -= o.values_[i];
    return *this;
  }
  VertexFunction &operator*=(double s) {
    for (double &x : values_)
      x *= s;
    return *this;
  }
  friend VertexFunction operator+(VertexFunction a, const VertexFunction &b) { return a += b; }
  friend VertexFunction operator-(VertexFunction a, const VertexFunction &b) { return a -= b; }
  friend VertexFunction operator*(double s, VertexFunction a) { return a *= s; }

  /// Graphs are a pure function of their level, so equal levels mean equal graphs.
  static void require_same_graph(const VertexFunction &a, const VertexFunction &b) {
    if (a.graph_ != b.graph_ && (a.level() != b.level() || a.size() != b.size()))
      throw GraphMismatchError("functions live on levels " + std::to_string(a.level()) +
                               " and " + std::to_string(b.level()));
  }

private:
  std::shared_ptr<const LevelGraph> graph_;
  std::vector<double> values_;
};

} // namespace sierpinski
