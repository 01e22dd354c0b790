#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "sierpinski/energy_harmonic.hpp"
#include "sierpinski/errors.hpp"
#include "sierpinski/fractal_graph.hpp"
#include "sierpinski/numerics.hpp"
#include "sierpinski/vertex_function.hpp"

namespace sierpinski {

/// Self-similar measure mu = sum_i w_i mu o f_i^{-1}.
class MeasureModel {
public:
  MeasureModel() = default;
  explicit MeasureModel(const std::array<double, 4> &weights) : weights_(weights) {
    double total = 0.0;
    for (double w : weights_) {
      if (!(w > 0.0) || !std::isfinite(w))
        throw DomainError("MeasureModel: weights must be strictly positive");
      total += w;
    }
    if (std::abs(total - 1.0) > 1e-12)
      throw DomainError("MeasureModel: weights must sum to 1");
  }

  static MeasureModel uniform() { return {}; }

  const std::array<double, 4> &weights() const noexcept { return weights_; }
  bool is_uniform() const noexcept {
    for (double w : weights_)
      if (w != 0.25)
        return false;
    return true;
  }

  /// mu(f_W(ST)) = product of the weights along W.
  double cell_measure(const Address &word) const {
    double mu = 1.0;
    for (std::size_t k = 0; k < word.size(); ++k)
      mu *= weights_[word.letter(k)];
    return mu;
  }

  /// Measure shared by every m-cell; only defined for uniform weights.
  double cell_measure(int m) const {
    require_uniform("cell_measure(level)");
    return std::ldexp(1.0, -2 * m);
  }

  void require_uniform(const char *what) const {
    if (!is_uniform())
      throw DomainError(std::string(what) + " supports only the uniform measure");
  }

private:
  std::array<double, 4> weights_{0.25, 0.25, 0.25, 0.25};
};

/// Integral of the piecewise-harmonic spline psi_X of level m. Each m-cell
/// containing X contributes a quarter of its measure: 2/4^{m+1} inside,
/// 1/4^{m+1} at a corner of ST.
inline double spline_integral(const LevelGraph &g, VertexIndex v,
                              const MeasureModel &mu = MeasureModel::uniform()) {
  g.check(v);
  mu.require_uniform("spline_integral");
  const int cells = LevelGraph::is_boundary(v) ? 1 : 2;
  return cells * std::ldexp(1.0, -2 * (g.level() + 1));
}

/// Delta_m u(X) = sum over neighbours Y of (u(Y) - u(X)), X not in V_0.
inline double graph_laplacian(const VertexFunction &u, VertexIndex x) {
  u.graph().check(x);
  if (LevelGraph::is_boundary(x))
    throw ContractError("graph_laplacian: " + u.graph().address(x).to_string() +
                        " is a boundary vertex");
  double s = 0.0;
  for (VertexIndex y : u.graph().neighbors(x))
    s += u[y] - u[x];
  return s;
}

/// Delta_m u at every interior vertex; zero on V_0.
inline VertexFunction graph_laplacian(const VertexFunction &u) {
  VertexFunction out(u.graph_ptr());
  for (VertexIndex x = 4; x < u.size(); ++x)
    out[x] = graph_laplacian(u, x);
  return out;
}

/// Renormalization 2 * 6^m of the graph Laplacian for the uniform measure:
/// (3/2)^m from the energy times 1/spline_integral = 4^{m+1}/2.
inline double laplacian_scale(int m) { return 2.0 * std::pow(6.0, m); }

struct LaplacianEstimate {
  int level = 0;
  Address vertex;
  double value = 0.0; ///< 2 * 6^m * Delta_m u(X)
};

/// A function that can be evaluated on any level ST_m.
using FunctionSource = std::function<VertexFunction(int level)>;

inline FunctionSource harmonic_source(const std::array<double, 4> &boundary) {
  return [boundary](int m) { return harmonize(boundary, m); };
}

/// Samples a function of position at the embedded vertices.
inline FunctionSource sampled_source(std::function<double(const Point3 &)> f) {
  return [f = std::move(f)](int m) {
    auto g = shared_level(m);
    VertexFunction u(g);
    for (VertexIndex v = 0; v < g->size(); ++v)
      u[v] = f(embed(g->address(v)));
    return u;
  };
}

inline LaplacianEstimate pointwise_laplacian(const VertexFunction &u, const Address &x,
                                             const MeasureModel &mu = MeasureModel::uniform()) {
  mu.require_uniform("pointwise_laplacian");
  const VertexIndex v = u.graph().require_index(x);
  if (LevelGraph::is_boundary(v))
    throw ContractError("pointwise_laplacian: X must not lie in V_0");
  return {u.level(), canonicalize(x), laplacian_scale(u.level()) * graph_laplacian(u, v)};
}

inline LaplacianEstimate pointwise_laplacian(const FunctionSource &source, const Address &x, int m,
                                             const MeasureModel &mu = MeasureModel::uniform()) {
  return pointwise_laplacian(source(m), x, mu);
}

/// Estimates at X for every level in [m_from, m_to]. Reported only: no
/// convergence is asserted for generic inputs.
inline std::vector<LaplacianEstimate>
laplacian_convergence(const FunctionSource &source, const Address &x, int m_from, int m_to,
                      const MeasureModel &mu = MeasureModel::uniform()) {
  std::vector<LaplacianEstimate> out;
  for (int m = m_from; m <= m_to; ++m)
    out.push_back(pointwise_laplacian(source, x, m, mu));
  return out;
}

struct NormalDerivativeEstimate {
  Address vertex;
  int level = 0;
  double value = 0.0; ///< (3/2)^k sum over Y ~ X of (u(X) - u(Y))
};

/// Level-k estimate of the normal derivative of u at X, with k = u.level().
inline NormalDerivativeEstimate normal_derivative(const VertexFunction &u, const Address &x) {
  const VertexIndex v = u.graph().require_index(x);
  double flux = 0.0;
  for (VertexIndex y : u.graph().neighbors(v))
    flux += u[v] - u[y];
  return {canonicalize(x), u.level(), energy_scale(u.level()) * flux};
}

inline NormalDerivativeEstimate normal_derivative(const FunctionSource &source, const Address &x,
                                                  int k) {
  return normal_derivative(source(k), x);
}

struct GaussGreenReport {
  double energy = 0.0;        ///< (3/2)^m E_m(u, v)
  double interior_term = 0.0; ///< -(3/2)^m sum_{X interior} v(X) Delta_m u(X)
  double boundary_term = 0.0; ///< (3/2)^m sum_{X in V_0} v(X) sum_Y (u(X) - u(Y))
  double residual = 0.0;      ///< energy - (interior_term + boundary_term)
  double scale = 0.0;         ///< magnitude of the summed terms
  double relative() const { return scale > 0.0 ? std::abs(residual) / scale : std::abs(residual); }
};

/// Discrete summation by parts on ST_m.
inline GaussGreenReport gauss_green_check(const VertexFunction &u, const VertexFunction &v) {
  VertexFunction::require_same_graph(u, v);
  const LevelGraph &g = u.graph();
  const double s = energy_scale(g.level());

  GaussGreenReport r;
  r.energy = s * energy_bilinear(u, v);
  double magnitude = 0.0;
  r.interior_term = -s * pairwise_sum(4, g.size(), [&](std::size_t x) {
    const double t = v[x] * graph_laplacian(u, static_cast<VertexIndex>(x));
    magnitude += std::abs(t);
    return t;
  });
  double boundary = 0.0;
  for (VertexIndex x : LevelGraph::boundary()) {
    double flux = 0.0;
    for (VertexIndex y : g.neighbors(x))
      flux += u[x] - u[y];
    boundary += v[x] * flux;
    magnitude += std::abs(v[x] * flux);
  }
  r.boundary_term = s * boundary;
  r.residual = r.energy - (r.interior_term + r.boundary_term);
  r.scale = std::max(std::abs(r.energy), s * magnitude);
  return r;
}

} // namespace sierpinski
