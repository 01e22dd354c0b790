#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sierpinski/errors.hpp"
#include "sierpinski/fractal_graph.hpp"
#include "sierpinski/vertex_function.hpp"

namespace sierpinski::oracle {

inline constexpr int kMaxOracleLevel = 5;

/// Dense symmetric matrix, row-major.
class SymmetricMatrix {
public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}

  static SymmetricMatrix identity(std::size_t n) {
    SymmetricMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
      m(i, i) = 1.0;
    return m;
  }

  std::size_t dim() const noexcept { return n_; }
  double &operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const { return {a_.data() + i * n_, n_}; }

  double frobenius_norm() const {
    double s = 0.0;
    for (double x : a_)
      s += x * x;
    return std::sqrt(s);
  }
  bool is_symmetric() const {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j)
        if ((*this)(i, j) != (*this)(j, i))
          return false;
    return true;
  }

private:
  std::size_t n_ = 0;
  std::vector<double> a_;
};

/// -Delta_m restricted to V_m \ V_0 with zero boundary data. Row i is
/// interior vertex i + 4 of the level graph.
struct DirichletMatrix {
  int level = 0;
  SymmetricMatrix entries;
  std::size_t dim() const noexcept { return entries.dim(); }
};

inline DirichletMatrix assemble(int m) {
  if (m < 1)
    throw DomainError("oracle::assemble: level must be >= 1");
  if (m > kMaxOracleLevel)
    throw ResourceError("oracle::assemble: level " + std::to_string(m) + " outside [1, " +
                        std::to_string(kMaxOracleLevel) + "]");
  auto g = shared_level(m);
  const std::size_t n = g->size() - 4;
  DirichletMatrix out{m, SymmetricMatrix(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const auto v = static_cast<VertexIndex>(i + 4);
    out.entries(i, i) = static_cast<double>(g->degree(v));
    for (VertexIndex y : g->neighbors(v))
      if (!LevelGraph::is_boundary(y))
        out.entries(i, y - 4) = -1.0;
  }
  return out;
}

struct EigenDecomposition {
  std::vector<double> values;  ///< ascending
  std::vector<double> vectors; ///< vector k occupies [k*n, (k+1)*n)
  double off_diag_norm = 0.0;  ///< Frobenius norm of the final off-diagonal part
  int sweeps = 0;

  std::size_t dim() const noexcept { return values.size(); }
  std::span<const double> vector(std::size_t k) const {
    return {vectors.data() + k * dim(), dim()};
  }
};

struct JacobiOptions {
  double relative_tolerance = 1e-12;
  int max_sweeps = 50;
};

/// Cyclic Jacobi eigensolver: row-by-row sweeps of plane rotations, each
/// zeroing one off-diagonal pair, until the off-diagonal Frobenius norm is
/// below relative_tolerance * ||A||_F.
inline EigenDecomposition jacobi_eigen(const SymmetricMatrix &input, JacobiOptions opts = {}) {
  if (!input.is_symmetric())
    throw ContractError("jacobi_eigen: matrix is not symmetric");
  const std::size_t n = input.dim();
  SymmetricMatrix a = input;
  // Row k of v holds eigenvector k, so rotations touch contiguous rows.
  SymmetricMatrix v = SymmetricMatrix::identity(n);

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        s += 2.0 * a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  const double target = opts.relative_tolerance * input.frobenius_norm();
  EigenDecomposition out;
  double off = off_norm();
  while (off > target) {
    if (out.sweeps == opts.max_sweeps)
      throw ConvergenceError("jacobi_eigen: off-diagonal norm " + std::to_string(off) +
                             " above " + std::to_string(target) + " after " +
                             std::to_string(opts.max_sweeps) + " sweeps (n = " +
                             std::to_string(n) + ")");
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0)
          continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::hypot(theta, 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q)
            continue;
          const double akp = a(p, k), akq = a(q, k);
          const double np = c * akp - s * akq;
          const double nq = s * akp + c * akq;
          a(p, k) = a(k, p) = np;
          a(q, k) = a(k, q) = nq;
        }
        a(p, p) -= t * apq;
        a(q, q) += t * apq;
        a(p, q) = a(q, p) = 0.0;

        for (std::size_t k = 0; k < n; ++k) {
          const double vp = v(p, k), vq = v(q, k);
          v(p, k) = c * vp - s * vq;
          v(q, k) = s * vp + c * vq;
        }
      }
    }
    ++out.sweeps;
    off = off_norm();
  }
  out.off_diag_norm = off;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
  out.values.resize(n);
  out.vectors.resize(n * n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    const auto row = v.row(order[k]);
    std::copy(row.begin(), row.end(), out.vectors.begin() + k * n);
  }
  return out;
}

inline EigenDecomposition jacobi_eigen(const DirichletMatrix &a, JacobiOptions opts = {}) {
  return jacobi_eigen(a.entries, opts);
}

inline constexpr double kClusterTolerance = 1e-6;

/// Number of eigenvalues within tolerance of lambda.
inline std::size_t kernel_dimension(const EigenDecomposition &eig, double lambda,
                                    double tolerance = kClusterTolerance) {
  return static_cast<std::size_t>(std::count_if(
      eig.values.begin(), eig.values.end(),
      [&](double x) { return std::abs(x - lambda) <= tolerance; }));
}

inline std::size_t kernel_dimension(const DirichletMatrix &a, double lambda,
                                    double tolerance = kClusterTolerance) {
  return kernel_dimension(jacobi_eigen(a), lambda, tolerance);
}

struct EigenCluster {
  double value = 0.0; ///< mean of the clustered eigenvalues
  std::size_t multiplicity = 0;
};

/// Groups ascending eigenvalues whose consecutive gaps are within tolerance.
inline std::vector<EigenCluster> cluster_eigenvalues(std::span<const double> sorted,
                                                     double tolerance = kClusterTolerance) {
  std::vector<EigenCluster> out;
  double sum = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i == 0 || sorted[i] - sorted[i - 1] > tolerance) {
      if (!out.empty())
        out.back().value = sum / static_cast<double>(out.back().multiplicity);
      out.push_back({sorted[i], 0});
      sum = 0.0;
    }
    ++out.back().multiplicity;
    sum += sorted[i];
  }
  if (!out.empty())
    out.back().value = sum / static_cast<double>(out.back().multiplicity);
  return out;
}

/// Orthonormal basis (in R^{interior}) of the level-m eigenspace of lambda,
/// lifted to functions on ST_m vanishing on V_0. This is how eigenfunctions
/// for the forbidden values 2, 6, 8 are obtained.
inline std::vector<VertexFunction> eigenbasis(const EigenDecomposition &eig, int m, double lambda,
                                              double tolerance = kClusterTolerance) {
  auto g = shared_level(m);
  if (eig.dim() + 4 != g->size())
    throw ContractError("oracle::eigenbasis: decomposition does not match level " +
                        std::to_string(m));
  std::vector<VertexFunction> out;
  for (std::size_t k = 0; k < eig.dim(); ++k) {
    if (std::abs(eig.values[k] - lambda) > tolerance)
      continue;
    VertexFunction u(g);
    const auto col = eig.vector(k);
    std::copy(col.begin(), col.end(), u.values().begin() + 4);
    out.push_back(std::move(u));
  }
  return out;
}

inline std::vector<VertexFunction> eigenbasis(int m, double lambda,
                                              double tolerance = kClusterTolerance) {
  return eigenbasis(jacobi_eigen(assemble(m)), m, lambda, tolerance);
}

} // namespace sierpinski::oracle
