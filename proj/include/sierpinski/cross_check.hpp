#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "sierpinski/dense_oracle.hpp"
#include "sierpinski/spectral_decimation.hpp"

namespace sierpinski {

/// Decimation spectrum expanded by multiplicity, ascending.
inline std::vector<double> expanded_values(const SpectrumTable &t) {
  std::vector<double> out;
  out.reserve(t.total_multiplicity);
  for (const auto &r : t.records)
    out.insert(out.end(), r.multiplicity, r.value);
  std::sort(out.begin(), out.end());
  return out;
}

struct OracleComparison {
  int level = 0;
  std::vector<double> decimation;
  std::vector<double> oracle;
  double max_abs_difference = 0.0; ///< infinite when the sizes differ
  bool same_size() const { return decimation.size() == oracle.size(); }
};

/// Sorted multisets of decimation and dense-oracle eigenvalues at level m.
inline OracleComparison compare_with_oracle(int m, const oracle::EigenDecomposition &eig) {
  OracleComparison c{m, expanded_values(enumerate_spectrum(m)), eig.values, 0.0};
  if (!c.same_size()) {
    c.max_abs_difference = INFINITY;
    return c;
  }
  for (std::size_t i = 0; i < c.oracle.size(); ++i)
    c.max_abs_difference = std::max(c.max_abs_difference, std::abs(c.oracle[i] - c.decimation[i]));
  return c;
}

inline OracleComparison compare_with_oracle(int m) {
  return compare_with_oracle(m, oracle::jacobi_eigen(oracle::assemble(m)));
}

} // namespace sierpinski
