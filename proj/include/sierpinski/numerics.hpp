#pragma once

#include <cstddef>
#include <span>

namespace sierpinski {

/// Pairwise (cascade) summation of term(0) + ... + term(n-1). Rounding error
/// grows as O(log n) instead of O(n).
template <class Term> double pairwise_sum(std::size_t begin, std::size_t end, const Term &term) {
  constexpr std::size_t kBlock = 64;
  if (end - begin <= kBlock) {
    double s = 0.0;
    for (std::size_t i = begin; i < end; ++i)
      s += term(i);
    return s;
  }
  const std::size_t mid = begin + (end - begin) / 2;
  return pairwise_sum(begin, mid, term) + pairwise_sum(mid, end, term);
}

inline double pairwise_sum(std::span<const double> xs) {
  return pairwise_sum(0, xs.size(), [xs](std::size_t i) { return xs[i]; });
}

} // namespace sierpinski
