// Harmonic extension of (0, 2, 0, 2) and the energy ratio between levels.
#include <cstdio>

#include "sierpinski/sierpinski.hpp"

int main() {
  using namespace sierpinski;
  const std::array<double, 4> boundary{0.0, 2.0, 0.0, 2.0};
  for (int m = 0; m <= 5; ++m) {
    const auto u = harmonize(boundary, m);
    const auto e = energy(u);
    std::printf("level %d: %7zu vertices  E_m = %.12f  (3/2)^m E_m = %.12f\n", m, u.size(), e.raw,
                e.normalized);
  }

  const auto u1 = harmonize(boundary, 1);
  std::printf("\nmidpoints at level 1:\n");
  for (VertexIndex v = 4; v < u1.size(); ++v)
    std::printf("  %s  %.6f\n", u1.graph().address(v).to_string().c_str(), u1[v]);

  const auto spectrum = enumerate_spectrum(2);
  std::printf("\nlevel-2 Dirichlet spectrum (%llu eigenvalues):\n",
              static_cast<unsigned long long>(spectrum.total_multiplicity));
  for (const auto &r : spectrum.records)
    std::printf("  %.12f  x%llu  born %d at level %d, branches \"%s\"\n", r.value,
                static_cast<unsigned long long>(r.multiplicity), r.lineage.birth_value,
                r.lineage.birth_level, r.lineage.branch_string().c_str());
}
