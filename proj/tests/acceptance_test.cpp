// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "sierpinski/cross_check.hpp"
#include "sierpinski/sierpinski.hpp"
#include "test_oracles.hpp"

using namespace sierpinski;
using test_oracles::uniform;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char *title, double budget_seconds,
               const std::function<Outcome()> &body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception &e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (budget_seconds > 0 && seconds > budget_seconds) {
    o.pass = false;
    o.detail += " (over the " + std::to_string(budget_seconds) + " s budget)";
  }
  if (!o.pass)
    ++failures;
  std::printf("[%s] AC%-2d %-40s %8.3f s  %s\n", o.pass ? "PASS" : "FAIL", id, title, seconds,
              o.detail.c_str());
  std::fflush(stdout);
}

using Multiset = std::vector<std::pair<double, std::uint64_t>>;

bool same_multiset(const Multiset &got, const Multiset &want, double tol, double &worst) {
  worst = 0.0;
  if (got.size() != want.size())
    return false;
  for (std::size_t i = 0; i < got.size(); ++i) {
    if (got[i].second != want[i].second)
      return false;
    worst = std::max(worst, std::abs(got[i].first - want[i].first));
  }
  return worst <= tol;
}

Multiset decimation_multiset(int m) {
  Multiset out;
  for (const auto &r : enumerate_spectrum(m).records)
    out.emplace_back(r.value, r.multiplicity);
  return out;
}

Multiset oracle_multiset(const oracle::EigenDecomposition &eig) {
  Multiset out;
  for (const auto &c : oracle::cluster_eigenvalues(eig.values))
    out.emplace_back(c.value, c.multiplicity);
  return out;
}

std::string fmt(const char *f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

VertexFunction random_function(int m) {
  VertexFunction u(shared_level(m));
  for (auto &x : u.values())
    x = uniform();
  return u;
}

Outcome spectrum_criterion(int m, const Multiset &want, double tol) {
  double dd = 0.0, od = 0.0;
  const bool dec = same_multiset(decimation_multiset(m), want, tol, dd);
  const bool orc =
      same_multiset(oracle_multiset(oracle::jacobi_eigen(oracle::assemble(m))), want, tol, od);
  std::uint64_t total = 0;
  for (const auto &[v, n] : want)
    total += n;
  const bool count = enumerate_spectrum(m).total_multiplicity == total;
  return {dec && orc && count, "decimation max err " + fmt("%.2e", dd) + ", oracle max err " +
                                   fmt("%.2e", od) + ", total " + std::to_string(total)};
}

} // namespace

int main() {
  criterion(1, "vertex counts m = 0..4", 1.0, [] {
    const std::vector<std::size_t> want{4, 10, 34, 130, 514};
    std::string got;
    bool ok = true;
    for (int m = 0; m <= 4; ++m) {
      const auto n = build_level(m).size();
      ok = ok && n == want[m];
      got += (m ? "," : "") + std::to_string(n);
    }
    return Outcome{ok, "N = " + got};
  });

  criterion(2, "harmonic extension closed form", 5.0, [] {
    double worst_cell = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
      const double a = uniform(-10, 10), b = uniform(-10, 10), c = uniform(-10, 10),
                   d = uniform(-10, 10);
      const auto x = harmonic_extension_cell(a, b, c, d);
      const auto y = test_oracles::midpoint_system_solution(a, b, c, d);
      for (int k = 0; k < 6; ++k)
        worst_cell = std::max(worst_cell, std::abs(x[k] - y[k]));
    }
    double worst_ratio = 0.0;
    for (int m = 1; m <= 5; ++m) {
      const auto u = random_function(m - 1);
      const double ratio = energy(harmonic_extend(u)).raw / energy(u).raw;
      worst_ratio = std::max(worst_ratio, std::abs(ratio - 2.0 / 3.0) / (2.0 / 3.0));
    }
    return Outcome{worst_cell <= 1e-12 && worst_ratio <= 1e-12,
                   "cell vs solve " + fmt("%.2e", worst_cell) + ", energy ratio rel err " +
                       fmt("%.2e", worst_ratio)};
  });

  criterion(3, "boundary (0,2,0,2) midpoints", 0.0, [] {
    const auto u = harmonize({0, 2, 0, 2}, 1);
    const std::array<double, 6> want{1.0, 1.0, 2.0 / 3.0, 1.0, 4.0 / 3.0, 1.0};
    const auto &cells = shared_level(1)->cells();
    bool ok = true;
    std::string got;
    for (std::size_t s = 0; s < 6; ++s) {
      const auto [k, l] = kMidpointPairs[s];
      const double x = u[cells[k][l]];
      ok = ok && x == want[s];
      got += (s ? "," : "") + fmt("%.17g", x);
    }
    return Outcome{ok, "(" + got + ")"};
  });

  criterion(4, "level-1 spectrum", 0.0, [] {
    return spectrum_criterion(1, {{2, 1}, {6, 3}, {8, 2}}, 1e-10);
  });

  criterion(5, "level-2 spectrum", 0.0, [] {
    const double s7 = std::sqrt(7.0), s3 = std::sqrt(3.0);
    return spectrum_criterion(
        2, {{3 - s7, 1}, {3 - s3, 3}, {4, 2}, {3 + s3, 3}, {3 + s7, 1}, {6, 6}, {8, 14}}, 1e-9);
  });

  criterion(6, "level-3 oracle arbitration", 60.0, [] {
    const auto eig = oracle::jacobi_eigen(oracle::assemble(3));
    const auto k6 = oracle::kernel_dimension(eig, 6.0);
    const auto k8 = oracle::kernel_dimension(eig, 8.0);
    const auto cmp = compare_with_oracle(3, eig);
    const auto total = enumerate_spectrum(3).total_multiplicity;
    const bool ok = k6 == 18 && k8 == 62 && total == 126 && cmp.same_size() &&
                    cmp.max_abs_difference <= 1e-8;
    return Outcome{ok, "dim ker(6) " + std::to_string(k6) + ", dim ker(8) " +
                           std::to_string(k8) + ", total " + std::to_string(total) +
                           ", multiset diff " + fmt("%.2e", cmp.max_abs_difference) + ", " +
                           std::to_string(eig.sweeps) + " sweeps"};
  });

  criterion(7, "Gauss-Green identity", 0.0, [] {
    double worst = 0.0;
    for (int m = 1; m <= 4; ++m)
      for (int trial = 0; trial < 100; ++trial)
        worst = std::max(worst, gauss_green_check(random_function(m), random_function(m)).relative());
    return Outcome{worst < 1e-10, "max relative residual " + fmt("%.2e", worst)};
  });

  criterion(8, "harmonic normal derivatives", 0.0, [] {
    const auto h = harmonic_source({1, 0, 0, 0});
    double worst_p0 = 0.0;
    for (int k = 0; k <= 5; ++k)
      worst_p0 = std::max(worst_p0, std::abs(normal_derivative(h, Address(0), k).value - 3.0));
    double worst_sum = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const auto g = harmonic_source({uniform(), uniform(), uniform(), uniform()});
      for (int k = 0; k <= 5; ++k) {
        double s = 0.0;
        for (std::uint8_t i = 0; i < 4; ++i)
          s += normal_derivative(g, Address(i), k).value;
        worst_sum = std::max(worst_sum, std::abs(s));
      }
    }
    return Outcome{worst_p0 <= 1e-12 && worst_sum <= 1e-12,
                   "|dn u(P0) - 3| " + fmt("%.2e", worst_p0) + ", |sum dn u| " +
                       fmt("%.2e", worst_sum)};
  });

  criterion(9, "eigenfunction residuals m <= 4", 0.0, [] {
    constexpr int top = 4;
    double worst = 0.0;
    std::size_t checked = 0;
    for (int birth = 1; birth < top; ++birth) {
      const auto eig = oracle::jacobi_eigen(oracle::assemble(birth));
      for (int m = birth; m <= top; ++m)
        for (const auto &r : enumerate_spectrum(m).records) {
          if (r.lineage.birth_level != birth)
            continue;
          for (const auto &u : oracle::eigenbasis(eig, birth, r.lineage.birth_value)) {
            const auto v = extend_along(u, r.lineage);
            worst = std::max(worst, eigen_residual(v, r.value) / v.max_abs());
            ++checked;
          }
        }
    }
    return Outcome{worst <= 1e-9, std::to_string(checked) + " eigenfunctions, max residual/|u| " +
                                      fmt("%.2e", worst)};
  });

  criterion(10, "Weyl exponent, births up to level 8", 120.0, [] {
    const auto fit = weyl_fit(limit_spectrum(8, std::size_t{1} << 30));
    const double target = DimensionConstants::weyl_alpha;
    return Outcome{std::abs(fit.alpha_hat - target) <= 0.05,
                   "alpha_hat " + fmt("%.6f", fit.alpha_hat) + " vs " + fmt("%.6f", target) +
                       " over " + std::to_string(fit.points_used) + " points"};
  });

  criterion(11, "pointwise Laplacian of eigenfunctions", 0.0, [] {
    const auto eig = oracle::jacobi_eigen(oracle::assemble(1));
    const auto g1 = shared_level(1);
    std::size_t monotone = 0, total = 0;
    std::string errors;
    for (int born : {2, 6, 8}) {
      const Lineage prefix{1, born, born == 8 ? std::vector<Branch>{Branch::plus}
                                              : std::vector<Branch>{}};
      const double lambda = limit_of(EigenvalueRecord{1, static_cast<double>(born), 1, {1, born, {}}}).value;
      for (const auto &u : oracle::eigenbasis(eig, 1, born)) {
        VertexIndex x = 4;
        for (VertexIndex v = 4; v < g1->size(); ++v)
          if (std::abs(u[v]) > std::abs(u[x]))
            x = v;
        const Address at = g1->address(x);
        const auto source = eigenfunction_source(u, prefix);
        std::vector<double> rel;
        for (int m = 3; m <= 5; ++m) {
          const auto f = source(m);
          const double target = -lambda * f.at(at);
          rel.push_back(std::abs(pointwise_laplacian(f, at).value - target) / std::abs(target));
        }
        ++total;
        if (rel[0] > rel[1] && rel[1] > rel[2])
          ++monotone;
        errors += (errors.empty() ? "" : " ") + fmt("%.1e", rel[2]);
      }
    }
    return Outcome{monotone >= 5 && monotone == total,
                   std::to_string(monotone) + "/" + std::to_string(total) +
                       " monotone over m=3,4,5; rel err at m=5: " + errors};
  });

  std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
