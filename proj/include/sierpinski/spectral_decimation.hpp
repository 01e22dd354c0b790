#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sierpinski/errors.hpp"
#include "sierpinski/fractal_graph.hpp"
#include "sierpinski/measure_laplacian.hpp"
#include "sierpinski/vertex_function.hpp"

namespace sierpinski {

inline constexpr int kMaxSpectrumLevel = 15;
inline constexpr int kMaxLimitGenerations = 60;
inline constexpr double kLimitTolerance = 1e-12;
/// Values 2, 6 and 8, where eigenfunctions cannot be continued by the
/// local extension formula and new eigenvalues are born.
inline constexpr std::array<double, 3> kForbiddenValues{2.0, 6.0, 8.0};

enum class Branch : std::uint8_t { minus, plus };

/// Inverse step lambda_{m-1} = lambda_m (6 - lambda_m).
constexpr double decimate_down(double lambda) { return lambda * (6.0 - lambda); }

/// The two preimages 3 -/+ sqrt(9 - lambda) of decimate_down. The minus
/// root is evaluated as lambda / (3 + sqrt(9 - lambda)) to avoid cancellation.
inline std::pair<double, double> decimate_up(double lambda_prev) {
  if (!(lambda_prev <= 9.0))
    throw DomainError("decimate_up: lambda = " + std::to_string(lambda_prev) + " exceeds 9");
  const double root = std::sqrt(9.0 - lambda_prev);
  return {lambda_prev / (3.0 + root), 3.0 + root};
}

inline double decimate_up(double lambda_prev, Branch b) {
  const auto [lo, hi] = decimate_up(lambda_prev);
  return b == Branch::minus ? lo : hi;
}

inline bool is_forbidden(double lambda, double tolerance = 1e-9) {
  return std::any_of(kForbiddenValues.begin(), kForbiddenValues.end(),
                     [&](double f) { return std::abs(lambda - f) <= tolerance; });
}

struct Lineage {
  int birth_level = 1;
  int birth_value = 2; ///< one of 2, 6, 8
  std::vector<Branch> branches;

  /// "-+-" style rendering, one character per continuation step.
  std::string branch_string() const {
    std::string s;
    for (Branch b : branches)
      s.push_back(b == Branch::minus ? '-' : '+');
    return s;
  }
  static std::vector<Branch> parse_branches(std::string_view s) {
    std::vector<Branch> out;
    for (char c : s) {
      if (c == '-')
        out.push_back(Branch::minus);
      else if (c == '+')
        out.push_back(Branch::plus);
      else
        throw DomainError(std::string("Lineage: bad branch character '") + c + "'");
    }
    return out;
  }
  int level() const { return birth_level + static_cast<int>(branches.size()); }

  /// Eigenvalue at every level from birth_level to level().
  std::vector<double> values() const {
    std::vector<double> out{static_cast<double>(birth_value)};
    for (Branch b : branches)
      out.push_back(decimate_up(out.back(), b));
    return out;
  }

  auto operator<=>(const Lineage &) const = default;
};

struct EigenvalueRecord {
  int level = 0;
  double value = 0.0;
  std::uint64_t multiplicity = 0;
  Lineage lineage;
};

struct SpectrumTable {
  int level = 0;
  std::vector<EigenvalueRecord> records; ///< ascending by value
  std::uint64_t total_multiplicity = 0;
};

/// Multiplicities of the eigenvalues born at level m.
///   M_m(8) = 4^m - 2,
///   M_m(6) = 3 at m = 1 and 4^{m-1} + 2 afterwards,
///   M_m(2) = 1 at m = 1 and 0 afterwards.
/// M_m(6) is what remains of 2(4^m - 1) after M_m(8) and the
/// 3 * 4^{m-1} - 2 continued eigenfunctions are accounted for.
inline std::map<int, std::uint64_t> born_multiplicities(int m) {
  if (m < 1)
    throw DomainError("born_multiplicities: level must be >= 1");
  if (m > kMaxSpectrumLevel + 1)
    throw ResourceError("born_multiplicities: level too large");
  const std::uint64_t p = std::uint64_t{1} << (2 * m);
  if (m == 1)
    return {{2, 1}, {6, 3}, {8, 2}};
  return {{2, 0}, {6, p / 4 + 2}, {8, p - 2}};
}

namespace detail {
inline void sort_records(std::vector<EigenvalueRecord> &records) {
  std::sort(records.begin(), records.end(), [](const auto &a, const auto &b) {
    if (a.value != b.value)
      return a.value < b.value;
    return a.lineage < b.lineage;
  });
}
} // namespace detail

/// Full Dirichlet spectrum of -Delta_m: every level-(m-1) eigenvalue continued
/// through both branches of decimate_up (the minus continuation of 8, which
/// would land on 2, is pruned), plus the eigenvalues 6 and 8 born at m.
inline SpectrumTable enumerate_spectrum(int m, int cap = kMaxSpectrumLevel) {
  if (m < 1)
    throw DomainError("enumerate_spectrum: level must be >= 1");
  if (m > cap)
    throw ResourceError("enumerate_spectrum: level " + std::to_string(m) + " exceeds cap " +
                        std::to_string(cap));

  std::vector<EigenvalueRecord> records;
  for (const auto &[value, mult] : born_multiplicities(1))
    records.push_back({1, static_cast<double>(value), mult, {1, value, {}}});

  for (int level = 2; level <= m; ++level) {
    std::vector<EigenvalueRecord> next;
    next.reserve(2 * records.size() + 2);
    for (const auto &parent : records) {
      const auto [lo, hi] = decimate_up(parent.value);
      for (auto [branch, value] : {std::pair{Branch::minus, lo}, std::pair{Branch::plus, hi}}) {
        if (std::abs(value - 2.0) <= 1e-9)
          continue; // 2 is not a Dirichlet eigenvalue beyond level 1
        EigenvalueRecord child{level, value, parent.multiplicity, parent.lineage};
        child.lineage.branches.push_back(branch);
        next.push_back(std::move(child));
      }
    }
    for (const auto &[value, mult] : born_multiplicities(level))
      if (mult > 0)
        next.push_back({level, static_cast<double>(value), mult, {level, value, {}}});
    records = std::move(next);
  }
  detail::sort_records(records);

  SpectrumTable table{m, std::move(records), 0};
  for (const auto &r : table.records)
    table.total_multiplicity += r.multiplicity;
  return table;
}

/// Number of interior vertices 2(4^m - 1), the size of a complete spectrum.
constexpr std::uint64_t interior_count(int m) { return 2 * ((std::uint64_t{1} << (2 * m)) - 1); }

// ---------------------------------------------------------------------------
// Limit eigenvalues

struct LimitEigenvalue {
  Lineage lineage;    ///< finite prefix; continued by minus branches forever
  double value = 0.0; ///< 2 lim 6^m lambda_m
  std::uint64_t multiplicity = 0;
  int generations_used = 0; ///< level at which the iteration stopped
};

/// Follows the minus branch from lambda at `level` and returns
/// 2 * 6^G * lambda_G once successive generations agree to kLimitTolerance.
inline std::pair<double, int> limit_of_minus_tail(int level, double lambda) {
  if (lambda >= 8.0 - 1e-9)
    throw ForbiddenEigenvalueError("limit_of_minus_tail: the minus continuation of 8 is pruned");
  double value = 2.0 * std::pow(6.0, level) * lambda;
  for (int g = level + 1; g <= kMaxLimitGenerations; ++g) {
    // 6 * lambda_{g} / lambda_{g-1} = 6 / (3 + sqrt(9 - lambda_{g-1}))
    const double ratio = 6.0 / (3.0 + std::sqrt(9.0 - lambda));
    lambda = lambda / (3.0 + std::sqrt(9.0 - lambda));
    const double next = value * ratio;
    if (std::abs(next - value) <= kLimitTolerance * std::abs(next))
      return {next, g};
    value = next;
  }
  throw ConvergenceError("limit_of_minus_tail: no convergence within " +
                         std::to_string(kMaxLimitGenerations) + " generations");
}

/// Limit value of a record: continue by minus branches, or by one forced plus
/// step first when the record sits on 8.
inline LimitEigenvalue limit_of(const EigenvalueRecord &r) {
  LimitEigenvalue out{r.lineage, 0.0, r.multiplicity, 0};
  int level = r.level;
  double lambda = r.value;
  if (std::abs(lambda - 8.0) <= 1e-9) {
    out.lineage.branches.push_back(Branch::plus);
    lambda = decimate_up(lambda, Branch::plus);
    ++level;
  }
  std::tie(out.value, out.generations_used) = limit_of_minus_tail(level, lambda);
  return out;
}

/// Limit eigenvalues of every lineage whose prefix ends at m_birth_max,
/// smallest `count` returned in ascending order.
inline std::vector<LimitEigenvalue> limit_spectrum(int m_birth_max, std::size_t count) {
  if (count < 1)
    throw DomainError("limit_spectrum: count must be >= 1");
  const auto table = enumerate_spectrum(m_birth_max);
  std::vector<LimitEigenvalue> out;
  out.reserve(table.records.size());
  for (const auto &r : table.records)
    out.push_back(limit_of(r));
  std::sort(out.begin(), out.end(), [](const auto &a, const auto &b) {
    if (a.value != b.value)
      return a.value < b.value;
    return a.lineage < b.lineage;
  });
  if (out.size() > count)
    out.resize(count);
  return out;
}

// ---------------------------------------------------------------------------
// Eigenfunctions

/// Continues a Dirichlet eigenfunction of -Delta_{m-1} (eigenvalue
/// decimate_down(lambda_m)) to ST_m. On each (m-1)-cell with corners X_0..X_3
/// the midpoint of X_k X_l receives
///   [(4 - lambda)(u(X_k) + u(X_l)) + 2 (u of the two other corners)]
///   / ((2 - lambda)(6 - lambda)).
inline VertexFunction eigenfunction_extend(const VertexFunction &u, double lambda_m) {
  if (is_forbidden(lambda_m))
    throw ForbiddenEigenvalueError(
        "eigenfunction_extend: lambda = " + std::to_string(lambda_m) +
        " is forbidden; build the eigenspace with oracle::eigenbasis instead");
  const double scale = std::max(1.0, u.max_abs());
  for (VertexIndex b : LevelGraph::boundary())
    if (std::abs(u[b]) > 1e-12 * scale)
      throw ContractError("eigenfunction_extend: u must vanish on V_0");

  auto target = shared_level(u.level() + 1);
  VertexFunction out(target);
  std::copy(u.values().begin(), u.values().end(), out.values().begin());
  const double near = 4.0 - lambda_m;
  const double denom = (2.0 - lambda_m) * (6.0 - lambda_m);
  const auto coarse = u.graph().cells();
  const auto fine = target->cells();
  for (std::size_t c = 0; c < coarse.size(); ++c) {
    const Cell &x = coarse[c];
    const double total = u[x[0]] + u[x[1]] + u[x[2]] + u[x[3]];
    for (const auto &[k, l] : kMidpointPairs) {
      const double edge = u[x[k]] + u[x[l]];
      out[fine[4 * c + k][l]] = (near * edge + 2.0 * (total - edge)) / denom;
    }
  }
  for (VertexIndex b : LevelGraph::boundary())
    out[b] = 0.0;
  return out;
}

/// max over interior X of |(-Delta_m u)(X) - lambda u(X)|.
inline double eigen_residual(const VertexFunction &u, double lambda) {
  double worst = 0.0;
  for (VertexIndex x = 4; x < u.size(); ++x)
    worst = std::max(worst, std::abs(-graph_laplacian(u, x) - lambda * u[x]));
  return worst;
}

/// Extends an eigenfunction at the lineage's birth level along its branches.
inline VertexFunction extend_along(VertexFunction u, const Lineage &lineage) {
  if (u.level() != lineage.birth_level)
    throw ContractError("extend_along: function is not on the birth level");
  const auto values = lineage.values();
  for (std::size_t k = 1; k < values.size(); ++k)
    u = eigenfunction_extend(u, values[k]);
  return u;
}

/// The eigenfunction born as `born` (on ST_{lineage.birth_level}) evaluated
/// on any level m >= lineage.level(), using minus branches past the prefix.
inline FunctionSource eigenfunction_source(VertexFunction born, Lineage lineage) {
  return [born = std::move(born), lineage = std::move(lineage)](int m) {
    if (m < lineage.level())
      throw ContractError("eigenfunction_source: level below the lineage prefix");
    Lineage full = lineage;
    full.branches.resize(static_cast<std::size_t>(m - lineage.birth_level), Branch::minus);
    return extend_along(born, full);
  };
}

/// Eigenvalue at level m of a lineage continued by minus branches.
inline double lineage_value_at(const Lineage &lineage, int m) {
  Lineage full = lineage;
  if (m < lineage.level())
    throw ContractError("lineage_value_at: level below the lineage prefix");
  full.branches.resize(static_cast<std::size_t>(m - lineage.birth_level), Branch::minus);
  return full.values().back();
}

// ---------------------------------------------------------------------------
// Counting function and Weyl exponent

struct SpectralPoint {
  double value = 0.0;
  std::uint64_t multiplicity = 0;
};

inline std::vector<SpectralPoint> spectral_points(const SpectrumTable &t) {
  std::vector<SpectralPoint> out;
  for (const auto &r : t.records)
    out.push_back({r.value, r.multiplicity});
  return out;
}

inline std::vector<SpectralPoint> spectral_points(std::span<const LimitEigenvalue> limits) {
  std::vector<SpectralPoint> out;
  for (const auto &r : limits)
    out.push_back({r.value, r.multiplicity});
  std::sort(out.begin(), out.end(), [](auto a, auto b) { return a.value < b.value; });
  return out;
}

/// N(x) = sum of multiplicities of eigenvalues <= x.
inline std::uint64_t counting_function(std::span<const SpectralPoint> points, double x) {
  std::uint64_t n = 0;
  for (const auto &p : points)
    if (p.value <= x)
      n += p.multiplicity;
  return n;
}

inline std::uint64_t counting_function(const SpectrumTable &t, double x) {
  return counting_function(spectral_points(t), x);
}

inline std::uint64_t counting_function(std::span<const LimitEigenvalue> limits, double x) {
  return counting_function(spectral_points(limits), x);
}

/// (x, N(x)) at every distinct eigenvalue, ascending.
inline std::vector<std::pair<double, std::uint64_t>>
counting_steps(std::span<const SpectralPoint> points) {
  std::vector<SpectralPoint> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end(), [](auto a, auto b) { return a.value < b.value; });
  std::vector<std::pair<double, std::uint64_t>> out;
  std::uint64_t n = 0;
  for (const auto &p : sorted) {
    n += p.multiplicity;
    if (!out.empty() && out.back().first == p.value)
      out.back().second = n;
    else
      out.emplace_back(p.value, n);
  }
  return out;
}

/// Dimension constants of the tetrahedron. The resistance dimension d solves
/// (2/3)^{m d} = 4^{-m}; the Weyl exponent is d / (d + 1) = ln 4 / ln 6.
struct DimensionConstants {
  static constexpr double hausdorff = 2.0;
  static inline const double beta = std::log(1.5) / std::numbers::ln2;
  static inline const double resistance_dim = std::log(4.0) / std::log(1.5);
  static inline const double weyl_alpha = std::log(4.0) / std::log(6.0);
  /// The reciprocal ln(3/2)/ln 4, kept for comparison: it would give
  /// alpha = 0.226, which the fitted spectrum rules out.
  static inline const double inverted_resistance_dim = std::log(1.5) / std::log(4.0);

  static constexpr const char *hausdorff_formula = "ln4/ln2";
  static constexpr const char *beta_formula = "ln(3/2)/ln2";
  static constexpr const char *resistance_dim_formula = "ln4/ln(3/2)";
  static constexpr const char *weyl_alpha_formula = "ln4/ln6";
};

struct WeylFitWindow {
  double skip_decades = 1.0;  ///< drop x below x_min * 10^skip_decades
  double top_fraction = 0.10; ///< drop this fraction of the largest points
};

struct WeylFit {
  double alpha_hat = 0.0;
  double intercept = 0.0; ///< log N ~ intercept + alpha_hat log x
  double rms_residual = 0.0;
  double max_residual = 0.0;
  std::size_t points_used = 0;
  double x_low = 0.0;
  double x_high = 0.0;
};

inline constexpr std::size_t kMinWeylPoints = 100;

/// Least-squares slope of log N(x) against log x at the distinct eigenvalues.
inline WeylFit weyl_fit(std::span<const SpectralPoint> points, WeylFitWindow window = {}) {
  if (points.size() < kMinWeylPoints)
    throw InsufficientDataError("weyl_fit: need at least " + std::to_string(kMinWeylPoints) +
                                " eigenvalues, got " + std::to_string(points.size()));
  const auto steps = counting_steps(points);
  if (!(steps.front().first > 0.0))
    throw DomainError("weyl_fit: eigenvalues must be positive");

  const double x_cut = steps.front().first * std::pow(10.0, window.skip_decades);
  const auto keep = static_cast<std::size_t>(
      std::floor(static_cast<double>(steps.size()) * (1.0 - window.top_fraction)));
  std::vector<std::pair<double, double>> xy;
  for (std::size_t i = 0; i < keep; ++i)
    if (steps[i].first >= x_cut)
      xy.emplace_back(std::log(steps[i].first), std::log(static_cast<double>(steps[i].second)));
  if (xy.size() < 2)
    throw InsufficientDataError("weyl_fit: fewer than 2 points inside the fit window");

  double mx = 0.0, my = 0.0;
  for (auto [x, y] : xy) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(xy.size());
  my /= static_cast<double>(xy.size());
  double sxx = 0.0, sxy = 0.0;
  for (auto [x, y] : xy) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (sxx == 0.0)
    throw InsufficientDataError("weyl_fit: all points share one abscissa");

  WeylFit fit;
  fit.alpha_hat = sxy / sxx;
  fit.intercept = my - fit.alpha_hat * mx;
  double ss = 0.0;
  for (auto [x, y] : xy) {
    const double r = y - (fit.intercept + fit.alpha_hat * x);
    ss += r * r;
    fit.max_residual = std::max(fit.max_residual, std::abs(r));
  }
  fit.rms_residual = std::sqrt(ss / static_cast<double>(xy.size()));
  fit.points_used = xy.size();
  fit.x_low = std::exp(xy.front().first);
  fit.x_high = std::exp(xy.back().first);
  return fit;
}

inline WeylFit weyl_fit(std::span<const LimitEigenvalue> limits, WeylFitWindow window = {}) {
  return weyl_fit(spectral_points(limits), window);
}

} // namespace sierpinski
