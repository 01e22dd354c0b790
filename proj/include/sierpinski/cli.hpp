#pragma once

#include <array>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "sierpinski/cross_check.hpp"
#include "sierpinski/io.hpp"
#include "sierpinski/sierpinski.hpp"

namespace sierpinski::cli {

/// Process exit codes; each failure class has its own code.
enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kIo = 3,
  kResource = 4,
  kDomain = 5,
  kNumerical = 6,
};

inline constexpr const char *kOutputDirEnv = "SIERPINSKI_OUTPUT_DIR";

struct RunConfig {
  std::string subcommand;
  int level = 1;
  std::array<double, 4> boundary{1.0, 0.0, 0.0, 0.0};
  std::string output_path; ///< empty: standard output
  std::string format;      ///< empty: the subcommand's default
  std::size_t count = 1000000;
  bool limit_mode = false;
  bool fit = false;
  WeylFitWindow fit_window{};
  std::string source = "harmonic"; ///< laplacian-check: harmonic | eigenfunction
  int from_level = 1;
  std::vector<std::string> vertices; ///< laplacian-check: addresses; empty = V_1 \ V_0
};

/// Thrown for invalid flag combinations detected after parsing.
class UsageError : public Error {
public:
  using Error::Error;
  const char *kind() const noexcept override { return "usage"; }
};

class IoError : public Error {
public:
  using Error::Error;
  const char *kind() const noexcept override { return "io"; }
};

namespace detail {

inline std::string resolve_format(const RunConfig &c, const std::string &fallback,
                                  std::initializer_list<const char *> allowed) {
  const std::string f = c.format.empty() ? fallback : c.format;
  for (const char *a : allowed)
    if (f == a)
      return f;
  std::string list;
  for (const char *a : allowed)
    list += std::string(list.empty() ? "" : ", ") + a;
  throw UsageError("format '" + f + "' is not valid for " + c.subcommand + " (allowed: " + list +
                   ")");
}

inline void dump(std::ostream &os, const io::json &j) { os << j.dump(2) << '\n'; }

/// Eigenfunctions used by laplacian-check: the level-1 eigenvector of 2,
/// continued by minus branches.
inline FunctionSource level1_ground_state() {
  auto g = shared_level(1);
  VertexFunction u(g);
  for (VertexIndex v = 4; v < g->size(); ++v)
    u[v] = 1.0;
  return eigenfunction_source(std::move(u), Lineage{1, 2, {}});
}

inline void run_to(const RunConfig &c, std::ostream &out) {
  const std::string &cmd = c.subcommand;
  if (cmd == "build-graph") {
    const auto fmt = resolve_format(c, "json", {"json", "obj"});
    const auto g = build_level(c.level);
    if (fmt == "obj")
      io::write_obj(out, g);
    else
      dump(out, io::graph_json(g));
  } else if (cmd == "harmonic") {
    resolve_format(c, "csv", {"csv"});
    io::write_vertex_function_csv(out, harmonize(c.boundary, c.level));
  } else if (cmd == "spectrum") {
    const auto fmt = resolve_format(c, "json", {"json", "csv"});
    const auto t = enumerate_spectrum(c.level);
    if (fmt == "csv")
      io::write_spectrum_csv(out, t);
    else
      dump(out, io::spectrum_json(t));
  } else if (cmd == "limit-spectrum") {
    const auto fmt = resolve_format(c, "json", {"json", "csv"});
    const auto limits = limit_spectrum(c.level, c.count);
    if (fmt == "csv")
      io::write_limit_spectrum_csv(out, limits);
    else
      dump(out, io::limit_spectrum_json(c.level, limits));
  } else if (cmd == "counting") {
    const auto fmt = resolve_format(c, c.fit ? "json" : "csv", {"csv", "json"});
    std::vector<SpectralPoint> points;
    if (c.limit_mode) {
      const auto limits = limit_spectrum(c.level, c.count);
      points = spectral_points(limits);
    } else {
      points = spectral_points(enumerate_spectrum(c.level));
    }
    if (c.fit) {
      if (fmt != "json")
        throw UsageError("counting --fit writes json");
      dump(out, io::weyl_fit_json(weyl_fit(points, c.fit_window)));
    } else {
      if (fmt != "csv")
        throw UsageError("counting without --fit writes csv");
      io::write_counting_csv(out, counting_steps(points));
    }
  } else if (cmd == "laplacian-check") {
    resolve_format(c, "csv", {"csv"});
    FunctionSource source;
    if (c.source == "harmonic")
      source = harmonic_source(c.boundary);
    else if (c.source == "eigenfunction")
      source = level1_ground_state();
    else
      throw UsageError("--source must be harmonic or eigenfunction");
    std::vector<Address> xs;
    if (c.vertices.empty()) {
      const auto g1 = shared_level(1);
      for (VertexIndex v = 4; v < g1->size(); ++v)
        xs.push_back(g1->address(v));
    } else {
      for (const auto &s : c.vertices)
        xs.push_back(canonicalize(Address::parse(s)));
    }
    if (c.from_level > c.level)
      throw UsageError("--from must not exceed --level");
    std::vector<LaplacianEstimate> rows;
    for (int m = std::max(c.from_level, 1); m <= c.level; ++m) {
      const auto u = source(m);
      for (const auto &x : xs)
        if (x.size() <= static_cast<std::size_t>(m))
          rows.push_back(pointwise_laplacian(u, x));
    }
    io::write_laplacian_csv(out, rows);
  } else if (cmd == "oracle-compare") {
    const auto fmt = resolve_format(c, "csv", {"csv", "json"});
    const auto eig = oracle::jacobi_eigen(oracle::assemble(c.level));
    if (fmt == "csv") {
      io::write_oracle_csv(out, c.level, eig);
    } else {
      const auto cmp = compare_with_oracle(c.level, eig);
      dump(out, {{"level", c.level},
                 {"dimension", eig.dim()},
                 {"sweeps", eig.sweeps},
                 {"max_abs_difference", cmp.max_abs_difference},
                 {"kernel_6", oracle::kernel_dimension(eig, 6.0)},
                 {"kernel_8", oracle::kernel_dimension(eig, 8.0)},
                 {"oracle", cmp.oracle},
                 {"decimation", cmp.decimation}});
    }
  } else if (cmd == "constants") {
    const auto fmt = resolve_format(c, "text", {"text", "json", "csv"});
    using C = DimensionConstants;
    if (fmt == "json") {
      dump(out, io::constants_json());
    } else if (fmt == "csv") {
      out << "name,value,formula\n";
      out << "hausdorff," << io::format_double(C::hausdorff) << ',' << C::hausdorff_formula << '\n';
      out << "beta," << io::format_double(C::beta) << ',' << C::beta_formula << '\n';
      out << "resistance_dim," << io::format_double(C::resistance_dim) << ','
          << C::resistance_dim_formula << '\n';
      out << "weyl_alpha," << io::format_double(C::weyl_alpha) << ',' << C::weyl_alpha_formula
          << '\n';
    } else {
      out << "hausdorff=" << io::format_double(C::hausdorff) << '\n';
      out << "beta=" << io::format_double(C::beta) << '\n';
      out << "resistance_dim=" << io::format_double(C::resistance_dim) << '\n';
      out << "weyl_alpha=" << io::format_double(C::weyl_alpha) << '\n';
    }
  } else {
    throw UsageError("unknown subcommand '" + cmd + "'");
  }
}

inline int exit_code_for(const Error &e) {
  if (dynamic_cast<const UsageError *>(&e))
    return kUsage;
  if (dynamic_cast<const IoError *>(&e))
    return kIo;
  if (dynamic_cast<const ResourceError *>(&e))
    return kResource;
  if (dynamic_cast<const DomainError *>(&e) || dynamic_cast<const ContractError *>(&e))
    return kDomain;
  if (dynamic_cast<const ConvergenceError *>(&e) ||
      dynamic_cast<const InsufficientDataError *>(&e))
    return kNumerical;
  return kInternal;
}

} // namespace detail

/// One-line machine-readable failure report.
inline void report_error(std::ostream &err, const std::string &kind, const std::string &message) {
  err << io::json{{"error", kind}, {"message", message}}.dump() << '\n';
}

/// Resolves an --output path against $SIERPINSKI_OUTPUT_DIR when relative.
inline std::filesystem::path resolve_output(const std::string &path) {
  std::filesystem::path p(path);
  if (p.is_relative())
    if (const char *dir = std::getenv(kOutputDirEnv); dir && *dir)
      p = std::filesystem::path(dir) / p;
  return p;
}

/// Runs one subcommand. Output goes to config.output_path, or to `out`
/// when none is given. Returns the process exit code.
inline int run(const RunConfig &config, std::ostream &out = std::cout,
               std::ostream &err = std::cerr) {
  try {
    if (config.output_path.empty()) {
      detail::run_to(config, out);
      out.flush();
      return kOk;
    }
    std::ostringstream buffer;
    detail::run_to(config, buffer);
    const auto path = resolve_output(config.output_path);
    std::ofstream file(path, std::ios::binary);
    if (!file)
      throw IoError("cannot open '" + path.string() + "' for writing");
    file << buffer.str();
    if (!file.flush())
      throw IoError("write to '" + path.string() + "' failed");
    return kOk;
  } catch (const Error &e) {
    report_error(err, e.kind(), e.what());
    return detail::exit_code_for(e);
  } catch (const std::exception &e) {
    report_error(err, "internal", e.what());
    return kInternal;
  }
}

/// Parses argv into a RunConfig. Returns the exit code instead when parsing
/// ends the program (help, bad flags).
inline std::variant<RunConfig, int> parse(int argc, const char *const *argv,
                                          std::ostream &out = std::cout,
                                          std::ostream &err = std::cerr) {
  CLI::App app{"Graph approximations, energies and Dirichlet spectrum of the Sierpinski "
               "tetrahedron"};
  app.require_subcommand(1);
  RunConfig c;
  std::string boundary;

  std::map<std::string, int> levels;
  auto add_common = [&](CLI::App *sub, int default_level) {
    int &level = levels[sub->get_name()] = default_level;
    sub->add_option("-l,--level", level, "Graph level m")->capture_default_str();
    sub->add_option("-o,--output", c.output_path,
                    std::string("Output file (relative paths resolve against $") + kOutputDirEnv +
                        "); default stdout");
    sub->add_option("-f,--format", c.format, "Output format");
  };

  auto *build = app.add_subcommand("build-graph", "Export ST_m as json or obj");
  auto *harmonic = app.add_subcommand("harmonic", "Harmonic extension of boundary data, csv");
  harmonic->add_option("-b,--boundary", boundary, "Values a,b,c,d on P_0..P_3")->required();
  auto *spectrum = app.add_subcommand("spectrum", "Dirichlet spectrum of -Delta_m by decimation");
  auto *limit = app.add_subcommand("limit-spectrum", "Limit eigenvalues 2 lim 6^m lambda_m");
  limit->add_option("-n,--count", c.count, "Number of smallest values to keep");
  auto *counting = app.add_subcommand("counting", "Eigenvalue counting function N(x)");
  counting->add_flag("--limit", c.limit_mode, "Use limit eigenvalues instead of level-m values");
  counting->add_option("-n,--count", c.count, "Limit mode: number of smallest values");
  counting->add_flag("--fit", c.fit, "Fit the Weyl exponent and write json");
  counting->add_option("--fit-skip-decades", c.fit_window.skip_decades,
                       "Decades above the smallest eigenvalue left out of the fit");
  counting->add_option("--fit-top-fraction", c.fit_window.top_fraction,
                       "Fraction of the largest eigenvalues left out of the fit");
  auto *lap = app.add_subcommand("laplacian-check", "Pointwise Laplacian estimates across levels");
  lap->add_option("-s,--source", c.source, "harmonic or eigenfunction");
  lap->add_option("-b,--boundary", boundary, "Boundary values for --source harmonic");
  lap->add_option("--from", c.from_level, "First level of the table");
  lap->add_option("--vertex", c.vertices, "Vertex address such as 0_1 (repeatable)");
  auto *oracle_cmd = app.add_subcommand("oracle-compare", "Dense Jacobi spectrum of the Dirichlet matrix");
  auto *constants = app.add_subcommand("constants", "Dimension constants");

  add_common(build, 1);
  add_common(harmonic, 1);
  add_common(spectrum, 2);
  add_common(limit, 6);
  add_common(counting, 6);
  add_common(lap, 5);
  add_common(oracle_cmd, 2);
  add_common(constants, 0);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }
  c.subcommand = app.get_subcommands().front()->get_name();
  c.level = levels.at(c.subcommand);
  if (!boundary.empty()) {
    std::stringstream ss(boundary);
    std::string item;
    std::vector<double> values;
    try {
      while (std::getline(ss, item, ','))
        values.push_back(std::stod(item));
    } catch (const std::exception &) {
      report_error(err, "usage", "--boundary expects four comma-separated numbers");
      return kUsage;
    }
    if (values.size() != 4) {
      report_error(err, "usage", "--boundary expects four comma-separated numbers");
      return kUsage;
    }
    std::copy(values.begin(), values.end(), c.boundary.begin());
  }
  return c;
}

} // namespace sierpinski::cli
