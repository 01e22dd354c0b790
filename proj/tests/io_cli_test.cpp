#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "sierpinski/cli.hpp"

using namespace sierpinski;
namespace fs = std::filesystem;

namespace {

std::vector<std::string> lines(const std::string &s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);)
    out.push_back(line);
  return out;
}

struct Result {
  int code = 0;
  std::string out, err;
};

Result run_args(std::vector<const char *> args) {
  args.insert(args.begin(), "sierpinski");
  std::ostringstream out, err;
  auto parsed = cli::parse(static_cast<int>(args.size()), args.data(), out, err);
  if (auto *code = std::get_if<int>(&parsed))
    return {*code, out.str(), err.str()};
  const int code = cli::run(std::get<cli::RunConfig>(parsed), out, err);
  return {code, out.str(), err.str()};
}

} // namespace

TEST(Io, FormatDoubleRoundTrips) {
  for (double x : {0.1, 1.0 / 3.0, 25.813339310469095, 6.0, -2.5e-300}) {
    const auto s = io::format_double(x);
    EXPECT_EQ(std::stod(s), x) << s;
  }
  EXPECT_EQ(io::format_double(6.0), "6");
  EXPECT_EQ(io::format_double(0.5), "0.5");
}

TEST(Io, SpectrumJsonRoundTrip) {
  for (int m = 1; m <= 4; ++m) {
    const auto t = enumerate_spectrum(m);
    const auto j = io::spectrum_json(t);
    const auto back = io::spectrum_from_json(io::json::parse(j.dump()));
    EXPECT_EQ(back.level, t.level);
    EXPECT_EQ(back.total_multiplicity, t.total_multiplicity);
    ASSERT_EQ(back.records.size(), t.records.size());
    for (std::size_t i = 0; i < t.records.size(); ++i) {
      EXPECT_EQ(back.records[i].value, t.records[i].value);
      EXPECT_EQ(back.records[i].multiplicity, t.records[i].multiplicity);
      EXPECT_EQ(back.records[i].lineage, t.records[i].lineage);
    }
  }
  EXPECT_THROW(io::spectrum_from_json(io::json{{"level", 2}}), DomainError);
  EXPECT_THROW(io::spectrum_from_json(io::json::parse(
                   R"({"level":2,"records":[{"value":1,"multiplicity":1,"birth_level":1,)"
                   R"("birth_value":2,"branches":"-x"}]})")),
               DomainError);
}

TEST(Io, GraphJsonSchema) {
  const auto g = build_level(1);
  const auto j = io::graph_json(g);
  EXPECT_EQ(j.at("level"), 1);
  ASSERT_EQ(j.at("vertices").size(), 10u);
  ASSERT_EQ(j.at("edges").size(), 24u);
  const auto &v0 = j.at("vertices")[0];
  EXPECT_EQ(v0.at("id"), 0);
  EXPECT_EQ(v0.at("word"), "");
  EXPECT_EQ(v0.at("base"), 0);
  EXPECT_EQ(v0.at("xyz").size(), 3u);
  for (const auto &e : j.at("edges")) {
    EXPECT_LT(e[0].get<int>(), e[1].get<int>());
    EXPECT_LT(e[1].get<int>(), 10);
  }
  std::vector<std::string> keys;
  for (const auto &[k, _] : j.items())
    keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"level", "vertices", "edges"}));
}

TEST(Io, ObjLines) {
  std::ostringstream os;
  io::write_obj(os, build_level(2));
  int v = 0, l = 0;
  for (const auto &line : lines(os.str())) {
    if (line.rfind("v ", 0) == 0)
      ++v;
    else if (line.rfind("l ", 0) == 0) {
      ++l;
      std::istringstream in(line.substr(2));
      int a = 0, b = 0;
      in >> a >> b;
      EXPECT_GE(a, 1);
      EXPECT_LE(b, 34);
    }
  }
  EXPECT_EQ(v, 34);
  EXPECT_EQ(l, 96);
}

TEST(Io, CsvHeaders) {
  std::ostringstream a, b, c, d;
  io::write_vertex_function_csv(a, harmonize({1, 0, 0, 0}, 1));
  io::write_spectrum_csv(b, enumerate_spectrum(1));
  io::write_counting_csv(c, counting_steps(spectral_points(enumerate_spectrum(1))));
  io::write_oracle_csv(d, 1, oracle::jacobi_eigen(oracle::assemble(1)));
  EXPECT_EQ(lines(a.str()).front(), "address,x,y,z,value");
  EXPECT_EQ(lines(a.str()).size(), 11u);
  EXPECT_EQ(lines(b.str()).front(), "level,value,multiplicity,birth_level,birth_value,branches");
  EXPECT_EQ(lines(b.str())[1], "1,2,1,1,2,");
  EXPECT_EQ(lines(c.str()), (std::vector<std::string>{"x,N", "2,1", "6,4", "8,6"}));
  EXPECT_EQ(lines(d.str()).front(), "level,index,eigenvalue");
}

TEST(Cli, SpectrumJson) {
  const auto r = run_args({"spectrum", "--level", "2", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = io::json::parse(r.out);
  EXPECT_EQ(j.at("level"), 2);
  ASSERT_EQ(j.at("records").size(), 7u);
  std::uint64_t total = 0;
  for (const auto &rec : j.at("records"))
    total += rec.at("multiplicity").get<std::uint64_t>();
  EXPECT_EQ(total, 30u);
  EXPECT_EQ(j.at("records")[2].at("value"), 4.0);
  EXPECT_EQ(j.at("records")[2].at("branches"), "+");
  EXPECT_EQ(j.at("records")[2].at("birth_value"), 8);
}

TEST(Cli, HarmonicCsv) {
  const auto r = run_args({"harmonic", "--level", "1", "--boundary", "0,2,0,2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 11u);
  std::map<std::string, std::string> value;
  for (std::size_t i = 1; i < rows.size(); ++i)
    value[rows[i].substr(0, rows[i].find(','))] = rows[i].substr(rows[i].rfind(',') + 1);
  EXPECT_EQ(value.at("_1"), "2");
  EXPECT_EQ(value.at("0_1"), "1");
  EXPECT_EQ(value.at("0_2"), io::format_double(2.0 / 3.0));
  EXPECT_EQ(value.at("1_3"), io::format_double(4.0 / 3.0));
}

TEST(Cli, ConstantsText) {
  const auto r = run_args({"constants"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(lines(r.out), (std::vector<std::string>{
                              "hausdorff=2", "beta=" + io::format_double(DimensionConstants::beta),
                              "resistance_dim=" + io::format_double(DimensionConstants::resistance_dim),
                              "weyl_alpha=" + io::format_double(DimensionConstants::weyl_alpha)}));
  const auto j = io::json::parse(run_args({"constants", "--format", "json"}).out);
  EXPECT_EQ(j.at("weyl_alpha").at("value"), DimensionConstants::weyl_alpha);
}

TEST(Cli, OtherSubcommands) {
  EXPECT_EQ(io::json::parse(run_args({"build-graph", "--level", "2"}).out).at("vertices").size(),
            34u);
  const auto limit = io::json::parse(run_args({"limit-spectrum", "--level", "4", "-n", "3"}).out);
  EXPECT_EQ(limit.at("records").size(), 3u);
  EXPECT_NEAR(limit.at("records")[0].at("value").get<double>(), 25.813339310469095, 1e-10);
  const auto fit = run_args({"counting", "--limit", "--fit", "--level", "6"});
  ASSERT_EQ(fit.code, 0) << fit.err;
  EXPECT_NEAR(io::json::parse(fit.out).at("alpha_hat").get<double>(), 0.7737, 0.05);
  const auto lap = run_args({"laplacian-check", "--level", "3", "--boundary", "1,0,0,0"});
  ASSERT_EQ(lap.code, 0) << lap.err;
  EXPECT_EQ(lines(lap.out).size(), 1u + 3 * 6);
  const auto cmp = io::json::parse(run_args({"oracle-compare", "--format", "json"}).out);
  EXPECT_LT(cmp.at("max_abs_difference").get<double>(), 1e-10);
  EXPECT_EQ(cmp.at("kernel_8"), 14);
}

TEST(Cli, RepeatedRunsAreByteIdentical) {
  for (auto args : std::vector<std::vector<const char *>>{
           {"spectrum", "--level", "4", "--format", "csv"},
           {"build-graph", "--level", "3", "--format", "obj"},
           {"limit-spectrum", "--level", "5"},
           {"counting", "--level", "5"}}) {
    const auto a = run_args(args), b = run_args(args);
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
  }
}

TEST(Cli, ExitCodesAreDistinct) {
  const auto usage = run_args({"spectrum", "--format", "obj"});
  const auto resource = run_args({"spectrum", "--level", "20"});
  const auto domain = run_args({"build-graph", "--level", "-1"});
  const auto numerical = run_args({"counting", "--fit", "--level", "2"});
  const auto io_error = run_args({"constants", "--output", "/nonexistent-dir/x.txt"});
  EXPECT_EQ(usage.code, cli::kUsage);
  EXPECT_EQ(resource.code, cli::kResource);
  EXPECT_EQ(domain.code, cli::kDomain);
  EXPECT_EQ(numerical.code, cli::kNumerical);
  EXPECT_EQ(io_error.code, cli::kIo);
  EXPECT_EQ(run_args({"no-such-command"}).code, cli::kUsage);
  EXPECT_EQ(run_args({"harmonic", "--boundary", "1,2"}).code, cli::kUsage);
  const std::set<int> codes{usage.code, resource.code, domain.code, numerical.code, io_error.code};
  EXPECT_EQ(codes.size(), 5u);
  const auto err = io::json::parse(resource.err);
  EXPECT_EQ(err.at("error"), "resource");
  EXPECT_FALSE(err.at("message").get<std::string>().empty());
}

TEST(Cli, OutputDirectoryFromEnvironment) {
  const fs::path dir = fs::temp_directory_path() / "sierpinski_io_cli_test";
  fs::create_directories(dir);
  ::setenv(cli::kOutputDirEnv, dir.c_str(), 1);
  const auto r = run_args({"spectrum", "--level", "1", "--output", "spectrum.json"});
  ::unsetenv(cli::kOutputDirEnv);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(dir / "spectrum.json");
  const auto j = io::json::parse(in);
  EXPECT_EQ(j.at("records").size(), 3u);
  fs::remove_all(dir);
}

TEST(Cli, ParseDefaults) {
  const char *argv[] = {"sierpinski", "limit-spectrum"};
  std::ostringstream out, err;
  const auto parsed = cli::parse(2, argv, out, err);
  ASSERT_TRUE(std::holds_alternative<cli::RunConfig>(parsed));
  const auto &c = std::get<cli::RunConfig>(parsed);
  EXPECT_EQ(c.subcommand, "limit-spectrum");
  EXPECT_EQ(c.level, 6);
  EXPECT_TRUE(c.output_path.empty());

  const char *help[] = {"sierpinski", "--help"};
  const auto h = cli::parse(2, help, out, err);
  ASSERT_TRUE(std::holds_alternative<int>(h));
  EXPECT_EQ(std::get<int>(h), 0);
  EXPECT_NE(out.str().find("spectrum"), std::string::npos);
}
