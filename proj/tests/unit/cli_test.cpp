#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "entland/cli/cli.hpp"
#include "entland/cli/config.hpp"
#include "entland/cli/format.hpp"

namespace fs = std::filesystem;
using entland::cli::run_cli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string config_path(const std::string& name) {
  return std::string(ENTLAND_SOURCE_DIR) + "/configs/" + name;
}

fs::path scratch() {
  const fs::path d = fs::temp_directory_path() / "entland_cli_test";
  fs::create_directories(d);
  return d;
}

fs::path write_config(const std::string& name, const std::string& text) {
  const fs::path p = scratch() / name;
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

const char* kTwoPoint = R"({
  "sources": [
    {"type": "discrete-plus-noise", "values": [-1, 1], "probs": [0.5, 0.5], "sigma": 0.1},
    {"type": "gaussian"}
  ]
})";

TEST(Format, ShortestRoundTrip) {
  EXPECT_EQ(entland::cli::format_number(0.5), "0.5");
  EXPECT_EQ(std::stod(entland::cli::format_number(0.1)), 0.1);
}

TEST(Config, UnknownKeyIsConfigError) {
  EXPECT_THROW(entland::cli::parse_config(R"({"sources": [{"type": "gaussian"}], "colour": 1})",
                                          "inline"),
               entland::cli::ConfigError);
}

TEST(Config, ExampleConfigsLoad) {
  for (const char* name : {"example1.json", "example2.json", "example3.json", "example4.json",
                           "example5.json", "example6.json"}) {
    EXPECT_NO_THROW(entland::cli::load_config(config_path(name)).model()) << name;
  }
}

TEST(Cli, NoArgumentsIsUsageError) { EXPECT_EQ(run({}).code, entland::cli::kExitUsage); }

TEST(Cli, MissingConfigFile) {
  EXPECT_EQ(run({"bounds", "--config", "/nonexistent/model.json"}).code,
            entland::cli::kExitUsage);
}

TEST(Cli, NegativeSigmaIsUsageError) {
  const auto r = run({"bounds", "--config", config_path("example4.json"), "--sigma", "-1"});
  EXPECT_EQ(r.code, entland::cli::kExitUsage);
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, GridBelowSixteenIsUsageError) {
  EXPECT_EQ(run({"scan", "--config", config_path("example6.json"), "--grid", "8"}).code,
            entland::cli::kExitUsage);
}

TEST(Cli, ParzenWithoutSeedIsUsageError) {
  const fs::path p = write_config("noseed.json", kTwoPoint);
  const auto r = run({"parzen", "--config", p.string(), "--grid", "16"});
  EXPECT_EQ(r.code, entland::cli::kExitUsage);
  EXPECT_NE(r.err.find("seed"), std::string::npos);
}

TEST(Cli, UnknownKeyInFileIsUsageError) {
  const fs::path p = write_config("badkey.json", R"({"sources": [{"type": "gaussian"}], "x": 0})");
  EXPECT_EQ(run({"bounds", "--config", p.string()}).code, entland::cli::kExitUsage);
}

TEST(Cli, BoundsSingleSigmaGivesOneRow) {
  const auto r = run({"bounds", "--config", config_path("example4.json"), "--sigma", "0.5"});
  ASSERT_EQ(r.code, entland::cli::kExitOk) << r.err;
  std::istringstream in(r.out);
  std::string header, row, extra;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_EQ(header, "sigma,entropy,upper,lower,bayes_error,decision_upper,decision_lower");
  EXPECT_EQ(row.rfind("0.5,", 0), 0u);
  EXPECT_FALSE(std::getline(in, extra) && !extra.empty());
}

TEST(Cli, ScanWritesCurveAndMinima) {
  const fs::path out = scratch() / "curve.csv";
  const auto r = run({"scan", "--config", config_path("example6.json"), "--grid", "32", "--out",
                      out.string()});
  ASSERT_EQ(r.code, entland::cli::kExitOk) << r.err;
  const std::string curve = slurp(out);
  EXPECT_EQ(std::count(curve.begin(), curve.end(), '\n'), 33);
  EXPECT_TRUE(fs::exists(scratch() / "curve.minima.csv"));
}

TEST(Cli, DiscreteListsCandidates) {
  const auto r = run({"discrete", "--config", config_path("example5.json")});
  ASSERT_EQ(r.code, entland::cli::kExitOk) << r.err;
  EXPECT_NE(r.out.find("\"generating_pairs\""), std::string::npos);
  EXPECT_NE(r.out.find("\"class\""), std::string::npos);
}

TEST(Cli, DiscreteGateNoticeForLargeThreeSourceModel) {
  const auto r = run({"discrete", "--config", config_path("three_sources.json")});
  ASSERT_EQ(r.code, entland::cli::kExitOk) << r.err;
  EXPECT_NE(r.err.find("64"), std::string::npos) << r.err;
}

TEST(Cli, TaylorOnUniformKernelIsNumericError) {
  const auto r = run({"taylor", "--config", config_path("example1.json"), "--source", "1"});
  EXPECT_EQ(r.code, entland::cli::kExitNumeric) << r.err;
}

TEST(Cli, ParzenIsDeterministic) {
  const fs::path p = write_config("seeded.json", kTwoPoint);
  const auto a = run({"parzen", "--config", p.string(), "--grid", "16", "--seed", "3"});
  const auto b = run({"parzen", "--config", p.string(), "--grid", "16", "--seed", "3"});
  ASSERT_EQ(a.code, entland::cli::kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);
}

}  // namespace
