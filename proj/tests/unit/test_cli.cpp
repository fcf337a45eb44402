#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "yulesim/distributions.hpp"
#include "yulesim/io.hpp"
#include "yulesim_cli/cli.hpp"

using namespace yulesim;
using nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::path(YULESIM_TEST_TMPDIR) / name;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Rows of the data table, skipping comment lines and the header.
std::vector<std::vector<std::string>> rows_of(const std::string& csv) {
  auto rows = io::read_csv_rows(csv);
  if (!rows.empty()) rows.erase(rows.begin());
  return rows;
}

json error_of(const Outcome& o) { return json::parse(o.err).at("error"); }

}  // namespace

TEST(CliExamples, TailRowFiveMatchesOneOverTwentyOne) {
  const auto o = invoke({"tail", "--theta", "0", "--rho", "2", "--n-max", "50", "--replicates",
                         "1000000", "--estimator", "representation", "--seed", "42"});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto rows = rows_of(o.out);
  ASSERT_EQ(rows.size(), 50u);
  const auto& row = rows[4];
  ASSERT_EQ(row[0], "5");
  const double est = io::parse_real(row[1]);
  const double se = io::parse_real(row[2]);
  EXPECT_NEAR(distributions::survival_theta0(2.0, 5), 1.0 / 21.0, 1e-15);
  EXPECT_LE(std::abs(est - 1.0 / 21.0), 3.0 * se);
}

TEST(CliExamples, MomentsPrintsMeanTwo) {
  const auto o = invoke({"moments", "--theta", "0", "--rho", "2"});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_NE(o.out.find("\nmean,2\n"), std::string::npos) << o.out;
}

TEST(CliExamples, ThreadCountDoesNotChangeResults) {
  for (const std::string format : {"csv", "json"}) {
    const std::vector<std::string> base{"tail", "--theta", "0.5", "--rho", "1", "--n-max", "20",
                                        "--replicates", "30000", "--seed", "7", "--format", format};
    auto one = base, eight = base;
    one.insert(one.end(), {"--threads", "1"});
    eight.insert(eight.end(), {"--threads", "8"});
    const auto a = invoke(one), b = invoke(eight);
    ASSERT_EQ(a.code, 0);
    ASSERT_EQ(b.code, 0);
    EXPECT_NE(a.out, b.out);  // the runtime block records the thread count
    EXPECT_EQ(cli::strip_runtime(a.out), cli::strip_runtime(b.out));
  }
}

TEST(CliDeterminism, EveryCommandIsThreadIndependent) {
  const std::vector<std::vector<std::string>> commands{
      {"pmf", "--theta", "-0.5", "--rho", "2", "--replicates", "20000"},
      {"sample", "--theta", "0.3", "--rho", "1.5", "--replicates", "5000", "--cap", "100000"},
      {"tail", "--theta", "2", "--estimator", "tilted", "--n-max", "15", "--replicates", "20000"},
      {"tail", "--theta", "0", "--rho", "2", "--estimator", "direct", "--n-max", "15",
       "--replicates", "20000"},
      {"forest", "--theta", "-1", "--regime", "a", "--clone-prob", "0.5", "--n", "2000", "--runs",
       "6", "--target-replicates", "20000"},
      {"progeny", "--theta", "0.5", "--replicates", "5000", "--cap", "2000"},
  };
  for (const auto& cmd : commands) {
    auto one = cmd, four = cmd;
    one.insert(one.end(), {"--threads", "1"});
    four.insert(four.end(), {"--threads", "4"});
    const auto a = invoke(one), b = invoke(four);
    ASSERT_EQ(a.code, 0) << cmd[0] << ": " << a.err;
    ASSERT_EQ(b.code, 0) << cmd[0] << ": " << b.err;
    EXPECT_EQ(cli::strip_runtime(a.out), cli::strip_runtime(b.out)) << cmd[0];
  }
}

TEST(CliManifest, EmbedsConfigVersionAndWallTime) {
  const auto o = invoke({"pmf", "--theta", "0", "--rho", "3", "--k-max", "4", "--format", "json"});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto doc = json::parse(o.out);
  EXPECT_EQ(doc.at("manifest").at("command"), "pmf");
  EXPECT_EQ(doc.at("manifest").at("config").at("rho"), 3.0);
  EXPECT_TRUE(doc.at("manifest").contains("version"));
  EXPECT_TRUE(doc.at("runtime").contains("wall_seconds"));
  const auto& rows = doc.at("result").at("rows");
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_DOUBLE_EQ(rows[0].at("pmf").get<double>(), 0.75);
}

TEST(CliManifest, RerunFromManifestReproducesTheFile) {
  for (const std::string format : {"csv", "json"}) {
    const auto path = temp_file("rerun." + format);
    const auto first = invoke({"forest", "--theta", "0", "--regime", "b", "--n", "3000", "--runs",
                               "3", "--seed", "11", "--format", format, "--output",
                               path.string()});
    ASSERT_EQ(first.code, 0) << first.err;
    const std::string original = slurp(path);
    const auto again = invoke({"--from-manifest", path.string(), "--threads", "3"});
    ASSERT_EQ(again.code, 0) << again.err;
    EXPECT_EQ(cli::strip_runtime(again.out), cli::strip_runtime(original));
  }
}

TEST(CliManifest, ConfigRoundTrip) {
  cli::ExperimentConfig c;
  c.command = "tail";
  c.theta = 2.0;
  c.rho = 0.75;
  c.n_max = 33;
  c.replicates = 1234;
  c.seed = 0xFFFFFFFFFFFFFFFFULL;
  c.estimator = "tilted";
  c.lambda = 2.5;
  const auto back = cli::config_from_manifest_text("# manifest: " + cli::manifest_json(c) + "\n");
  EXPECT_EQ(back.command, "tail");
  EXPECT_EQ(back.theta, 2.0);
  EXPECT_EQ(back.rho, 0.75);
  EXPECT_EQ(back.n_max, 33u);
  EXPECT_EQ(back.replicates, 1234u);
  EXPECT_EQ(back.seed, 0xFFFFFFFFFFFFFFFFULL);
  EXPECT_EQ(back.estimator, "tilted");
  ASSERT_TRUE(back.lambda.has_value());
  EXPECT_EQ(*back.lambda, 2.5);
}

TEST(CliFit, FitsACurveWrittenByTail) {
  const auto curve = temp_file("curve.json");
  const auto t = invoke({"tail", "--theta", "0", "--rho", "2", "--n-max", "60", "--replicates",
                         "200000", "--format", "json", "--output", curve.string()});
  ASSERT_EQ(t.code, 0) << t.err;
  const auto f = invoke({"fit", "--input", curve.string(), "--fit-kind", "power", "--n-lo", "20",
                         "--n-hi", "60", "--format", "json"});
  ASSERT_EQ(f.code, 0) << f.err;
  const auto fit = json::parse(f.out).at("result");
  EXPECT_NEAR(fit.at("fitted_exponent").get<double>(), -2.0, 0.15);
}

TEST(CliErrors, UsageErrorsExitTwo) {
  const std::vector<std::vector<std::string>> bad{
      {"moments", "--theta", "0", "--rho", "0"},
      {"moments", "--rho", "-1"},
      {"forest", "--theta", "0.5"},
      {"tail", "--theta", "2", "--estimator", "tilted", "--lambda", "0"},
      {"tail", "--theta", "2", "--estimator", "tilted", "--lambda", "-1"},
      {"tail", "--lambda", "2"},
      {"tail", "--no-such-flag"},
      {"moments", "--theta", "abc"},
      {},
      {"fit", "--input", "/nonexistent/curve.csv", "--n-lo", "1", "--n-hi", "5"},
      {"progeny", "--theta", "-1"},
  };
  for (const auto& args : bad) {
    const auto o = invoke(args);
    EXPECT_EQ(o.code, 2) << (args.empty() ? "(none)" : args[0]) << ": " << o.err;
    ASSERT_NO_THROW(error_of(o));
    EXPECT_TRUE(error_of(o).contains("category"));
    EXPECT_TRUE(error_of(o).contains("message"));
    EXPECT_TRUE(o.out.empty());
  }
}

TEST(CliErrors, EmptyFitRangeIsANumericFailure) {
  const auto curve = temp_file("short.csv");
  ASSERT_EQ(invoke({"tail", "--theta", "0", "--rho", "2", "--n-max", "5", "--replicates", "1000",
                    "--output", curve.string()})
                .code,
            0);
  const auto o = invoke({"fit", "--input", curve.string(), "--n-lo", "100", "--n-hi", "200"});
  EXPECT_EQ(o.code, 3) << o.err;
  EXPECT_EQ(error_of(o).at("category"), "fit_domain");
}

TEST(CliRuntime, ThreadsEnvironmentVariableSetsTheDefault) {
  ::setenv("YULESIM_THREADS", "3", 1);
  const auto o = invoke({"moments", "--format", "json"});
  ::unsetenv("YULESIM_THREADS");
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(json::parse(o.out).at("runtime").at("threads"), 3);
}

TEST(CliRuntime, HelpAndVersionSucceed) {
  EXPECT_EQ(invoke({"--help"}).code, 0);
  const auto v = invoke({"--version"});
  EXPECT_EQ(v.code, 0);
  EXPECT_FALSE(v.out.empty());
}
