#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace yulesim::cli {

enum class ExitCode : int {
  kOk = 0,
  kUsage = 2,    // bad flags, parameters outside their domain, unreadable input
  kNumeric = 3,  // a numerical procedure failed or a fit has no usable data
};

/// Every setting that influences a command's numeric output. Thread count,
/// output path and format are runtime choices and are kept out of the
/// manifest's config block.
struct ExperimentConfig {
  std::string command;
  double theta = 0.0;
  double rho = 1.0;
  std::uint64_t n = 10'000;
  std::uint64_t n_max = 50;
  std::uint64_t replicates = 100'000;
  std::uint64_t seed = 1;
  std::string estimator = "representation";
  std::optional<double> lambda;
  std::string regime = "a";
  double clone_prob = 0.5;
  double regime_rho = 0.5;
  std::uint64_t runs = 10;
  std::uint64_t k_max = 10;
  std::uint64_t target_replicates = 1'000'000;
  std::uint64_t n_lo = 0;
  std::uint64_t n_hi = 0;
  std::string fit_kind = "power";
  std::uint64_t cap = 100'000'000;
  double quad_tol = 1e-10;
  std::string input;
};

struct RuntimeOptions {
  unsigned threads = 1;
  std::string format = "csv";
  std::string output;  // empty: standard output
};

/// Runs the command line `args` (without the program name). Results go to
/// `out` or the --output file; errors are written to `err` as one JSON
/// object {"error": {"category", "message"}}.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Result document for `config`, including its manifest and runtime block.
std::string execute(const ExperimentConfig& config, const RuntimeOptions& runtime);

/// Manifest JSON (command, config, version) of a result document.
std::string manifest_json(const ExperimentConfig& config);
ExperimentConfig config_from_manifest_text(const std::string& document);

/// A result document without its runtime block (thread count and timing).
std::string strip_runtime(const std::string& document);

}  // namespace yulesim::cli
