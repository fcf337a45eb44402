#include "yulesim_cli/cli.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "yulesim/asymptotics.hpp"
#include "yulesim/cmj.hpp"
#include "yulesim/distributions.hpp"
#include "yulesim/errors.hpp"
#include "yulesim/io.hpp"
#include "yulesim/mutation_forest.hpp"
#include "yulesim/parallel.hpp"
#include "yulesim/tail_mc.hpp"
#include "yulesim/version.hpp"

namespace yulesim::cli {
namespace {

using nlohmann::json;

constexpr std::string_view kManifestTag = "manifest: ";
constexpr std::string_view kRuntimeTag = "# runtime: ";

struct Result {
  std::string csv;  // body without manifest and runtime lines
  json document;    // "result" member of the JSON output
};

json real_or_string(double v) {
  return std::isfinite(v) ? json(v) : json(io::format_real(v));
}

// --- pmf --------------------------------------------------------------------

Result run_pmf(const ExperimentConfig& c, unsigned threads) {
  const ModelParams params(c.theta, c.rho);
  if (c.k_max < 1) throw DomainError("--k-max must be at least 1");
  const bool analytic = c.theta == 0.0;
  std::vector<double> pmf(c.k_max), se(c.k_max, 0.0);
  if (analytic) {
    for (std::uint64_t k = 1; k <= c.k_max; ++k) {
      pmf[k - 1] = distributions::yule_simon_pmf_theta0(c.rho, k);
    }
  } else {
    if (c.replicates < 2) throw DomainError("--replicates must be at least 2");
    struct Counts {
      std::vector<std::uint64_t> bins;
      void merge(const Counts& o) {
        if (bins.empty()) bins.assign(o.bins.size(), 0);
        for (std::size_t i = 0; i < o.bins.size(); ++i) bins[i] += o.bins[i];
      }
    };
    const auto counts = reduce_blocks<Counts>(c.replicates, threads, [&](std::uint64_t b, std::uint64_t e) {
      Counts t;
      t.bins.assign(c.k_max, 0);
      for (std::uint64_t r = b; r < e; ++r) {
        Stream s = make_stream(c.seed, r);
        const auto x = cmj::sample_X_capped(params, s, c.k_max + 1);
        if (x <= c.k_max) ++t.bins[x - 1];
      }
      return t;
    });
    const double reps = static_cast<double>(c.replicates);
    for (std::size_t i = 0; i < c.k_max; ++i) {
      pmf[i] = static_cast<double>(counts.bins[i]) / reps;
      se[i] = std::sqrt(pmf[i] * (1.0 - pmf[i]) / (reps - 1.0));
    }
  }
  const auto quad = distributions::prob_X_equals_one_report(params, c.quad_tol);

  Result r;
  json meta{{"method", analytic ? "analytic" : "monte_carlo"},
            {"prob_X_equals_one_quadrature", quad.value},
            {"quadrature_abs_error", quad.abs_error}};
  std::ostringstream csv;
  csv << "# pmf: " << meta.dump() << "\nk,pmf,stderr\n";
  json rows = json::array();
  for (std::uint64_t k = 1; k <= c.k_max; ++k) {
    csv << k << ',' << io::format_real(pmf[k - 1]) << ',' << io::format_real(se[k - 1]) << '\n';
    rows.push_back({{"k", k}, {"pmf", pmf[k - 1]}, {"stderr", se[k - 1]}});
  }
  r.csv = csv.str();
  r.document = meta;
  r.document["rows"] = rows;
  return r;
}

// --- moments ----------------------------------------------------------------

Result run_moments(const ExperimentConfig& c) {
  const ModelParams params(c.theta, c.rho);
  std::vector<std::pair<std::string, double>> q;
  q.emplace_back("mean", distributions::mean_X(params));
  q.emplace_back("mean_finite", params.mean_finite() ? 1.0 : 0.0);
  q.emplace_back("prob_X_equals_one", distributions::prob_X_equals_one(params, c.quad_tol));
  if (c.theta < 1.0) q.emplace_back("power_tail_exponent", distributions::power_tail_exponent(params));
  if (c.theta > 1.0) q.emplace_back("exponential_tail_rate", distributions::exponential_tail_rate(c.theta));
  if (c.theta > 0.0 && c.theta < 1.0) {
    q.emplace_back("extinction_probability", distributions::extinction_probability(c.theta));
  }
  Result r;
  std::ostringstream csv;
  csv << "quantity,value\n";
  for (const auto& [name, value] : q) {
    csv << name << ',' << io::format_real(value) << '\n';
    r.document[name] = real_or_string(value);
  }
  r.csv = csv.str();
  return r;
}

// --- sample -----------------------------------------------------------------

Result run_sample(const ExperimentConfig& c, unsigned threads) {
  const ModelParams params(c.theta, c.rho);
  if (c.replicates < 1) throw DomainError("--replicates must be positive");
  const auto parts = map_blocks(c.replicates, threads, [&](std::uint64_t b, std::uint64_t e) {
    std::vector<std::uint64_t> xs;
    xs.reserve(e - b);
    for (std::uint64_t r = b; r < e; ++r) {
      Stream s = make_stream(c.seed, r);
      xs.push_back(cmj::sample_X_capped(params, s, c.cap));
    }
    return xs;
  });
  Result r;
  std::ostringstream csv;
  csv << "x\n";
  json xs = json::array();
  for (const auto& part : parts) {
    for (auto x : part) {
      csv << x << '\n';
      xs.push_back(x);
    }
  }
  r.csv = csv.str();
  r.document = {{"samples", xs}};
  return r;
}

// --- tail -------------------------------------------------------------------

Result run_tail(const ExperimentConfig& c, unsigned threads) {
  const ModelParams params(c.theta, c.rho);
  const auto kind = tail::estimator_from_string(c.estimator);
  if (c.lambda && kind != tail::EstimatorKind::kRepresentationTilted) {
    throw InputError("--lambda applies only to --estimator tilted");
  }
  if (c.n_max < 1) throw DomainError("--n-max must be at least 1");
  const tail::McConfig mc{c.replicates, c.seed, threads};
  tail::TailCurve curve{params};
  switch (kind) {
    case tail::EstimatorKind::kDirectSampling:
      curve = tail::estimate_survival_direct(params, c.n_max, mc);
      break;
    case tail::EstimatorKind::kRepresentation:
      curve = tail::representation_curve(params, tail::range_1_to(c.n_max), mc);
      break;
    case tail::EstimatorKind::kRepresentationTilted:
      curve = tail::tilted_curve(params, tail::range_1_to(c.n_max),
                                 c.lambda.value_or(tail::default_tilt(c.theta)), mc);
      break;
  }
  Result r;
  r.csv = tail::to_csv(curve);
  r.document = json::parse(tail::to_json(curve));
  r.document.erase("wall_seconds");
  return r;
}

// --- fit --------------------------------------------------------------------

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open input file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

bool looks_like_json(const std::string& text) {
  const auto pos = text.find_first_not_of(" \t\r\n");
  return pos != std::string::npos && text[pos] == '{';
}

Result run_fit(const ExperimentConfig& c) {
  if (c.input.empty()) throw InputError("fit needs --input with a tail curve (CSV or JSON)");
  if (!(c.n_lo < c.n_hi)) throw DomainError("fit needs --n-lo < --n-hi");
  const std::string text = read_file(c.input);
  const auto curve = looks_like_json(text) ? tail::tail_curve_from_json(text)
                                           : tail::tail_curve_from_csv(text);
  const auto fit = asymptotics::fit_tail(asymptotics::tail_kind_from_string(c.fit_kind), curve,
                                         c.n_lo, c.n_hi);
  Result r;
  r.document = json::parse(asymptotics::to_json(fit));
  std::ostringstream csv;
  csv << "kind,fitted_exponent,theoretical_exponent,n_lo,n_hi,residual_rms,weighted,intercept,"
         "implied_prefactor\n";
  csv << asymptotics::to_string(fit.kind) << ',' << io::format_real(fit.fitted_exponent) << ','
      << (fit.theoretical_exponent ? io::format_real(*fit.theoretical_exponent) : "") << ','
      << fit.n_lo << ',' << fit.n_hi << ',' << io::format_real(fit.residual_rms) << ','
      << (fit.weighted ? "true" : "false") << ',' << io::format_real(fit.intercept) << ','
      << (fit.implied_prefactor ? io::format_real(*fit.implied_prefactor) : "") << '\n';
  r.csv = csv.str();
  return r;
}

// --- forest -----------------------------------------------------------------

forest::MutationRegime regime_of(const ExperimentConfig& c) {
  switch (forest::regime_kind_from_string(c.regime)) {
    case forest::RegimeKind::kIidBernoulli:
      return forest::MutationRegime::iid_bernoulli(c.clone_prob);
    case forest::RegimeKind::kLogRare:
      return forest::MutationRegime::log_rare();
    case forest::RegimeKind::kPowerRare:
      return forest::MutationRegime::power_rare(c.regime_rho);
  }
  throw InputError("unknown regime");
}

Result run_forest(const ExperimentConfig& c, unsigned threads) {
  forest::ForestConfig f;
  f.theta = c.theta;
  f.regime = regime_of(c);
  f.n = c.n;
  f.runs = c.runs;
  f.seed = c.seed;
  f.threads = threads;
  f.k_max = c.k_max;
  f.target_replicates = c.target_replicates;
  const auto result = forest::run_forest_experiment(f);
  Result r;
  r.csv = forest::to_csv(result);
  r.document = json::parse(forest::to_json(result));
  r.document.erase("wall_seconds");
  return r;
}

// --- progeny ----------------------------------------------------------------

Result run_progeny(const ExperimentConfig& c, unsigned threads) {
  if (!(c.theta > 0.0)) {
    throw DomainError("total progeny is almost surely infinite for theta <= 0");
  }
  if (c.replicates < 2) throw DomainError("--replicates must be at least 2");
  if (c.n_max < 1) throw DomainError("--n-max must be at least 1");
  struct Counts {
    std::vector<std::uint64_t> bins;
    std::uint64_t exceeded = 0;
    void merge(const Counts& o) {
      if (bins.empty()) bins.assign(o.bins.size(), 0);
      for (std::size_t i = 0; i < o.bins.size(); ++i) bins[i] += o.bins[i];
      exceeded += o.exceeded;
    }
  };
  const auto counts = reduce_blocks<Counts>(c.replicates, threads, [&](std::uint64_t b, std::uint64_t e) {
    Counts t;
    t.bins.assign(c.n_max, 0);
    for (std::uint64_t r = b; r < e; ++r) {
      Stream s = make_stream(c.seed, r);
      const auto out = cmj::sample_total_progeny(c.theta, s, c.cap);
      if (out.exceeded_cap) {
        ++t.exceeded;
      } else if (out.population <= c.n_max) {
        ++t.bins[out.population - 1];
      }
    }
    return t;
  });
  const double reps = static_cast<double>(c.replicates);
  const double extinct = 1.0 - static_cast<double>(counts.exceeded) / reps;
  json meta{{"exceeded_cap", counts.exceeded},
            {"extinct_fraction", extinct},
            {"extinct_fraction_stderr", std::sqrt(extinct * (1.0 - extinct) / (reps - 1.0))}};
  if (c.theta < 1.0) meta["extinction_probability"] = distributions::extinction_probability(c.theta);

  Result r;
  std::ostringstream csv;
  csv << "# progeny: " << meta.dump() << "\nn,empirical,borel_pmf,stderr\n";
  json rows = json::array();
  for (std::uint64_t n = 1; n <= c.n_max; ++n) {
    const double p = static_cast<double>(counts.bins[n - 1]) / reps;
    const double se = std::sqrt(p * (1.0 - p) / (reps - 1.0));
    const double borel = distributions::borel_total_progeny_pmf(c.theta, n);
    csv << n << ',' << io::format_real(p) << ',' << io::format_real(borel) << ','
        << io::format_real(se) << '\n';
    rows.push_back({{"n", n}, {"empirical", p}, {"borel_pmf", borel}, {"stderr", se}});
  }
  r.csv = csv.str();
  r.document = meta;
  r.document["rows"] = rows;
  return r;
}

// --- manifest ---------------------------------------------------------------

json config_json(const ExperimentConfig& c) {
  json j{{"theta", c.theta}, {"rho", c.rho}, {"seed", c.seed}};
  const auto& cmd = c.command;
  if (cmd == "pmf") {
    j.update({{"k_max", c.k_max}, {"replicates", c.replicates}, {"quad_tol", c.quad_tol}});
  } else if (cmd == "moments") {
    j.update({{"quad_tol", c.quad_tol}});
  } else if (cmd == "sample") {
    j.update({{"replicates", c.replicates}, {"cap", c.cap}});
  } else if (cmd == "tail") {
    j.update({{"n_max", c.n_max}, {"replicates", c.replicates}, {"estimator", c.estimator}});
    if (c.lambda) j["lambda"] = *c.lambda;
  } else if (cmd == "fit") {
    j = json{{"input", c.input}, {"fit_kind", c.fit_kind}, {"n_lo", c.n_lo}, {"n_hi", c.n_hi}};
  } else if (cmd == "forest") {
    j.erase("rho");
    j.update({{"regime", c.regime}, {"n", c.n}, {"runs", c.runs}, {"k_max", c.k_max},
              {"target_replicates", c.target_replicates}});
    if (c.regime == "a" || c.regime == "iid_bernoulli") j["clone_prob"] = c.clone_prob;
    if (c.regime == "c" || c.regime == "power_rare") j["regime_rho"] = c.regime_rho;
  } else if (cmd == "progeny") {
    j.erase("rho");
    j.update({{"n_max", c.n_max}, {"replicates", c.replicates}, {"cap", c.cap}});
  }
  return j;
}

json manifest_of(const ExperimentConfig& c) {
  return json{{"command", c.command}, {"config", config_json(c)}, {"version", kVersion}};
}

template <class T>
void take(const json& j, const char* key, T& field) {
  if (j.contains(key)) field = j.at(key).get<T>();
}

Result dispatch(const ExperimentConfig& c, unsigned threads) {
  const auto& cmd = c.command;
  if (cmd == "pmf") return run_pmf(c, threads);
  if (cmd == "moments") return run_moments(c);
  if (cmd == "sample") return run_sample(c, threads);
  if (cmd == "tail") return run_tail(c, threads);
  if (cmd == "fit") return run_fit(c);
  if (cmd == "forest") return run_forest(c, threads);
  if (cmd == "progeny") return run_progeny(c, threads);
  throw InputError("unknown command '" + cmd + "'");
}

// --- error reporting ----------------------------------------------------------

int report(std::ostream& err, std::string_view category, const std::string& message,
           ExitCode code) {
  err << json{{"error", {{"category", category}, {"message", message}, {"exit_code", static_cast<int>(code)}}}}.dump()
      << '\n';
  return static_cast<int>(code);
}

void add_model_options(CLI::App* sub, ExperimentConfig& c) {
  sub->add_option("--theta", c.theta, "Fertility decay rate theta");
  sub->add_option("--rho", c.rho, "Observation rate rho (> 0)");
}

}  // namespace

std::string manifest_json(const ExperimentConfig& config) { return manifest_of(config).dump(); }

ExperimentConfig config_from_manifest_text(const std::string& document) {
  json manifest;
  try {
    if (looks_like_json(document)) {
      manifest = json::parse(document).at("manifest");
    } else {
      for (const auto& line : io::comment_lines(document)) {
        if (line.starts_with(kManifestTag)) manifest = json::parse(line.substr(kManifestTag.size()));
      }
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed manifest: ") + e.what());
  }
  if (manifest.is_null()) throw InputError("document carries no manifest");
  ExperimentConfig c;
  try {
    c.command = manifest.at("command").get<std::string>();
    const auto& j = manifest.at("config");
    take(j, "theta", c.theta);
    take(j, "rho", c.rho);
    take(j, "n", c.n);
    take(j, "n_max", c.n_max);
    take(j, "replicates", c.replicates);
    take(j, "seed", c.seed);
    take(j, "estimator", c.estimator);
    if (j.contains("lambda")) c.lambda = j.at("lambda").get<double>();
    take(j, "regime", c.regime);
    take(j, "clone_prob", c.clone_prob);
    take(j, "regime_rho", c.regime_rho);
    take(j, "runs", c.runs);
    take(j, "k_max", c.k_max);
    take(j, "target_replicates", c.target_replicates);
    take(j, "n_lo", c.n_lo);
    take(j, "n_hi", c.n_hi);
    take(j, "fit_kind", c.fit_kind);
    take(j, "cap", c.cap);
    take(j, "quad_tol", c.quad_tol);
    take(j, "input", c.input);
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed manifest config: ") + e.what());
  }
  return c;
}

std::string execute(const ExperimentConfig& config, const RuntimeOptions& runtime) {
  if (runtime.format != "csv" && runtime.format != "json") {
    throw InputError("--format must be csv or json");
  }
  if (runtime.threads < 1) throw DomainError("--threads must be positive");
  const auto start = std::chrono::steady_clock::now();
  const Result result = dispatch(config, runtime.threads);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const json runtime_block{{"threads", runtime.threads}, {"wall_seconds", wall}};
  if (runtime.format == "json") {
    json doc{{"manifest", manifest_of(config)}, {"result", result.document}, {"runtime", runtime_block}};
    return doc.dump(2) + "\n";
  }
  std::string out = "# ";
  out += kManifestTag;
  out += manifest_of(config).dump() + "\n" + result.csv;
  out += kRuntimeTag;
  out += runtime_block.dump() + "\n";
  return out;
}

std::string strip_runtime(const std::string& document) {
  if (looks_like_json(document)) {
    json doc = json::parse(document);
    doc.erase("runtime");
    return doc.dump(2) + "\n";
  }
  std::istringstream in(document);
  std::string line, out;
  while (std::getline(in, line)) {
    if (line.starts_with(kRuntimeTag)) continue;
    out += line + "\n";
  }
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  ExperimentConfig c;
  RuntimeOptions rt;
  rt.threads = default_thread_count();
  std::string from_manifest;
  double lambda = 0.0;

  CLI::App app{"Simulation and estimation toolkit for the two-parameter Yule-Simon law", "yulesim"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(0, 1);
  app.add_option("--from-manifest", from_manifest,
                 "Re-run the experiment recorded in a previous output file");
  app.add_option("--threads", rt.threads, "Worker threads (default: YULESIM_THREADS or all cores)");
  app.add_option("--output", rt.output, "Output file (default: standard output)");
  app.add_option("--format", rt.format, "Output format")->check(CLI::IsMember({"csv", "json"}));

  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", c.seed, "Experiment seed (64-bit)");
    sub->add_option("--threads", rt.threads, "Worker threads");
    sub->add_option("--output", rt.output, "Output file");
    sub->add_option("--format", rt.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  };

  auto* pmf = app.add_subcommand("pmf", "P(X = k) for k <= k-max (exact at theta = 0, Monte Carlo otherwise)");
  add_model_options(pmf, c);
  pmf->add_option("--k-max", c.k_max, "Largest k");
  pmf->add_option("--replicates", c.replicates, "Monte Carlo draws when theta != 0");
  pmf->add_option("--quad-tol", c.quad_tol, "Absolute tolerance of the P(X = 1) quadrature");
  common(pmf);

  auto* moments = app.add_subcommand("moments", "Mean of X, P(X = 1) and tail constants");
  add_model_options(moments, c);
  moments->add_option("--quad-tol", c.quad_tol, "Absolute tolerance of the P(X = 1) quadrature");
  common(moments);

  auto* sample = app.add_subcommand("sample", "Exact draws of X");
  add_model_options(sample, c);
  sample->add_option("--replicates", c.replicates, "Number of draws");
  sample->add_option("--cap", c.cap, "Stop a draw once it reaches this population");
  common(sample);

  auto* tail_cmd = app.add_subcommand("tail", "Monte Carlo survival curve P(X > n)");
  add_model_options(tail_cmd, c);
  tail_cmd->add_option("--n-max", c.n_max, "Largest n");
  tail_cmd->add_option("--replicates", c.replicates, "Replicates");
  tail_cmd->add_option("--estimator", c.estimator, "direct, representation or tilted")
      ->check(CLI::IsMember({"direct", "direct_sampling", "representation", "tilted",
                             "representation_tilted"}));
  auto* lambda_opt = tail_cmd->add_option("--lambda", lambda, "Tilted Poisson rate (default: max(theta, 1))");
  common(tail_cmd);

  auto* fit = app.add_subcommand("fit", "Fit a tail regime to a survival curve file");
  fit->add_option("--input", c.input, "Curve produced by the tail command")->required();
  fit->add_option("--fit-kind", c.fit_kind, "power, exponential or stretched")
      ->check(CLI::IsMember({"power", "exponential", "stretched"}));
  fit->add_option("--n-lo", c.n_lo, "Smallest n in the fit")->required();
  fit->add_option("--n-hi", c.n_hi, "Largest n in the fit")->required();
  fit->add_option("--threads", rt.threads, "Worker threads");
  fit->add_option("--output", rt.output, "Output file");
  fit->add_option("--format", rt.format, "Output format")->check(CLI::IsMember({"csv", "json"}));

  auto* forest_cmd = app.add_subcommand("forest", "Allelic partition of mutation forests");
  forest_cmd->add_option("--theta", c.theta, "Fertility decay rate (<= 0)");
  forest_cmd->add_option("--regime", c.regime, "a (iid), b (log-rare) or c (power-rare)")
      ->check(CLI::IsMember({"a", "b", "c", "iid_bernoulli", "log_rare", "power_rare"}));
  forest_cmd->add_option("--clone-prob", c.clone_prob, "Clone probability p of regime a");
  forest_cmd->add_option("--regime-rho", c.regime_rho, "Exponent rho of regime c");
  forest_cmd->add_option("--n", c.n, "Population size");
  forest_cmd->add_option("--runs", c.runs, "Independent forests");
  forest_cmd->add_option("--k-max", c.k_max, "Largest component size reported");
  forest_cmd->add_option("--target-replicates", c.target_replicates,
                         "Draws of X for the target pmf when it has no closed form");
  common(forest_cmd);

  auto* progeny = app.add_subcommand("progeny", "Total progeny Y(inf) against the Borel law");
  progeny->add_option("--theta", c.theta, "Fertility decay rate (> 0)");
  progeny->add_option("--replicates", c.replicates, "Runs");
  progeny->add_option("--n-max", c.n_max, "Largest progeny size reported");
  progeny->add_option("--cap", c.cap, "Population at which a run counts as infinite");
  common(progeny);

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    return report(err, "usage", e.what(), ExitCode::kUsage);
  }

  try {
    if (!from_manifest.empty()) {
      if (!app.get_subcommands().empty()) {
        return report(err, "usage", "--from-manifest cannot be combined with a subcommand",
                      ExitCode::kUsage);
      }
      std::ifstream in(from_manifest, std::ios::binary);
      if (!in) throw InputError("cannot open manifest file '" + from_manifest + "'");
      std::ostringstream text;
      text << in.rdbuf();
      c = config_from_manifest_text(text.str());
      if (rt.format == "csv" && looks_like_json(text.str())) rt.format = "json";
    } else {
      if (app.get_subcommands().empty()) {
        return report(err, "usage", "a subcommand is required (see --help)", ExitCode::kUsage);
      }
      c.command = app.get_subcommands().front()->get_name();
      if (lambda_opt->count() > 0) c.lambda = lambda;
    }
    const std::string document = execute(c, rt);
    if (rt.output.empty()) {
      out << document;
    } else {
      std::ofstream file(rt.output, std::ios::binary);
      if (!file) throw InputError("cannot write output file '" + rt.output + "'");
      file << document;
    }
    return 0;
  } catch (const DomainError& e) {
    return report(err, "domain", e.what(), ExitCode::kUsage);
  } catch (const InputError& e) {
    return report(err, "input", e.what(), ExitCode::kUsage);
  } catch (const FitDomainError& e) {
    return report(err, "fit_domain", e.what(), ExitCode::kNumeric);
  } catch (const NumericError& e) {
    return report(err, "numeric", e.what(), ExitCode::kNumeric);
  } catch (const std::exception& e) {
    return report(err, "internal", e.what(), ExitCode::kNumeric);
  }
}

}  // namespace yulesim::cli
