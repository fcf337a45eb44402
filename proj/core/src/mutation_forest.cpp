#include "yulesim/mutation_forest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "yulesim/distributions.hpp"
#include "yulesim/errors.hpp"
#include "yulesim/io.hpp"
#include "yulesim/parallel.hpp"

namespace yulesim::forest {

MutationRegime MutationRegime::iid_bernoulli(double clone_prob) {
  if (!(clone_prob > 0.0 && clone_prob < 1.0)) {
    throw DomainError("clone probability must lie in (0, 1), got " + std::to_string(clone_prob));
  }
  return MutationRegime(RegimeKind::kIidBernoulli, clone_prob);
}

MutationRegime MutationRegime::power_rare(double rho) {
  if (!(rho > 0.0 && rho < 1.0)) {
    throw DomainError("power_rare rho must lie in (0, 1), got " + std::to_string(rho));
  }
  return MutationRegime(RegimeKind::kPowerRare, rho);
}

double MutationRegime::rho() const {
  switch (kind_) {
    case RegimeKind::kIidBernoulli:
      return 1.0 / parameter_;
    case RegimeKind::kPowerRare:
      return parameter_;
    case RegimeKind::kLogRare:
      break;
  }
  throw DomainError("log_rare regime has no rho");
}

double MutationRegime::mutant_probability(std::uint64_t id) const noexcept {
  if (id <= 1) return 1.0;
  const double l = static_cast<double>(id);
  switch (kind_) {
    case RegimeKind::kIidBernoulli:
      return 1.0 - parameter_;
    case RegimeKind::kLogRare:
      return 1.0 / std::log(l + 1.0);
    case RegimeKind::kPowerRare:
      return std::pow(l, parameter_ - 1.0);
  }
  return 1.0;
}

std::string_view to_string(RegimeKind kind) noexcept {
  switch (kind) {
    case RegimeKind::kIidBernoulli:
      return "iid_bernoulli";
    case RegimeKind::kLogRare:
      return "log_rare";
    case RegimeKind::kPowerRare:
      return "power_rare";
  }
  return "unknown";
}

RegimeKind regime_kind_from_string(std::string_view name) {
  if (name == "iid_bernoulli" || name == "a") return RegimeKind::kIidBernoulli;
  if (name == "log_rare" || name == "b") return RegimeKind::kLogRare;
  if (name == "power_rare" || name == "c") return RegimeKind::kPowerRare;
  throw InputError("unknown mutation regime '" + std::string(name) + "'");
}

std::vector<bool> mark_mutations(const cmj::Genealogy& genealogy, const MutationRegime& regime,
                                 Stream& stream) {
  std::vector<bool> marks(genealogy.records.size());
  for (std::size_t i = 0; i < marks.size(); ++i) {
    const std::uint64_t id = genealogy.records[i].id;
    marks[i] = id == 1 || stream.bernoulli(regime.mutant_probability(id));
  }
  return marks;
}

std::vector<std::uint64_t> mutant_counts(const MutationRegime& regime,
                                         std::span<const std::uint64_t> checkpoints,
                                         Stream& stream) {
  std::vector<std::uint64_t> out;
  out.reserve(checkpoints.size());
  std::uint64_t count = 0;
  std::uint64_t id = 0;
  for (std::uint64_t c : checkpoints) {
    if (c < id) throw InputError("mutant count checkpoints must be nondecreasing");
    for (; id < c;) {
      ++id;
      if (id == 1 || stream.bernoulli(regime.mutant_probability(id))) ++count;
    }
    out.push_back(count);
  }
  return out;
}

AllelicPartition allelic_partition(const cmj::Genealogy& genealogy, const std::vector<bool>& marks) {
  const auto& records = genealogy.records;
  if (marks.size() != records.size()) {
    throw InputError("mutation marks (" + std::to_string(marks.size()) +
                     ") do not match the genealogy size (" + std::to_string(records.size()) + ")");
  }
  const std::size_t n = records.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (records[i].id != i + 1 || (i > 0 && (records[i].parent == 0 || records[i].parent > i))) {
      throw InputError("genealogy records must have ids 1..n in birth order");
    }
  }
  AllelicPartition out;
  out.population = n;
  if (n == 0) return out;
  if (!marks[0]) throw InputError("the ancestor must be marked as a mutant");

  // Every clone's parent has a smaller id, so one downward pass settles all sizes.
  std::vector<std::uint64_t> size(n, 1);
  for (std::size_t i = n - 1; i > 0; --i) {
    if (!marks[i]) size[records[i].parent - 1] += size[i];
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (marks[i]) out.component_sizes.push_back(size[i]);
  }
  out.mutant_count = out.component_sizes.size();
  return out;
}

std::vector<QEntry> empirical_Q(const AllelicPartition& partition, std::uint64_t k_max) {
  if (k_max < 1) throw InputError("k_max must be at least 1");
  std::vector<std::uint64_t> counts(k_max, 0);
  for (std::uint64_t s : partition.component_sizes) {
    if (s <= k_max) ++counts[s - 1];
  }
  std::vector<QEntry> out;
  out.reserve(k_max);
  const double m = static_cast<double>(partition.mutant_count);
  for (std::uint64_t k = 1; k <= k_max; ++k) {
    out.push_back({k, m > 0 ? static_cast<double>(counts[k - 1]) / m : 0.0});
  }
  return out;
}

ModelParams regime_target(double theta, const MutationRegime& regime) {
  if (!(theta <= 0.0)) {
    throw DomainError("forest limits are only available for theta <= 0, got " +
                      std::to_string(theta));
  }
  switch (regime.kind()) {
    case RegimeKind::kIidBernoulli:
      return ModelParams(theta * regime.rho(), (1.0 - theta) * regime.rho());
    case RegimeKind::kLogRare:
      return ModelParams(theta, 1.0 - theta);
    case RegimeKind::kPowerRare:
      return ModelParams(theta, (1.0 - theta) * regime.rho());
  }
  throw DomainError("unknown regime");
}

double ForestRow::combined_se() const noexcept {
  return std::hypot(q_emp_se, q_target_se);
}

namespace {

struct RunSummary {
  std::vector<double> q;
  double component_size = 0.0;
  double mutants = 0.0;
};

struct TargetCounts {
  std::vector<std::uint64_t> counts;
  void merge(const TargetCounts& other) {
    if (counts.empty()) counts.assign(other.counts.size(), 0);
    for (std::size_t i = 0; i < other.counts.size(); ++i) counts[i] += other.counts[i];
  }
};

nlohmann::json manifest(const ForestResult& r) {
  const auto& c = r.config;
  nlohmann::json regime{{"kind", std::string(to_string(c.regime.kind()))}};
  if (c.regime.kind() == RegimeKind::kIidBernoulli) regime["clone_prob"] = c.regime.parameter();
  if (c.regime.kind() == RegimeKind::kPowerRare) regime["rho"] = c.regime.parameter();
  return {{"theta", c.theta},
          {"regime", regime},
          {"n", c.n},
          {"runs", c.runs},
          {"seed", c.seed},
          {"k_max", c.k_max},
          {"target_replicates", c.target_replicates},
          {"target", {{"theta", r.target.theta()}, {"rho", r.target.rho()}}},
          {"target_analytic", r.target_analytic},
          {"mean_component_size", r.mean_component_size},
          {"mean_mutant_count", r.mean_mutant_count}};
}

}  // namespace

ForestResult run_forest_experiment(const ForestConfig& config) {
  if (config.n < 10) throw DomainError("forest experiments need n >= 10");
  if (config.runs < 1) throw DomainError("forest experiments need at least one run");
  if (config.k_max < 1) throw DomainError("k_max must be at least 1");
  const auto start = std::chrono::steady_clock::now();

  ForestResult result;
  result.config = config;
  result.target = regime_target(config.theta, config.regime);
  result.target_analytic = result.target.theta() == 0.0;

  const auto summaries = map_blocks(
      config.runs, config.threads,
      [&](std::uint64_t run, std::uint64_t) {
        Stream tree_stream = make_stream(config.seed, run);
        Stream mark_stream = make_stream(config.seed, run, StreamLane::kMarks);
        const auto genealogy = cmj::simulate_genealogy(config.theta, config.n, tree_stream);
        const auto partition =
            allelic_partition(genealogy, mark_mutations(genealogy, config.regime, mark_stream));
        RunSummary s;
        for (const auto& e : empirical_Q(partition, config.k_max)) s.q.push_back(e.q);
        s.mutants = static_cast<double>(partition.mutant_count);
        s.component_size = static_cast<double>(partition.population) / s.mutants;
        return s;
      },
      1);

  std::vector<MomentAccumulator> q(config.k_max);
  MomentAccumulator size, mutants;
  for (const auto& s : summaries) {
    for (std::size_t k = 0; k < s.q.size(); ++k) q[k].add(s.q[k]);
    size.add(s.component_size);
    mutants.add(s.mutants);
  }
  result.mean_component_size = size.mean();
  result.mean_mutant_count = mutants.mean();

  std::vector<double> target(config.k_max), target_se(config.k_max, 0.0);
  if (result.target_analytic) {
    for (std::uint64_t k = 1; k <= config.k_max; ++k) {
      target[k - 1] = distributions::yule_simon_pmf_theta0(result.target.rho(), k);
    }
  } else {
    const std::uint64_t reps = config.target_replicates;
    if (reps < 2) throw DomainError("the Monte Carlo target needs at least 2 replicates");
    const auto counts = reduce_blocks<TargetCounts>(
        reps, config.threads, [&](std::uint64_t b, std::uint64_t e) {
          TargetCounts t;
          t.counts.assign(config.k_max, 0);
          for (std::uint64_t r = b; r < e; ++r) {
            Stream s = make_stream(config.seed, r, StreamLane::kTarget);
            const std::uint64_t x = cmj::sample_X_capped(result.target, s, config.k_max + 1);
            if (x <= config.k_max) ++t.counts[x - 1];
          }
          return t;
        });
    const double R = static_cast<double>(reps);
    for (std::size_t k = 0; k < config.k_max; ++k) {
      const double p = static_cast<double>(counts.counts[k]) / R;
      target[k] = p;
      target_se[k] = std::sqrt(p * (1.0 - p) / (R - 1.0));
    }
  }

  for (std::uint64_t k = 1; k <= config.k_max; ++k) {
    result.rows.push_back({k, q[k - 1].mean(), q[k - 1].stderr_of_mean(), target[k - 1],
                           target_se[k - 1]});
  }
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

std::string to_csv(const ForestResult& result) {
  std::ostringstream out;
  out << "# forest: " << manifest(result).dump() << '\n';
  out << "k,Q_emp,Q_target,stderr\n";
  for (const auto& row : result.rows) {
    out << row.k << ',' << io::format_real(row.q_emp) << ',' << io::format_real(row.q_target) << ','
        << io::format_real(row.combined_se()) << '\n';
  }
  return out.str();
}

std::string to_json(const ForestResult& result) {
  nlohmann::json doc = manifest(result);
  doc["wall_seconds"] = result.wall_seconds;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : result.rows) {
    rows.push_back({{"k", row.k},
                    {"Q_emp", row.q_emp},
                    {"Q_emp_stderr", row.q_emp_se},
                    {"Q_target", row.q_target},
                    {"Q_target_stderr", row.q_target_se},
                    {"stderr", row.combined_se()}});
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2);
}

}  // namespace yulesim::forest
