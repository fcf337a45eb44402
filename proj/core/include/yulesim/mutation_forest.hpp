#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "yulesim/cmj.hpp"
#include "yulesim/params.hpp"
#include "yulesim/rng.hpp"

namespace yulesim::forest {

enum class RegimeKind { kIidBernoulli, kLogRare, kPowerRare };

/// Law of the neutral mutation marks. Individual 1 is always a mutant.
///   (a) iid_bernoulli(p): l >= 2 is a clone with probability p, rho = 1/p
///   (b) log_rare:         l >= 2 is a mutant with probability 1/ln(l + 1)
///   (c) power_rare(rho):  l >= 2 is a mutant with probability l^{rho - 1}
class MutationRegime {
 public:
  static MutationRegime iid_bernoulli(double clone_prob);
  static MutationRegime log_rare() noexcept { return MutationRegime(RegimeKind::kLogRare, 0.0); }
  static MutationRegime power_rare(double rho);

  RegimeKind kind() const noexcept { return kind_; }
  /// p for (a), rho for (c), 0 for (b).
  double parameter() const noexcept { return parameter_; }
  /// 1/p for (a), rho for (c); not defined for (b).
  double rho() const;

  double mutant_probability(std::uint64_t id) const noexcept;

  friend bool operator==(const MutationRegime&, const MutationRegime&) = default;

 private:
  MutationRegime(RegimeKind kind, double parameter) noexcept : kind_(kind), parameter_(parameter) {}
  RegimeKind kind_;
  double parameter_;
};

std::string_view to_string(RegimeKind kind) noexcept;
RegimeKind regime_kind_from_string(std::string_view name);

struct AllelicPartition {
  std::vector<std::uint64_t> component_sizes;  // ordered by founding mutant id
  std::uint64_t mutant_count = 0;
  std::uint64_t population = 0;
};

/// One mark per genealogy record, in record order.
std::vector<bool> mark_mutations(const cmj::Genealogy& genealogy, const MutationRegime& regime,
                                 Stream& stream);

/// Mutant counts among ids 1..c for every checkpoint c (nondecreasing). Uses
/// the same draws as mark_mutations on a genealogy of max(checkpoints) ids.
std::vector<std::uint64_t> mutant_counts(const MutationRegime& regime,
                                         std::span<const std::uint64_t> checkpoints,
                                         Stream& stream);

/// Components of the forest left after cutting the edge into every mutant.
/// Records must be in birth order with ids 1..n.
AllelicPartition allelic_partition(const cmj::Genealogy& genealogy, const std::vector<bool>& marks);

struct QEntry {
  std::uint64_t k;
  double q;  // fraction of components of size k
};

std::vector<QEntry> empirical_Q(const AllelicPartition& partition, std::uint64_t k_max);

/// Parameters of the limiting law of the component sizes. Requires theta <= 0.
ModelParams regime_target(double theta, const MutationRegime& regime);

struct ForestConfig {
  double theta = 0.0;
  MutationRegime regime = MutationRegime::iid_bernoulli(0.5);
  std::uint64_t n = 0;
  std::uint64_t runs = 0;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::uint64_t k_max = 10;
  /// Draws of X used for the target pmf when it has no closed form.
  std::uint64_t target_replicates = 1'000'000;
};

struct ForestRow {
  std::uint64_t k;
  double q_emp;      // average of Q_n(k) over runs
  double q_emp_se;   // standard error of that average
  double q_target;
  double q_target_se;  // 0 when the target is analytic
  double combined_se() const noexcept;
};

struct ForestResult {
  ForestConfig config;
  ModelParams target{0.0, 1.0};
  bool target_analytic = true;
  double mean_component_size = 0.0;  // average of n / m(n)
  double mean_mutant_count = 0.0;
  std::vector<ForestRow> rows;
  double wall_seconds = 0.0;
};

/// Run i uses stream (seed, i) for its genealogy and the marks lane for its
/// mutations; the target pmf uses the target lane.
ForestResult run_forest_experiment(const ForestConfig& config);

/// CSV `k,Q_emp,Q_target,stderr` preceded by a `# forest:` metadata comment;
/// stderr is the combined standard error.
std::string to_csv(const ForestResult& result);
std::string to_json(const ForestResult& result);

}  // namespace yulesim::forest
