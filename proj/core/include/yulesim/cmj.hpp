#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "yulesim/params.hpp"
#include "yulesim/rng.hpp"

/// Exact event-driven simulation of the general branching process Y_theta
/// in which an individual of age a begets children at rate exp(-theta a).
namespace yulesim::cmj {

/// State of the aggregate simulator: the total birth rate (fertility)
/// is all that is needed to advance the population exactly.
struct FertilityState {
  double time = 0.0;
  double fertility = 1.0;
  std::uint64_t population = 1;
};

struct BirthStep {
  double delta_t;
  FertilityState state;
};

/// Advances to the next birth given a standard exponential draw.
///
/// Between births the fertility decays as F e^{-theta s}; the waiting time
/// solves int_0^dt F e^{-theta s} ds = draw. Returns nullopt when theta > 0
/// and the remaining integrated rate F / theta does not reach the draw,
/// meaning no further birth ever happens.
std::optional<BirthStep> step_next_birth(const FertilityState& state, double theta,
                                         double exp_draw) noexcept;

/// Exact draw of X_{theta,rho} = Y_theta(T_rho).
std::uint64_t sample_X(const ModelParams& params, Stream& stream);

/// min(X_{theta,rho}, cap): stops as soon as the population reaches `cap`.
/// Exact for every event {X > n} with n < cap.
std::uint64_t sample_X_capped(const ModelParams& params, Stream& stream, std::uint64_t cap);

inline constexpr std::uint64_t kDefaultProgenyCap = 100'000'000;

struct ProgenyOutcome {
  std::uint64_t population;  // final population, or the cap when exceeded
  bool exceeded_cap;
};

/// Y_theta(infinity) for theta > 0, or an exceeded-cap marker once the
/// population reaches `cap`.
ProgenyOutcome sample_total_progeny(double theta, Stream& stream,
                                    std::uint64_t cap = kDefaultProgenyCap);

enum class Termination {
  kHorizonReached,
  kExtinction,  // no further birth is possible
  kTargetPopulation,
};

struct PathEvent {
  double time;
  std::uint64_t population;
  double fertility;  // total birth rate just after the birth
};

/// Population trajectory of the aggregate simulator. Event i is the birth
/// that takes the population to i + 2; the ancestor at time 0 is implicit.
struct PathSample {
  std::vector<PathEvent> events;
  double terminal_time = 0.0;
  Termination terminated_by = Termination::kHorizonReached;

  std::uint64_t final_population() const noexcept {
    return events.empty() ? 1 : events.back().population;
  }
  /// Y(t) for 0 <= t <= terminal_time.
  std::uint64_t population_at(double t) const noexcept;
};

/// Trajectory up to time `horizon` (or until no birth is possible).
PathSample simulate_path(double theta, double horizon, Stream& stream);

/// Trajectory up to T_theta(n) = inf{t : Y(t) = n}, or until extinction.
PathSample simulate_until_population(double theta, std::uint64_t n, Stream& stream);

struct GenealogyRecord {
  std::uint64_t id;      // birth order, 1 for the ancestor
  std::uint64_t parent;  // 0 for the ancestor
  double birth_time;

  friend bool operator==(const GenealogyRecord&, const GenealogyRecord&) = default;
};

struct Genealogy {
  std::vector<GenealogyRecord> records;  // in birth order
  double terminal_time = 0.0;
  Termination terminated_by = Termination::kTargetPopulation;

  bool extinct_before_target() const noexcept {
    return terminated_by == Termination::kExtinction;
  }
};

/// Per-individual simulation up to T_theta(n). Every individual keeps its
/// own next-birth time in a priority queue, so parents are attributed
/// exactly. If theta > 0 the population may die out first; the result then
/// carries the partial genealogy and extinct_before_target() is true.
Genealogy simulate_genealogy(double theta, std::uint64_t n, Stream& stream);

/// Per-individual simulation on [0, horizon], stopped early when the
/// population reaches `cap`.
Genealogy simulate_genealogy_until(double theta, double horizon, Stream& stream,
                                   std::uint64_t cap = kDefaultProgenyCap);

}  // namespace yulesim::cmj
