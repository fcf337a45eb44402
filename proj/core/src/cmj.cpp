#include "yulesim/cmj.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

#include "yulesim/errors.hpp"

namespace yulesim::cmj {
namespace {

// Time until the next point of a Poisson process whose intensity is
// rate * e^{-theta s}, given a standard exponential draw. Returns a negative
// value when theta > 0 and no further point exists.
inline double waiting_time(double rate, double theta, double draw) noexcept {
  if (theta == 0.0) return draw / rate;
  const double z = theta * draw / rate;
  if (z >= 1.0) return -1.0;
  return -std::log1p(-z) / theta;
}

struct PendingBirth {
  double time;
  std::uint64_t parent;
  double rate_after;  // parent's own birth rate just after this birth

  bool operator>(const PendingBirth& other) const noexcept {
    return time > other.time || (time == other.time && parent > other.parent);
  }
};

using BirthQueue =
    std::priority_queue<PendingBirth, std::vector<PendingBirth>, std::greater<PendingBirth>>;

// Schedules the next child of individual `id`, whose own birth rate at time
// `now` is `rate`.
void schedule_next(BirthQueue& queue, std::uint64_t id, double now, double rate, double theta,
                   Stream& stream) {
  const double draw = stream.exponential();
  const double wait = waiting_time(rate, theta, draw);
  if (wait < 0.0) return;
  queue.push({now + wait, id, rate - theta * draw});
}

template <class StopAt>
Genealogy run_genealogy(double theta, Stream& stream, std::uint64_t target, StopAt past_horizon) {
  Genealogy out;
  out.records.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(target, 1u << 20)));
  out.records.push_back({1, 0, 0.0});

  BirthQueue queue;
  schedule_next(queue, 1, 0.0, 1.0, theta, stream);
  while (out.records.size() < target) {
    if (queue.empty()) {
      out.terminated_by = Termination::kExtinction;
      out.terminal_time = out.records.back().birth_time;
      return out;
    }
    const PendingBirth next = queue.top();
    if (past_horizon(next.time)) {
      out.terminated_by = Termination::kHorizonReached;
      return out;
    }
    queue.pop();
    const std::uint64_t child = out.records.size() + 1;
    out.records.push_back({child, next.parent, next.time});

    schedule_next(queue, next.parent, next.time, next.rate_after, theta, stream);
    schedule_next(queue, child, next.time, 1.0, theta, stream);
  }
  out.terminated_by = Termination::kTargetPopulation;
  out.terminal_time = out.records.back().birth_time;
  return out;
}

}  // namespace

std::optional<BirthStep> step_next_birth(const FertilityState& state, double theta,
                                         double exp_draw) noexcept {
  const double dt = waiting_time(state.fertility, theta, exp_draw);
  if (dt < 0.0) return std::nullopt;
  // F e^{-theta dt} = F - theta * draw exactly, by the choice of dt.
  return BirthStep{dt, {state.time + dt, state.fertility - theta * exp_draw + 1.0,
                        state.population + 1}};
}

std::uint64_t sample_X_capped(const ModelParams& params, Stream& stream, std::uint64_t cap) {
  const double theta = params.theta();
  double remaining = stream.exponential() / params.rho();
  double fertility = 1.0;
  std::uint64_t population = 1;
  while (population < cap) {
    const double draw = stream.exponential();
    const double dt = waiting_time(fertility, theta, draw);
    if (dt < 0.0 || dt > remaining) break;
    remaining -= dt;
    fertility += 1.0 - theta * draw;
    ++population;
  }
  return population;
}

std::uint64_t sample_X(const ModelParams& params, Stream& stream) {
  return sample_X_capped(params, stream, std::numeric_limits<std::uint64_t>::max());
}

ProgenyOutcome sample_total_progeny(double theta, Stream& stream, std::uint64_t cap) {
  if (!(theta > 0.0)) {
    throw DomainError("total progeny is almost surely infinite for theta <= 0, got theta = " +
                      std::to_string(theta));
  }
  if (cap == 0) throw DomainError("progeny cap must be positive");
  double fertility = 1.0;
  std::uint64_t population = 1;
  while (population < cap) {
    const double draw = stream.exponential();
    if (theta * draw >= fertility) return {population, false};
    fertility += 1.0 - theta * draw;
    ++population;
  }
  return {population, true};
}

std::uint64_t PathSample::population_at(double t) const noexcept {
  const auto it = std::upper_bound(events.begin(), events.end(), t,
                                   [](double value, const PathEvent& e) { return value < e.time; });
  return it == events.begin() ? 1 : std::prev(it)->population;
}

namespace {

template <class Stop>
PathSample run_path(double theta, Stream& stream, double horizon, Stop reached_target) {
  PathSample out;
  FertilityState state;
  while (!reached_target(state.population)) {
    const auto step = step_next_birth(state, theta, stream.exponential());
    if (!step) {
      out.terminated_by = Termination::kExtinction;
      out.terminal_time = state.time;
      return out;
    }
    if (step->state.time > horizon) {
      out.terminated_by = Termination::kHorizonReached;
      out.terminal_time = horizon;
      return out;
    }
    state = step->state;
    out.events.push_back({state.time, state.population, state.fertility});
  }
  out.terminated_by = Termination::kTargetPopulation;
  out.terminal_time = state.time;
  return out;
}

}  // namespace

PathSample simulate_path(double theta, double horizon, Stream& stream) {
  if (!(horizon >= 0.0)) throw DomainError("horizon must be nonnegative");
  return run_path(theta, stream, horizon, [](std::uint64_t) { return false; });
}

PathSample simulate_until_population(double theta, std::uint64_t n, Stream& stream) {
  if (n == 0) throw DomainError("target population must be positive");
  return run_path(theta, stream, std::numeric_limits<double>::infinity(),
                  [n](std::uint64_t population) { return population >= n; });
}

Genealogy simulate_genealogy(double theta, std::uint64_t n, Stream& stream) {
  if (n == 0) throw DomainError("target population must be positive");
  return run_genealogy(theta, stream, n, [](double) { return false; });
}

Genealogy simulate_genealogy_until(double theta, double horizon, Stream& stream,
                                   std::uint64_t cap) {
  if (!(horizon >= 0.0)) throw DomainError("horizon must be nonnegative");
  if (cap == 0) throw DomainError("population cap must be positive");
  Genealogy out = run_genealogy(theta, stream, cap, [horizon](double t) { return t > horizon; });
  if (out.terminated_by != Termination::kExtinction) {
    out.terminal_time = out.terminated_by == Termination::kHorizonReached
                            ? horizon
                            : out.records.back().birth_time;
  }
  return out;
}

}  // namespace yulesim::cmj
