#include "yulesim/tail_mc.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "yulesim/cmj.hpp"
#include "yulesim/parallel.hpp"

namespace yulesim::tail {
namespace {

// Integral over one constant-N segment; preconditions checked by callers.
inline double segment_integral_unchecked(double level, double theta, double t0,
                                         double t1) noexcept {
  if (theta == 0.0) return (t1 - t0) / level;
  // (1/theta) ln(xi(t0) / xi(t1)) with xi(t1) = level - theta t1.
  return std::log1p(theta * (t1 - t0) / (level - theta * t1)) / theta;
}

void validate_checkpoints(std::span<const std::uint64_t> ns) {
  if (ns.empty()) throw DomainError("at least one n is required");
  if (ns.front() == 0) throw DomainError("representation estimator needs n >= 1");
  for (std::size_t i = 1; i < ns.size(); ++i) {
    if (ns[i] <= ns[i - 1]) throw DomainError("n values must be strictly increasing");
  }
}

void validate_replicates(const McConfig& config) {
  if (config.replicates < 2) throw DomainError("at least 2 replicates are required");
}

void validate_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw DomainError("tilt lambda must be positive, got " + std::to_string(lambda));
  }
}

struct CurveAccumulator {
  std::vector<MomentAccumulator> points;

  void merge(const CurveAccumulator& other) {
    if (points.empty()) points.resize(other.points.size());
    for (std::size_t i = 0; i < other.points.size(); ++i) points[i].merge(other.points[i]);
  }
};

// One replicate of the (possibly tilted) representation estimator.
// `on_checkpoint(j, log_likelihood_ratio, integral)` is called at every
// requested arrival count ns[j] reached before absorption; the return value
// is the number of checkpoints reached.
template <class OnCheckpoint>
inline std::size_t run_replicate(double theta, double inv_lambda,
                                 std::span<const std::uint64_t> ns, Stream& stream,
                                 OnCheckpoint&& on_checkpoint) {
  const std::uint64_t n_max = ns.back();
  double t = 0.0;
  double integral = 0.0;
  std::size_t next = 0;
  for (std::uint64_t k = 0; k < n_max; ++k) {
    const double level = static_cast<double>(k + 1);
    const double t1 = t + stream.exponential() * inv_lambda;
    if (theta > 0.0 && level / theta <= t1) return next;  // absorbed at level / theta
    integral += segment_integral_unchecked(level, theta, t, t1);
    t = t1;
    if (k + 1 == ns[next]) {
      on_checkpoint(next, k + 1, t, integral);
      ++next;
    }
  }
  return next;
}

TailCurve run_representation(const ModelParams& params, std::span<const std::uint64_t> ns,
                             double lambda, EstimatorKind kind, const McConfig& config) {
  validate_checkpoints(ns);
  validate_replicates(config);
  validate_lambda(lambda);
  const auto started = std::chrono::steady_clock::now();

  const double theta = params.theta();
  const double rho = params.rho();
  const double inv_lambda = 1.0 / lambda;
  const double log_lambda = std::log(lambda);
  const bool tilted = lambda != 1.0;

  auto block = [&](std::uint64_t begin, std::uint64_t end) {
    CurveAccumulator acc;
    acc.points.resize(ns.size());
    for (std::uint64_t r = begin; r < end; ++r) {
      Stream stream = make_stream(config.seed, r);
      const std::size_t reached = run_replicate(
          theta, inv_lambda, ns, stream,
          [&](std::size_t j, std::uint64_t n, double t, double integral) {
            double log_weight = -rho * integral;
            if (tilted) log_weight += (lambda - 1.0) * t - static_cast<double>(n) * log_lambda;
            acc.points[j].add(std::exp(log_weight));
          });
      for (std::size_t j = reached; j < ns.size(); ++j) acc.points[j].add(0.0);
    }
    return acc;
  };
  const auto total = reduce_blocks<CurveAccumulator>(config.replicates, config.threads, block);

  TailCurve curve{params};
  curve.estimator = kind;
  curve.lambda = lambda;
  curve.seed = config.seed;
  curve.shared_paths = ns.size() > 1;
  curve.points.reserve(ns.size());
  for (std::size_t j = 0; j < ns.size(); ++j) {
    const auto& m = total.points[j];
    curve.points.push_back({ns[j], m.mean(), m.stderr_of_mean(), m.count()});
  }
  curve.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return curve;
}

}  // namespace

double segment_integral(std::uint64_t k, double theta, double t0, double t1) {
  if (!(t0 >= 0.0) || !(t1 >= t0)) {
    throw DomainError("segment requires 0 <= t0 <= t1");
  }
  const double level = static_cast<double>(k) + 1.0;
  if (!(level - theta * t0 > 0.0) || !(level - theta * t1 > 0.0)) {
    throw AbsorptionError("integrand k + 1 - theta t is not positive on [" + std::to_string(t0) +
                          ", " + std::to_string(t1) + "]; split the path at the absorption time");
  }
  return segment_integral_unchecked(level, theta, t0, t1);
}

double PoissonDriftPath::integral_to_arrival(std::size_t m) const {
  if (m > arrival_times.size()) throw DomainError("path has fewer arrivals than requested");
  double integral = 0.0;
  double t = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    integral += segment_integral(k, theta, t, arrival_times[k]);
    t = arrival_times[k];
  }
  return integral;
}

PoissonDriftPath simulate_drift_path(double theta, std::uint64_t n, double lambda,
                                     Stream& stream) {
  validate_lambda(lambda);
  PoissonDriftPath path;
  path.theta = theta;
  path.lambda = lambda;
  path.arrival_times.reserve(static_cast<std::size_t>(n));
  double t = 0.0;
  for (std::uint64_t k = 0; k < n; ++k) {
    const double level = static_cast<double>(k + 1);
    const double t1 = t + stream.exponential() / lambda;
    if (theta > 0.0 && level / theta <= t1) {
      path.absorbed_at = level / theta;
      break;
    }
    path.arrival_times.push_back(t1);
    t = t1;
  }
  return path;
}

double path_contribution(const PoissonDriftPath& path, double rho, std::size_t m) {
  if (m == 0) return 1.0;
  if (m > path.arrival_times.size()) {
    if (path.absorbed_at) return 0.0;
    throw DomainError("path was not simulated to the requested arrival");
  }
  const double t = path.arrival_times[m - 1];
  double log_weight = -rho * path.integral_to_arrival(m);
  if (path.lambda != 1.0) {
    log_weight += (path.lambda - 1.0) * t - static_cast<double>(m) * std::log(path.lambda);
  }
  return std::exp(log_weight);
}

std::string_view to_string(EstimatorKind kind) noexcept {
  switch (kind) {
    case EstimatorKind::kDirectSampling:
      return "direct_sampling";
    case EstimatorKind::kRepresentation:
      return "representation";
    case EstimatorKind::kRepresentationTilted:
      return "representation_tilted";
  }
  return "unknown";
}

EstimatorKind estimator_from_string(std::string_view name) {
  if (name == "direct_sampling" || name == "direct") return EstimatorKind::kDirectSampling;
  if (name == "representation") return EstimatorKind::kRepresentation;
  if (name == "representation_tilted" || name == "tilted") {
    return EstimatorKind::kRepresentationTilted;
  }
  throw InputError("unknown estimator '" + std::string(name) + "'");
}

const TailPoint* TailCurve::find(std::uint64_t n) const noexcept {
  const auto it = std::lower_bound(points.begin(), points.end(), n,
                                   [](const TailPoint& p, std::uint64_t v) { return p.n < v; });
  return it != points.end() && it->n == n ? &*it : nullptr;
}

double default_tilt(double theta) noexcept { return theta > 1.0 ? theta : 1.0; }

Estimate estimate_survival_representation(const ModelParams& params, std::uint64_t n,
                                          const McConfig& config) {
  const std::uint64_t ns[] = {n};
  const auto curve = run_representation(params, ns, 1.0, EstimatorKind::kRepresentation, config);
  const auto& p = curve.points.front();
  return {p.estimate, p.std_error, p.replicates};
}

Estimate estimate_survival_tilted(const ModelParams& params, std::uint64_t n, double lambda,
                                  const McConfig& config) {
  const std::uint64_t ns[] = {n};
  const auto curve =
      run_representation(params, ns, lambda, EstimatorKind::kRepresentationTilted, config);
  const auto& p = curve.points.front();
  return {p.estimate, p.std_error, p.replicates};
}

TailCurve representation_curve(const ModelParams& params, std::span<const std::uint64_t> ns,
                               const McConfig& config) {
  return run_representation(params, ns, 1.0, EstimatorKind::kRepresentation, config);
}

TailCurve tilted_curve(const ModelParams& params, std::span<const std::uint64_t> ns, double lambda,
                       const McConfig& config) {
  return run_representation(params, ns, lambda, EstimatorKind::kRepresentationTilted, config);
}

TailCurve estimate_survival_direct(const ModelParams& params, std::uint64_t n_max,
                                   const McConfig& config) {
  validate_replicates(config);
  const auto started = std::chrono::steady_clock::now();
  const std::uint64_t cap = n_max + 1;

  struct Histogram {
    std::vector<std::uint64_t> counts;  // counts[m] = #{min(X, cap) = m}
    void merge(const Histogram& other) {
      if (counts.empty()) counts.resize(other.counts.size());
      for (std::size_t i = 0; i < other.counts.size(); ++i) counts[i] += other.counts[i];
    }
  };
  auto block = [&](std::uint64_t begin, std::uint64_t end) {
    Histogram h;
    h.counts.assign(static_cast<std::size_t>(cap) + 1, 0);
    for (std::uint64_t r = begin; r < end; ++r) {
      Stream stream = make_stream(config.seed, r);
      ++h.counts[static_cast<std::size_t>(cmj::sample_X_capped(params, stream, cap))];
    }
    return h;
  };
  const auto total = reduce_blocks<Histogram>(config.replicates, config.threads, block);

  TailCurve curve{params};
  curve.estimator = EstimatorKind::kDirectSampling;
  curve.seed = config.seed;
  curve.shared_paths = true;
  const double reps = static_cast<double>(config.replicates);
  std::uint64_t above = config.replicates;  // #{X > n}
  for (std::uint64_t n = 0; n <= n_max; ++n) {
    above -= total.counts[static_cast<std::size_t>(n)];
    const double p = static_cast<double>(above) / reps;
    curve.points.push_back({n, p, std::sqrt(p * (1.0 - p) / (reps - 1.0)), config.replicates});
  }
  curve.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return curve;
}

std::vector<TailPoint> nonabsorption_curve(double theta, std::span<const std::uint64_t> ns,
                                           double lambda, const McConfig& config) {
  validate_checkpoints(ns);
  validate_replicates(config);
  validate_lambda(lambda);
  const double inv_lambda = 1.0 / lambda;
  const double log_lambda = std::log(lambda);

  auto block = [&](std::uint64_t begin, std::uint64_t end) {
    CurveAccumulator acc;
    acc.points.resize(ns.size());
    for (std::uint64_t r = begin; r < end; ++r) {
      Stream stream = make_stream(config.seed, r);
      const std::size_t reached = run_replicate(
          theta, inv_lambda, ns, stream, [&](std::size_t j, std::uint64_t n, double t, double) {
            acc.points[j].add(std::exp((lambda - 1.0) * t - static_cast<double>(n) * log_lambda));
          });
      for (std::size_t j = reached; j < ns.size(); ++j) acc.points[j].add(0.0);
    }
    return acc;
  };
  const auto total = reduce_blocks<CurveAccumulator>(config.replicates, config.threads, block);
  std::vector<TailPoint> out;
  for (std::size_t j = 0; j < ns.size(); ++j) {
    const auto& m = total.points[j];
    out.push_back({ns[j], m.mean(), m.stderr_of_mean(), m.count()});
  }
  return out;
}

std::vector<std::uint64_t> range_1_to(std::uint64_t n_max) {
  std::vector<std::uint64_t> ns(static_cast<std::size_t>(n_max));
  for (std::uint64_t i = 0; i < n_max; ++i) ns[static_cast<std::size_t>(i)] = i + 1;
  return ns;
}

}  // namespace yulesim::tail
