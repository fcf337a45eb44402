#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "yulesim/errors.hpp"
#include "yulesim/params.hpp"
#include "yulesim/rng.hpp"

/// Monte Carlo estimation of P(X_{theta,rho} > n).
///
/// Besides plain sampling of X, the estimators here use the identity
///
///   P(X > n) = E[ exp(-rho * int_0^{g(n)} dt / (N(t) + 1 - theta t)) ; g(n) < z ]
///
/// where N is a unit Poisson process, g(n) its n-th arrival and z the first
/// time N(t) + 1 - theta t hits zero. Between arrivals the integrand is the
/// reciprocal of a line, so each path is integrated exactly and absorption
/// is detected analytically.
namespace yulesim::tail {

/// The integrand of the representation is not positive on a segment; the
/// caller must stop the path at the absorption time first.
class AbsorptionError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Replicate budget and RNG key. Replicate i always uses stream (seed, i),
/// so results do not depend on `threads`.
struct McConfig {
  std::uint64_t replicates = 0;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

/// Exact value of int_{t0}^{t1} dt / (k + 1 - theta t).
double segment_integral(std::uint64_t k, double theta, double t0, double t1);

/// Arrivals of a Poisson process of rate `lambda` run until its n-th
/// arrival or until N(t) + 1 - theta t reaches zero, whichever is first.
struct PoissonDriftPath {
  std::vector<double> arrival_times;
  double theta = 0.0;
  double lambda = 1.0;
  std::optional<double> absorbed_at;

  /// rho * int_0^{g(m)} dt / (N(t) + 1 - theta t) for m <= arrival count.
  double integral_to_arrival(std::size_t m) const;
};

PoissonDriftPath simulate_drift_path(double theta, std::uint64_t n, double lambda, Stream& stream);

/// Per-replicate contribution of `path` to the estimate of P(X > m):
/// likelihood ratio times exp(-rho * integral), or 0 if absorbed first.
double path_contribution(const PoissonDriftPath& path, double rho, std::size_t m);

enum class EstimatorKind { kDirectSampling, kRepresentation, kRepresentationTilted };

std::string_view to_string(EstimatorKind kind) noexcept;
EstimatorKind estimator_from_string(std::string_view name);

struct TailPoint {
  std::uint64_t n;
  double estimate;
  double std_error;
  std::uint64_t replicates;
};

/// Estimated survival curve. When `shared_paths` is set, every point was
/// computed from the same replicate paths, so points are positively
/// correlated across n (each point is still unbiased).
struct TailCurve {
  explicit TailCurve(const ModelParams& p) : params(p) {}

  ModelParams params;
  EstimatorKind estimator = EstimatorKind::kRepresentation;
  double lambda = 1.0;
  std::uint64_t seed = 0;
  bool shared_paths = false;
  double wall_seconds = 0.0;
  std::vector<TailPoint> points;

  const TailPoint* find(std::uint64_t n) const noexcept;
};

struct Estimate {
  double estimate;
  double std_error;
  std::uint64_t replicates;
};

/// Tilt used when none is given: lambda = theta for theta > 1, else 1.
double default_tilt(double theta) noexcept;

Estimate estimate_survival_representation(const ModelParams& params, std::uint64_t n,
                                          const McConfig& config);

/// Representation estimator with arrivals drawn at rate `lambda` and
/// reweighted by the likelihood ratio lambda^{-n} e^{(lambda - 1) g(n)}.
Estimate estimate_survival_tilted(const ModelParams& params, std::uint64_t n, double lambda,
                                  const McConfig& config);

/// Representation estimator at every n in `ns` (strictly increasing, >= 1)
/// from shared paths of max(ns) arrivals.
TailCurve representation_curve(const ModelParams& params, std::span<const std::uint64_t> ns,
                               const McConfig& config);
TailCurve tilted_curve(const ModelParams& params, std::span<const std::uint64_t> ns, double lambda,
                       const McConfig& config);

/// Empirical survival of `replicates` exact draws of X at n = 0..n_max, with
/// binomial standard errors.
TailCurve estimate_survival_direct(const ModelParams& params, std::uint64_t n_max,
                                   const McConfig& config);

/// P(g(n) < z): the probability that the drift path survives its first n
/// arrivals, estimated with tilt `lambda` at every n in `ns`.
std::vector<TailPoint> nonabsorption_curve(double theta, std::span<const std::uint64_t> ns,
                                           double lambda, const McConfig& config);

/// 1, 2, ..., n_max.
std::vector<std::uint64_t> range_1_to(std::uint64_t n_max);

/// CSV with header `n,estimate,stderr,replicates`, preceded by one `#`
/// comment line carrying the curve metadata. Numbers use 17 significant
/// digits so the file round-trips exactly.
std::string to_csv(const TailCurve& curve);
TailCurve tail_curve_from_csv(std::string_view text);

/// JSON document with params, estimator tag, lambda, seed, timing and points.
std::string to_json(const TailCurve& curve);
TailCurve tail_curve_from_json(std::string_view text);

}  // namespace yulesim::tail
