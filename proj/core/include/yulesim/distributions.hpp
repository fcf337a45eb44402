#pragma once

#include <cstdint>
#include <limits>

#include "yulesim/params.hpp"

/// Closed-form reference laws of the Yule-Simon family and of the
/// underlying branching process. Everything here is a pure function and
/// safe to call from any thread.
namespace yulesim::distributions {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// P(X = k) for the classical (theta = 0) Yule-Simon law: rho * B(k, rho + 1).
double yule_simon_pmf_theta0(double rho, std::uint64_t k);

/// log of yule_simon_pmf_theta0.
double log_yule_simon_pmf_theta0(double rho, std::uint64_t k);

/// P(X > n) for the classical law: rho * B(n + 1, rho). Equals 1 at n = 0.
double survival_theta0(double rho, std::uint64_t n);

/// P(Y_theta(inf) = n): Borel law with parameter 1/theta, theta > 0.
/// Sums to 1 over n when theta >= 1 and to the extinction probability
/// otherwise.
double borel_total_progeny_pmf(double theta, std::uint64_t n);
double log_borel_total_progeny_pmf(double theta, std::uint64_t n);

/// P(b nu(x) - x = n) for the first passage nu(x) = inf{t : b t - N(t) > x}.
double first_passage_pmf(const FirstPassageParams& fp, std::uint64_t n);
double log_first_passage_pmf(const FirstPassageParams& fp, std::uint64_t n);

/// Exponential decay rate 1 - 1/b - ln b of the first passage pmf.
double first_passage_log_rate(double b);

/// E(X) = (theta + rho) / (theta + rho - 1), or +infinity when theta + rho <= 1.
double mean_X(const ModelParams& params) noexcept;

/// E(Y_theta(t)). Continuous across theta = 1, where it equals 1 + t.
double mean_Y_at_t(double theta, double t);

/// Smallest root q in (0, 1) of q = exp((q - 1) / theta) for 0 < theta < 1:
/// the probability that Y_theta(inf) is finite.
double extinction_probability(double theta);

/// Diagnostics of the last quadrature; `abs_error` is the estimated
/// absolute error of the returned value.
struct QuadratureReport {
  double value = 0.0;
  double abs_error = 0.0;
  double upper_limit = 0.0;
};

/// P(X = 1) = rho * int_0^inf exp(-rho t) exp(-int_0^t exp(-theta s) ds) dt,
/// by adaptive Gauss-Kronrod quadrature to absolute tolerance `quad_tol`.
/// Throws NumericError (with diagnostics) when the tolerance is not met.
double prob_X_equals_one(const ModelParams& params, double quad_tol);
QuadratureReport prob_X_equals_one_report(const ModelParams& params, double quad_tol);

/// Exponent of the power tail, P(X > n) ~ C n^{-rho/(1-theta)}, theta < 1.
double power_tail_exponent(const ModelParams& params);

/// Exponential tail rate ln(theta) - 1 + 1/theta, theta > 1.
double exponential_tail_rate(double theta);

}  // namespace yulesim::distributions
