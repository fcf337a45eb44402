#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "yulesim/tail_mc.hpp"

/// Tail-regime fits on estimated survival curves, and growth checks of
/// the normalized population e^{(theta-1)t} Y_theta(t).
namespace yulesim::asymptotics {

enum class TailKind { kPower, kExponential, kStretched };

std::string_view to_string(TailKind kind) noexcept;
TailKind tail_kind_from_string(std::string_view name);

/// Result of a straight-line fit in transformed coordinates:
///   power:       ln S(n)       = intercept + exponent * ln n
///   exponential: ln S(n)       = intercept + exponent * n
///   stretched:   ln(-ln S(n))  = intercept + exponent * ln n
struct TailFit {
  TailKind kind = TailKind::kPower;
  double fitted_exponent = 0.0;
  std::optional<double> theoretical_exponent;
  std::uint64_t n_lo = 0;
  std::uint64_t n_hi = 0;
  double residual_rms = 0.0;
  bool weighted = false;
  double intercept = 0.0;
  std::size_t points_used = 0;
  /// Stretched fits only: c in -ln S(n) ~ c (rho^2 n)^{1/3}, by least squares
  /// through the origin.
  std::optional<double> implied_prefactor;
};

/// Weighted least-squares line y = intercept + slope * x.
struct LineFit {
  double slope;
  double intercept;
  double residual_rms;
};
LineFit weighted_line_fit(std::span<const double> x, std::span<const double> y,
                          std::span<const double> w);

/// Fits use the curve points with n_lo <= n <= n_hi. Points are weighted by
/// the inverse delta-method variance of the transformed estimate when every
/// point in range has a positive standard error, and equally otherwise.
TailFit fit_power_tail(const tail::TailCurve& curve, std::uint64_t n_lo, std::uint64_t n_hi);
TailFit fit_exponential_tail(const tail::TailCurve& curve, std::uint64_t n_lo, std::uint64_t n_hi);
TailFit fit_stretched_tail(const tail::TailCurve& curve, std::uint64_t n_lo, std::uint64_t n_hi);
TailFit fit_tail(TailKind kind, const tail::TailCurve& curve, std::uint64_t n_lo,
                 std::uint64_t n_hi);

std::string to_json(const TailFit& fit);

struct GrowthHorizon {
  double time = 0.0;
  double mean = 0.0;  // of W(t) = e^{(theta-1)t} Y(t)
  double mean_std_error = 0.0;
  double variance = 0.0;
  double variance_std_error = 0.0;
  double expected_mean = 0.0;    // e^{(theta-1)t} E Y(t)
  double stalled_fraction = 0.0;  // runs in which no birth is possible after t
};

struct GrowthReport {
  double theta = 0.0;
  std::uint64_t replicates = 0;
  std::vector<GrowthHorizon> horizons;
};

/// Simulates `replicates` populations to the last horizon and summarizes
/// the normalized population at every horizon. Requires theta < 1 and
/// increasing nonnegative horizons.
GrowthReport malthusian_growth_check(double theta, std::span<const double> horizons,
                                     const tail::McConfig& config);

std::string to_json(const GrowthReport& report);

}  // namespace yulesim::asymptotics
