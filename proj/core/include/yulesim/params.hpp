#pragma once

#include <cmath>
#include <string>

#include "yulesim/errors.hpp"

namespace yulesim {

/// Parameters (theta, rho) of a two-parameter Yule-Simon law.
///
/// theta is the rate at which an individual's fertility decays with age
/// (negative values mean fertility grows with age); rho is the rate of the
/// independent exponential observation time.
class ModelParams {
 public:
  ModelParams(double theta, double rho) : theta_(theta), rho_(rho) {
    if (!std::isfinite(theta)) {
      throw DomainError("theta must be finite, got " + std::to_string(theta));
    }
    if (!(rho > 0.0) || !std::isfinite(rho)) {
      throw DomainError("rho must be a finite positive number, got " + std::to_string(rho));
    }
  }

  double theta() const noexcept { return theta_; }
  double rho() const noexcept { return rho_; }

  /// True exactly when theta + rho > 1, i.e. when X has a finite mean.
  bool mean_finite() const noexcept { return theta_ + rho_ > 1.0; }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;

 private:
  double theta_;
  double rho_;
};

/// Drift slope b > 1 and boundary offset x > 0 of the first passage
/// nu(x) = inf{t : b t - N(t) > x} of a unit Poisson process.
class FirstPassageParams {
 public:
  FirstPassageParams(double b, double x) : b_(b), x_(x) {
    if (!(b > 1.0) || !std::isfinite(b)) {
      throw DomainError("first passage slope b must exceed 1, got " + std::to_string(b));
    }
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw DomainError("first passage offset x must be positive, got " + std::to_string(x));
    }
  }

  double b() const noexcept { return b_; }
  double x() const noexcept { return x_; }

 private:
  double b_;
  double x_;
};

}  // namespace yulesim
