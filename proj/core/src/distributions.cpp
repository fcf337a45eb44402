#include "yulesim/distributions.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include <boost/math/distributions/poisson.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/beta.hpp>

namespace yulesim::distributions {
namespace {

void require_positive_rho(double rho) {
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw DomainError("rho must be a finite positive number, got " + std::to_string(rho));
  }
}

// e^{-mu} mu^k / k!
double poisson_mass(double mean, std::uint64_t k) {
  return boost::math::pdf(boost::math::poisson_distribution<double>(mean),
                          static_cast<double>(k));
}

}  // namespace

double yule_simon_pmf_theta0(double rho, std::uint64_t k) {
  require_positive_rho(rho);
  if (k == 0) throw DomainError("Yule-Simon support starts at k = 1");
  return rho * boost::math::beta(static_cast<double>(k), rho + 1.0);
}

double log_yule_simon_pmf_theta0(double rho, std::uint64_t k) {
  require_positive_rho(rho);
  if (k == 0) throw DomainError("Yule-Simon support starts at k = 1");
  const double kd = static_cast<double>(k);
  return std::log(rho) + std::lgamma(kd) + std::lgamma(rho + 1.0) - std::lgamma(kd + rho + 1.0);
}

double survival_theta0(double rho, std::uint64_t n) {
  require_positive_rho(rho);
  if (n == 0) return 1.0;
  return rho * boost::math::beta(static_cast<double>(n) + 1.0, rho);
}

double borel_total_progeny_pmf(double theta, std::uint64_t n) {
  if (!(theta > 0.0)) {
    throw DomainError("total progeny is almost surely infinite for theta <= 0");
  }
  if (n == 0) throw DomainError("total progeny is at least 1");
  // (1/n) * Poisson(n / theta) mass at n - 1.
  const double nd = static_cast<double>(n);
  return poisson_mass(nd / theta, n - 1) / nd;
}

double log_borel_total_progeny_pmf(double theta, std::uint64_t n) {
  if (!(theta > 0.0)) {
    throw DomainError("total progeny is almost surely infinite for theta <= 0");
  }
  if (n == 0) throw DomainError("total progeny is at least 1");
  const double nd = static_cast<double>(n);
  return -nd / theta + (nd - 1.0) * std::log(nd / theta) - std::lgamma(nd + 1.0);
}

double first_passage_pmf(const FirstPassageParams& fp, std::uint64_t n) {
  // x / (x + n) * Poisson((x + n) / b) mass at n.
  const double xn = fp.x() + static_cast<double>(n);
  return fp.x() / xn * poisson_mass(xn / fp.b(), n);
}

double log_first_passage_pmf(const FirstPassageParams& fp, std::uint64_t n) {
  const double nd = static_cast<double>(n);
  const double xn = fp.x() + nd;
  return -std::lgamma(nd + 1.0) - xn / fp.b() + std::log(fp.x()) + (nd - 1.0) * std::log(xn) -
         nd * std::log(fp.b());
}

double first_passage_log_rate(double b) {
  if (!(b > 1.0)) throw DomainError("first passage slope b must exceed 1");
  return 1.0 - 1.0 / b - std::log(b);
}

double mean_X(const ModelParams& params) noexcept {
  const double s = params.theta() + params.rho();
  return s > 1.0 ? s / (s - 1.0) : kInfinity;
}

double mean_Y_at_t(double theta, double t) {
  if (!(t >= 0.0)) throw DomainError("time must be nonnegative, got " + std::to_string(t));
  const double u = 1.0 - theta;
  if (std::abs(u) < 1e-12) return 1.0 + t;
  // (e^{ut} - theta) / u rewritten to stay accurate as u -> 0.
  return 1.0 + std::expm1(u * t) / u;
}

double extinction_probability(double theta) {
  if (!(theta > 0.0 && theta < 1.0)) {
    throw DomainError("extinction probability is nontrivial only for 0 < theta < 1, got " +
                      std::to_string(theta));
  }
  constexpr long kMaxIterations = 100'000'000;
  double q = 0.0;
  for (long i = 0; i < kMaxIterations; ++i) {
    const double next = std::exp((q - 1.0) / theta);
    if (std::abs(next - q) < 1e-12) return next;
    q = next;
  }
  throw NumericError("extinction fixed point did not converge for theta = " +
                     std::to_string(theta));
}

QuadratureReport prob_X_equals_one_report(const ModelParams& params, double quad_tol) {
  if (!(quad_tol > 0.0)) throw DomainError("quadrature tolerance must be positive");
  const double theta = params.theta();
  const double rho = params.rho();

  // The integrand is bounded by rho e^{-rho t}; beyond upper the tail mass
  // is below quad_tol / 10.
  const double upper = std::log(10.0 / quad_tol) / rho;
  auto integrand = [theta, rho](double t) {
    const double cumulative_rate = theta == 0.0 ? t : -std::expm1(-theta * t) / theta;
    return rho * std::exp(-rho * t - cumulative_rate);
  };

  constexpr unsigned kMaxDepth = 20;
  double error = 0.0;
  double l1 = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      integrand, 0.0, upper, kMaxDepth, quad_tol / 2.0, &error, &l1);
  const double total_error = error + quad_tol / 10.0;
  if (!std::isfinite(value) || total_error > quad_tol) {
    std::ostringstream msg;
    msg << "P(X=1) quadrature did not reach tolerance " << quad_tol << " (theta=" << theta
        << ", rho=" << rho << ", upper=" << upper << ", value=" << value
        << ", error estimate=" << error << ", depth limit=" << kMaxDepth << ")";
    throw NumericError(msg.str());
  }
  return {value, total_error, upper};
}

double prob_X_equals_one(const ModelParams& params, double quad_tol) {
  return prob_X_equals_one_report(params, quad_tol).value;
}

double power_tail_exponent(const ModelParams& params) {
  if (!(params.theta() < 1.0)) throw DomainError("power tail requires theta < 1");
  return params.rho() / (1.0 - params.theta());
}

double exponential_tail_rate(double theta) {
  if (!(theta > 1.0)) throw DomainError("exponential tail requires theta > 1");
  return std::log(theta) - 1.0 + 1.0 / theta;
}

}  // namespace yulesim::distributions
