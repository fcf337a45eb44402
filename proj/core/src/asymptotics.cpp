#include "yulesim/asymptotics.hpp"

#include <cmath>
#include <string>

#include <nlohmann/json.hpp>

#include "yulesim/cmj.hpp"
#include "yulesim/distributions.hpp"
#include "yulesim/parallel.hpp"

namespace yulesim::asymptotics {
namespace {

struct FitInput {
  std::vector<double> x, y, w;
  std::vector<const tail::TailPoint*> points;
  bool weighted = false;
};

FitInput select_range(const tail::TailCurve& curve, std::uint64_t n_lo, std::uint64_t n_hi,
                      bool stretched) {
  if (!(n_lo < n_hi)) throw FitDomainError("fit range needs n_lo < n_hi");
  FitInput in;
  bool all_positive_se = true;
  for (const auto& p : curve.points) {
    if (p.n < n_lo || p.n > n_hi) continue;
    if (!(p.estimate > 0.0)) {
      throw FitDomainError("estimate at n=" + std::to_string(p.n) +
                           " is not positive; increase the replicate budget or shrink the range");
    }
    if (stretched && !(p.estimate < 1.0)) {
      throw FitDomainError("stretched fit needs estimates below 1, got 1 at n=" +
                           std::to_string(p.n));
    }
    all_positive_se = all_positive_se && p.std_error > 0.0;
    in.points.push_back(&p);
  }
  if (in.points.size() < 2) {
    throw FitDomainError("fit range [" + std::to_string(n_lo) + ", " + std::to_string(n_hi) +
                         "] contains fewer than 2 curve points");
  }
  in.weighted = all_positive_se;
  return in;
}

TailFit finish(TailKind kind, FitInput& in, std::uint64_t n_lo, std::uint64_t n_hi) {
  const LineFit line = weighted_line_fit(in.x, in.y, in.w);
  TailFit fit;
  fit.kind = kind;
  fit.fitted_exponent = line.slope;
  fit.intercept = line.intercept;
  fit.residual_rms = line.residual_rms;
  fit.n_lo = n_lo;
  fit.n_hi = n_hi;
  fit.weighted = in.weighted;
  fit.points_used = in.points.size();
  return fit;
}

// Delta-method variance of ln S.
double log_variance(const tail::TailPoint& p) {
  const double rel = p.std_error / p.estimate;
  return rel * rel;
}

}  // namespace

std::string_view to_string(TailKind kind) noexcept {
  switch (kind) {
    case TailKind::kPower:
      return "power";
    case TailKind::kExponential:
      return "exponential";
    case TailKind::kStretched:
      return "stretched";
  }
  return "unknown";
}

TailKind tail_kind_from_string(std::string_view name) {
  if (name == "power") return TailKind::kPower;
  if (name == "exponential") return TailKind::kExponential;
  if (name == "stretched") return TailKind::kStretched;
  throw InputError("unknown tail kind '" + std::string(name) + "'");
}

LineFit weighted_line_fit(std::span<const double> x, std::span<const double> y,
                          std::span<const double> w) {
  if (x.size() != y.size() || x.size() != w.size() || x.size() < 2) {
    throw FitDomainError("line fit needs at least two (x, y, w) triples of equal length");
  }
  double sw = 0, sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sw += w[i];
    sx += w[i] * x[i];
    sy += w[i] * y[i];
  }
  const double mx = sx / sw;
  const double my = sy / sw;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += w[i] * (x[i] - mx) * (x[i] - mx);
    sxy += w[i] * (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw FitDomainError("fit abscissae are all equal");
  LineFit fit{sxy / sxx, 0.0, 0.0};
  fit.intercept = my - fit.slope * mx;
  double ss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - fit.intercept - fit.slope * x[i];
    ss += r * r;
  }
  fit.residual_rms = std::sqrt(ss / static_cast<double>(x.size()));
  return fit;
}

TailFit fit_power_tail(const tail::TailCurve& curve, std::uint64_t n_lo, std::uint64_t n_hi) {
  FitInput in = select_range(curve, n_lo, n_hi, false);
  for (const auto* p : in.points) {
    in.x.push_back(std::log(static_cast<double>(p->n)));
    in.y.push_back(std::log(p->estimate));
    in.w.push_back(in.weighted ? 1.0 / log_variance(*p) : 1.0);
  }
  TailFit fit = finish(TailKind::kPower, in, n_lo, n_hi);
  if (curve.params.theta() < 1.0) {
    fit.theoretical_exponent = -distributions::power_tail_exponent(curve.params);
  }
  return fit;
}

TailFit fit_exponential_tail(const tail::TailCurve& curve, std::uint64_t n_lo,
                             std::uint64_t n_hi) {
  FitInput in = select_range(curve, n_lo, n_hi, false);
  for (const auto* p : in.points) {
    in.x.push_back(static_cast<double>(p->n));
    in.y.push_back(std::log(p->estimate));
    in.w.push_back(in.weighted ? 1.0 / log_variance(*p) : 1.0);
  }
  TailFit fit = finish(TailKind::kExponential, in, n_lo, n_hi);
  if (curve.params.theta() > 1.0) {
    fit.theoretical_exponent = -distributions::exponential_tail_rate(curve.params.theta());
  }
  return fit;
}

TailFit fit_stretched_tail(const tail::TailCurve& curve, std::uint64_t n_lo, std::uint64_t n_hi) {
  FitInput in = select_range(curve, n_lo, n_hi, true);
  const double rho = curve.params.rho();
  double num = 0.0, den = 0.0;
  for (const auto* p : in.points) {
    const double z = -std::log(p->estimate);  // -ln S > 0
    in.x.push_back(std::log(static_cast<double>(p->n)));
    in.y.push_back(std::log(z));
    in.w.push_back(in.weighted ? z * z / log_variance(*p) : 1.0);

    const double scale = std::cbrt(rho * rho * static_cast<double>(p->n));
    const double wz = in.weighted ? 1.0 / log_variance(*p) : 1.0;
    num += wz * scale * z;
    den += wz * scale * scale;
  }
  TailFit fit = finish(TailKind::kStretched, in, n_lo, n_hi);
  fit.theoretical_exponent = 1.0 / 3.0;
  fit.implied_prefactor = num / den;
  return fit;
}

TailFit fit_tail(TailKind kind, const tail::TailCurve& curve, std::uint64_t n_lo,
                 std::uint64_t n_hi) {
  switch (kind) {
    case TailKind::kPower:
      return fit_power_tail(curve, n_lo, n_hi);
    case TailKind::kExponential:
      return fit_exponential_tail(curve, n_lo, n_hi);
    case TailKind::kStretched:
      return fit_stretched_tail(curve, n_lo, n_hi);
  }
  throw InputError("unknown tail kind");
}

std::string to_json(const TailFit& fit) {
  nlohmann::json doc{{"kind", std::string(to_string(fit.kind))},
                     {"fitted_exponent", fit.fitted_exponent},
                     {"intercept", fit.intercept},
                     {"fit_range", {fit.n_lo, fit.n_hi}},
                     {"points_used", fit.points_used},
                     {"residual_rms", fit.residual_rms},
                     {"weighted", fit.weighted}};
  doc["theoretical_exponent"] =
      fit.theoretical_exponent ? nlohmann::json(*fit.theoretical_exponent) : nlohmann::json();
  if (fit.implied_prefactor) doc["implied_prefactor"] = *fit.implied_prefactor;
  return doc.dump(2);
}

GrowthReport malthusian_growth_check(double theta, std::span<const double> horizons,
                                     const tail::McConfig& config) {
  if (!(theta < 1.0)) throw DomainError("Malthusian growth needs theta < 1");
  if (horizons.empty()) throw DomainError("at least one horizon is required");
  for (std::size_t i = 0; i < horizons.size(); ++i) {
    if (!(horizons[i] >= 0.0) || (i > 0 && !(horizons[i] > horizons[i - 1]))) {
      throw DomainError("horizons must be nonnegative and increasing");
    }
  }
  if (config.replicates < 2) throw DomainError("at least 2 replicates are required");

  const std::size_t h = horizons.size();
  struct Samples {
    std::vector<double> normalized;  // replicate-major, h values per replicate
    std::vector<double> extinction_time;
  };
  auto parts = map_blocks(config.replicates, config.threads, [&](std::uint64_t b, std::uint64_t e) {
    Samples s;
    for (std::uint64_t r = b; r < e; ++r) {
      Stream stream = make_stream(config.seed, r);
      const auto path = cmj::simulate_path(theta, horizons.back(), stream);
      for (double t : horizons) {
        s.normalized.push_back(std::exp((theta - 1.0) * t) *
                               static_cast<double>(path.population_at(t)));
      }
      s.extinction_time.push_back(path.terminated_by == cmj::Termination::kExtinction
                                      ? path.terminal_time
                                      : std::numeric_limits<double>::infinity());
    }
    return s;
  });

  GrowthReport report;
  report.theta = theta;
  report.replicates = config.replicates;
  const double reps = static_cast<double>(config.replicates);
  for (std::size_t j = 0; j < h; ++j) {
    MomentAccumulator moments;
    std::uint64_t stalled = 0;
    for (const auto& part : parts) {
      for (std::size_t r = 0; r < part.extinction_time.size(); ++r) {
        moments.add(part.normalized[r * h + j]);
        if (part.extinction_time[r] <= horizons[j]) ++stalled;
      }
    }
    GrowthHorizon g;
    g.time = horizons[j];
    g.mean = moments.mean();
    g.mean_std_error = moments.stderr_of_mean();
    g.variance = moments.variance();
    // Standard error of the sample variance from the fourth central moment.
    double m4 = 0.0;
    for (const auto& part : parts) {
      for (std::size_t r = 0; r < part.extinction_time.size(); ++r) {
        const double d = part.normalized[r * h + j] - g.mean;
        m4 += d * d * d * d;
      }
    }
    m4 /= reps;
    g.variance_std_error = std::sqrt(std::max(m4 - g.variance * g.variance, 0.0) / reps);
    g.expected_mean = std::exp((theta - 1.0) * g.time) * distributions::mean_Y_at_t(theta, g.time);
    g.stalled_fraction = static_cast<double>(stalled) / reps;
    report.horizons.push_back(g);
  }
  return report;
}

std::string to_json(const GrowthReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& g : report.horizons) {
    rows.push_back({{"time", g.time},
                    {"mean", g.mean},
                    {"mean_stderr", g.mean_std_error},
                    {"variance", g.variance},
                    {"variance_stderr", g.variance_std_error},
                    {"expected_mean", g.expected_mean},
                    {"stalled_fraction", g.stalled_fraction}});
  }
  return nlohmann::json{{"theta", report.theta}, {"replicates", report.replicates}, {"horizons", rows}}
      .dump(2);
}

}  // namespace yulesim::asymptotics
