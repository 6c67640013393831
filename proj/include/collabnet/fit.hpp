#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "collabnet/error.hpp"
#include "collabnet/metrics.hpp"
#include "collabnet/random.hpp"

namespace collabnet {

struct DensityPoint {
  double x = 0.0;        // geometric mean of the bin's integer bounds
  double density = 0.0;  // bin mass / bin width
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  double mass = 0.0;
  std::uint64_t count = 0;  // samples in the bin, 0 when unknown
};

// Log-binned density of a histogram over positive integers, bins starting
// at {first}; smaller values are dropped. Empty bins are omitted.
std::vector<DensityPoint> log_bin(const Histogram& histogram, double bin_ratio = 2.0, std::uint64_t first = 1);

enum class FitModel { TruncatedPowerLaw, PowerLaw };

/// Fitted heavy-tail model.
///
/// TruncatedPowerLaw: P(k) = A k^-alpha exp(-k / beta); `exponent` is alpha,
/// `cutoff` is beta (infinite when the fitted rate 1/beta is 0).
/// PowerLaw: P(w) = B w^-lambda; `exponent` is lambda, no cutoff.
struct FitResult {
  FitModel model = FitModel::PowerLaw;
  double exponent = 0.0;
  double exponent_se = 0.0;
  double cutoff = std::numeric_limits<double>::infinity();
  double cutoff_se = 0.0;
  double rate = 0.0;  // 1 / cutoff
  double rate_se = 0.0;
  double amplitude = 0.0;
  double amplitude_se = 0.0;
  double rss = 0.0;  // residual sum of squares of log density
  std::uint64_t range_min = 1;
  std::size_t points = 0;
  int iterations = 0;
};

class FitError : public NumericalError {
 public:
  FitError(const std::string& what, FitResult last) : NumericalError(what), last_(last) {}
  // Last iterate for non-convergence; default-constructed otherwise.
  const FitResult& last_iterate() const { return last_; }

 private:
  FitResult last_;
};

struct FitOptions {
  double bin_ratio = 2.0;
  int max_iterations = 200;
  double tolerance = 1e-8;  // relative parameter change
};

// Least squares of log density over log bins at values >= min_value;
// needs 3 nonempty bins. Binned points with counts are fitted like the
// truncated model below with the cutoff removed; bare points (no bounds or
// counts) get ordinary least squares on log x, lambda = -slope.
FitResult fit_power_law(const Histogram& histogram, std::uint64_t min_value = 1,
                        const FitOptions& options = {});
FitResult fit_power_law(std::span<const DensityPoint> points);

/// Levenberg-Marquardt fit of A k^-alpha exp(-k / beta) to log-binned log
/// density at k >= min_value. Needs 4 nonempty bins. Each bin's density is
/// compared with the model's mean over the integers in that bin, and
/// residuals are weighted by the bin's sample count. Internally the
/// cutoff is carried as the rate 1/beta >= 0, so a pure power law converges
/// to rate 0 instead of running beta off to infinity. Standard errors come
/// from the Jacobian at the optimum.
FitResult fit_truncated_power_law(const Histogram& histogram, std::uint64_t min_value = 1,
                                  const FitOptions& options = {});
FitResult fit_truncated_power_law(std::span<const DensityPoint> points, const FitOptions& options = {});

// Discrete maximum likelihood cross-checks on the raw counts at values >=
// min_value. Not used for the headline fits.
FitResult fit_truncated_power_law_mle(const Histogram& histogram, std::uint64_t min_value = 1);
FitResult fit_power_law_mle(const Histogram& histogram, std::uint64_t min_value = 1);

// Model log density at x.
double model_log_density(const FitResult& fit, double x);
// Model density averaged over the integers lo..hi, the quantity the fits
// compare with a log bin.
double model_bin_density(const FitResult& fit, std::uint64_t lo, std::uint64_t hi);

/// Exact sampler for P(k) proportional to k^-alpha exp(-k / beta), k >= k_min.
/// Rejection from a discretized Pareto proposal; beta may be infinite when
/// alpha > 1 (pure power law).
class TruncatedPowerLawSampler {
 public:
  TruncatedPowerLawSampler(double alpha, double beta, std::uint64_t k_min = 1);
  std::uint64_t operator()(Rng& rng) const;

 private:
  double alpha_;
  double rate_;
  std::uint64_t k_min_;
  double proposal_exponent_;
  double log_bound_;
  double log_accept(std::uint64_t k) const;
};

// n i.i.d. draws; identical for identical arguments. Throws
// std::invalid_argument for alpha <= 0, beta <= 0, k_min < 1 or n < 1.
std::vector<std::uint64_t> sample_truncated_power_law(double alpha, double beta, std::uint64_t k_min,
                                                      std::size_t n, std::uint64_t seed);
std::vector<std::uint64_t> sample_power_law(double lambda, std::uint64_t w_min, std::size_t n,
                                            std::uint64_t seed);

// {"model", "params", "stderr", "rss", "range"} as a JSON document.
std::string fit_to_json(const FitResult& fit);

}  // namespace collabnet
