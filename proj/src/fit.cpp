#include "collabnet/fit.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/exp_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "collabnet/binning.hpp"
#include "collabnet/csv.hpp"

namespace collabnet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Histogram restrict_to(const Histogram& histogram, std::uint64_t min_value) {
  Histogram out;
  for (const auto& p : histogram.points) {
    if (p.value >= min_value) {
      out.points.push_back(p);
      out.total += p.count;
    }
  }
  return out;
}

std::vector<DensityPoint> log_bin_from(const Histogram& histogram, double bin_ratio,
                                       std::uint64_t first) {
  std::vector<DensityPoint> out;
  if (histogram.points.empty()) return out;
  const auto bins = geometric_bins(histogram.points.back().value, {bin_ratio, first});
  std::vector<double> mass(bins.size(), 0.0);
  std::vector<std::uint64_t> count(bins.size(), 0);
  for (const auto& p : histogram.points) {
    const auto b = find_bin(bins, p.value);
    if (b < bins.size()) {
      mass[b] += p.probability;
      count[b] += p.count;
    }
  }
  for (std::size_t b = 0; b < bins.size(); ++b) {
    if (mass[b] <= 0.0) continue;
    const auto& bin = bins[b];
    out.push_back({std::sqrt(static_cast<double>(bin.lo) * static_cast<double>(bin.hi)),
                   mass[b] / static_cast<double>(bin.width()), bin.lo, bin.hi, mass[b], count[b]});
  }
  return out;
}

struct Line {
  double intercept = 0.0;
  double slope = 0.0;
  double intercept_se = 0.0;
  double slope_se = 0.0;
  double rss = 0.0;
};

// OLS of y on x; n >= 2.
Line ordinary_least_squares(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  Line line;
  line.slope = sxy / sxx;
  line.intercept = my - line.slope * mx;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - line.intercept - line.slope * x[i];
    line.rss += r * r;
  }
  if (x.size() > 2) {
    const double s2 = line.rss / (n - 2.0);
    line.slope_se = std::sqrt(s2 / sxx);
    line.intercept_se = std::sqrt(s2 * (1.0 / n + mx * mx / sxx));
  }
  return line;
}

void check_points(std::span<const DensityPoint> points, std::size_t needed) {
  if (points.size() < needed) {
    throw FitError("insufficient points: " + std::to_string(points.size()) + " nonempty log bins, need " +
                       std::to_string(needed),
                   FitResult{});
  }
}

}  // namespace

std::vector<DensityPoint> log_bin(const Histogram& histogram, double bin_ratio, std::uint64_t first) {
  return log_bin_from(restrict_to(histogram, first), bin_ratio, first);
}

namespace {

// Log of the model's mean density over one bin's integers, with its
// gradient in (log A, alpha, rate). Points without bin bounds are
// evaluated at x alone.
struct BinModel {
  double value = 0.0;
  Eigen::RowVector3d gradient;
};

bool has_bounds(const DensityPoint& p) { return p.lo > 0 && p.hi >= p.lo; }

BinModel bin_model(const DensityPoint& p, const Eigen::Vector3d& theta) {
  const double alpha = theta(1);
  const double rate = theta(2);
  const double log_x = std::log(p.x);
  BinModel m;
  if (!has_bounds(p)) {
    m.value = theta(0) - alpha * log_x - rate * p.x;
    m.gradient << 1.0, -log_x, -p.x;
    return m;
  }
  // Terms relative to the value at x keep the sums well scaled.
  double s = 0.0, s_log = 0.0, s_k = 0.0;
  for (std::uint64_t k = p.lo; k <= p.hi; ++k) {
    const double kd = static_cast<double>(k);
    const double log_k = std::log(kd);
    const double t = std::exp(-alpha * (log_k - log_x) - rate * (kd - p.x));
    s += t;
    s_log += t * log_k;
    s_k += t * kd;
  }
  const double width = static_cast<double>(p.hi - p.lo + 1);
  m.value = theta(0) - alpha * log_x - rate * p.x + std::log(s / width);
  m.gradient << 1.0, -s_log / s, -s_k / s;
  return m;
}

struct LogFit {
  Eigen::Vector3d theta;  // (log A, exponent, rate)
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  double rss = 0.0;       // unweighted, in log density
  int iterations = 0;
  bool converged = false;
};

// Levenberg-Marquardt on log density. Residuals are weighted by sample
// count, the inverse variance of a log count; points without counts get
// equal weights. With fit_rate false the rate stays at theta(2) = 0.
LogFit weighted_log_fit(std::span<const DensityPoint> points, Eigen::Vector3d theta, bool fit_rate,
                        const FitOptions& options) {
  const std::size_t n = points.size();
  const Eigen::Index params = fit_rate ? 3 : 2;
  const bool counted = std::all_of(points.begin(), points.end(), [](const DensityPoint& p) { return p.count > 0; });
  Eigen::VectorXd y(n), sqrt_w(n);
  for (std::size_t i = 0; i < n; ++i) {
    y(i) = std::log(points[i].density);
    sqrt_w(i) = counted ? std::sqrt(static_cast<double>(points[i].count)) : 1.0;
  }

  auto evaluate = [&](const Eigen::Vector3d& t, Eigen::VectorXd& r, Eigen::MatrixXd& jac) {
    r.resize(n);
    jac.resize(n, params);
    for (std::size_t i = 0; i < n; ++i) {
      const auto m = bin_model(points[i], t);
      r(i) = sqrt_w(i) * (y(i) - m.value);
      jac.row(static_cast<Eigen::Index>(i)) = sqrt_w(i) * m.gradient.head(params);
    }
    return r.squaredNorm();
  };

  // Best amplitude for the starting shape.
  {
    Eigen::VectorXd r;
    Eigen::MatrixXd jac;
    theta(0) = 0.0;
    evaluate(theta, r, jac);
    theta(0) = r.dot(sqrt_w) / sqrt_w.squaredNorm();
  }

  LogFit fit;
  Eigen::VectorXd r;
  Eigen::MatrixXd jac;
  double rss = evaluate(theta, r, jac);
  double mu = 1e-3;
  int iter = 0;
  for (; iter < options.max_iterations && !fit.converged; ++iter) {
    const Eigen::MatrixXd normal = jac.transpose() * jac;
    const Eigen::VectorXd gradient = jac.transpose() * r;
    Eigen::MatrixXd damped = normal;
    damped.diagonal() += mu * normal.diagonal();
    Eigen::Vector3d candidate = theta;
    candidate.head(params) += damped.ldlt().solve(gradient);
    candidate(2) = std::max(candidate(2), 0.0);
    const Eigen::Vector3d step = candidate - theta;

    fit.converged = true;
    for (int p = 0; p < 3; ++p) {
      if (std::abs(step(p)) > options.tolerance * (std::abs(theta(p)) + options.tolerance)) fit.converged = false;
    }
    Eigen::VectorXd r_new;
    Eigen::MatrixXd jac_new;
    const double rss_new = evaluate(candidate, r_new, jac_new);
    if (rss_new <= rss) {
      theta = candidate;
      r = std::move(r_new);
      jac = std::move(jac_new);
      rss = rss_new;
      mu = std::max(mu / 10.0, 1e-12);
    } else {
      mu *= 10.0;
      if (mu > 1e12) fit.converged = true;  // no descent direction left
    }
    if (!std::isfinite(rss)) {
      fit.converged = false;
      break;
    }
  }
  fit.theta = theta;
  fit.iterations = iter;
  for (std::size_t i = 0; i < n; ++i) fit.rss += (r(i) / sqrt_w(i)) * (r(i) / sqrt_w(i));
  if (fit.converged && static_cast<Eigen::Index>(n) > params) {
    const double s2 = rss / static_cast<double>(static_cast<Eigen::Index>(n) - params);
    fit.cov.topLeftCorner(params, params) = s2 * (jac.transpose() * jac).inverse();
  }
  return fit;
}

double se_of(const Eigen::Matrix3d& cov, int p) { return std::sqrt(std::max(cov(p, p), 0.0)); }

}  // namespace

FitResult fit_power_law(std::span<const DensityPoint> points) {
  check_points(points, 3);
  FitResult fit;
  fit.model = FitModel::PowerLaw;
  fit.range_min = points.front().lo;
  fit.points = points.size();
  const bool binned = std::all_of(points.begin(), points.end(),
                                  [](const DensityPoint& p) { return p.count > 0 && has_bounds(p); });
  std::vector<double> lx, ly;
  for (const auto& p : points) {
    lx.push_back(std::log(p.x));
    ly.push_back(std::log(p.density));
  }
  const Line line = ordinary_least_squares(lx, ly);
  if (!binned) {
    // Bare points: ordinary least squares on the representatives.
    fit.exponent = -line.slope;
    fit.exponent_se = line.slope_se;
    fit.amplitude = std::exp(line.intercept);
    fit.amplitude_se = fit.amplitude * line.intercept_se;
    fit.rss = line.rss;
    return fit;
  }
  const auto lf = weighted_log_fit(points, Eigen::Vector3d(line.intercept, -line.slope, 0.0), false, FitOptions{});
  fit.exponent = lf.theta(1);
  fit.amplitude = std::exp(lf.theta(0));
  fit.rss = lf.rss;
  fit.iterations = lf.iterations;
  if (!lf.converged) throw FitError("power law fit did not converge after " + std::to_string(lf.iterations) + " iterations", fit);
  fit.exponent_se = se_of(lf.cov, 1);
  fit.amplitude_se = fit.amplitude * se_of(lf.cov, 0);
  return fit;
}

FitResult fit_power_law(const Histogram& histogram, std::uint64_t min_value, const FitOptions& options) {
  const auto points = log_bin(histogram, options.bin_ratio, min_value);
  auto fit = fit_power_law(points);
  fit.range_min = min_value;
  return fit;
}

FitResult fit_truncated_power_law(std::span<const DensityPoint> points, const FitOptions& options) {
  check_points(points, 4);
  const std::size_t n = points.size();

  // alpha from a power law on the lower third of the range, beta from the
  // largest observed value.
  const std::size_t lower = std::max<std::size_t>(2, n / 3);
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < lower; ++i) {
    lx.push_back(std::log(points[i].x));
    ly.push_back(std::log(points[i].density));
  }
  const double largest = has_bounds(points.back()) ? static_cast<double>(points.back().hi) : points.back().x;
  const Eigen::Vector3d start(0.0, -ordinary_least_squares(lx, ly).slope, 1.0 / largest);
  const auto lf = weighted_log_fit(points, start, true, options);

  FitResult fit;
  fit.model = FitModel::TruncatedPowerLaw;
  fit.amplitude = std::exp(lf.theta(0));
  fit.exponent = lf.theta(1);
  fit.rate = lf.theta(2);
  fit.cutoff = fit.rate > 0.0 ? 1.0 / fit.rate : kInf;
  fit.rss = lf.rss;
  fit.points = n;
  fit.range_min = points.front().lo;
  fit.iterations = lf.iterations;
  if (!lf.converged) {
    throw FitError("truncated power law fit did not converge after " + std::to_string(lf.iterations) + " iterations",
                   fit);
  }
  fit.amplitude_se = fit.amplitude * se_of(lf.cov, 0);
  fit.exponent_se = se_of(lf.cov, 1);
  fit.rate_se = se_of(lf.cov, 2);
  fit.cutoff_se = fit.rate > 0.0 ? fit.rate_se / (fit.rate * fit.rate) : kInf;
  return fit;
}

FitResult fit_truncated_power_law(const Histogram& histogram, std::uint64_t min_value,
                                  const FitOptions& options) {
  const auto points = log_bin(histogram, options.bin_ratio, min_value);
  auto fit = fit_truncated_power_law(points, options);
  fit.range_min = min_value;
  return fit;
}

double model_bin_density(const FitResult& fit, std::uint64_t lo, std::uint64_t hi) {
  const double x = std::sqrt(static_cast<double>(lo) * static_cast<double>(hi));
  const double rate = fit.model == FitModel::PowerLaw ? 0.0 : fit.rate;
  DensityPoint p{x, 0.0, lo, hi, 0.0, 0};
  return std::exp(bin_model(p, Eigen::Vector3d(std::log(fit.amplitude), fit.exponent, rate)).value);
}

double model_log_density(const FitResult& fit, double x) {
  const double log_a = std::log(fit.amplitude);
  if (fit.model == FitModel::PowerLaw) return log_a - fit.exponent * std::log(x);
  return log_a - fit.exponent * std::log(x) - fit.rate * x;
}

// ---------------------------------------------------------------------------
// Maximum likelihood cross-check.
//
// The model k^-alpha exp(-rate (k - m)) on k >= m is an exponential family
// in (alpha, rate) with sufficient statistics (-log k, -(k - m)), so the
// log likelihood is concave and Newton's method applies directly.

namespace {

struct Moments {
  double log_z = 0.0;
  double mean_log = 0.0;   // E[log k]
  double mean_lin = 0.0;   // E[k - m]
  double var_log = 0.0;
  double var_lin = 0.0;
  double cov = 0.0;
};

Moments model_moments(double alpha, double rate, std::uint64_t m, bool need_linear) {
  // Direct summation, then the remaining tail as an integral from K + 1/2.
  const double md = static_cast<double>(m);
  const std::uint64_t span = rate > 0.0 ? static_cast<std::uint64_t>(std::min(60.0 / rate, 1e6)) : 1000000;
  const std::uint64_t last = m + span;
  const double log_m = std::log(md);
  double s0 = 0, s_l = 0, s_ll = 0, s_x = 0, s_xx = 0, s_lx = 0;
  for (std::uint64_t k = m; k <= last; ++k) {
    const double kd = static_cast<double>(k);
    const double l = std::log(kd);
    const double x = kd - md;
    const double w = std::exp(-alpha * (l - log_m) - rate * x);
    s0 += w;
    s_l += w * l;
    s_ll += w * l * l;
    if (need_linear) {
      s_x += w * x;
      s_xx += w * x * x;
      s_lx += w * l * x;
    }
  }
  const bool tail_matters = !(rate > 0.0 && 60.0 / rate < 1e6);
  if (tail_matters) {
    boost::math::quadrature::exp_sinh<double> integrator;
    const double from = static_cast<double>(last) + 0.5;
    auto weight = [&](double t) {
      const double kd = from + t;
      return std::exp(-alpha * (std::log(kd) - log_m) - rate * (kd - md));
    };
    auto integrate = [&](auto&& g) {
      return integrator.integrate([&](double t) { return weight(t) * g(from + t); }, 0.0, kInf);
    };
    s0 += integrate([](double) { return 1.0; });
    s_l += integrate([](double k) { return std::log(k); });
    s_ll += integrate([](double k) { return std::log(k) * std::log(k); });
    if (need_linear) {
      s_x += integrate([&](double k) { return k - md; });
      s_xx += integrate([&](double k) { return (k - md) * (k - md); });
      s_lx += integrate([&](double k) { return std::log(k) * (k - md); });
    }
  }
  Moments mo;
  mo.log_z = std::log(s0) - alpha * log_m;
  mo.mean_log = s_l / s0;
  mo.var_log = s_ll / s0 - mo.mean_log * mo.mean_log;
  if (need_linear) {
    mo.mean_lin = s_x / s0;
    mo.var_lin = s_xx / s0 - mo.mean_lin * mo.mean_lin;
    mo.cov = s_lx / s0 - mo.mean_log * mo.mean_lin;
  }
  return mo;
}

FitResult mle(const Histogram& histogram, std::uint64_t min_value, bool truncated) {
  const Histogram h = restrict_to(histogram, min_value);
  if (h.points.size() < (truncated ? 3u : 2u)) {
    throw FitError("insufficient points for maximum likelihood fit", FitResult{});
  }
  const double md = static_cast<double>(min_value);
  const double count = static_cast<double>(h.total);
  double mean_log = 0.0, mean_lin = 0.0;
  for (const auto& p : h.points) {
    mean_log += static_cast<double>(p.count) * std::log(static_cast<double>(p.value));
    mean_lin += static_cast<double>(p.count) * (static_cast<double>(p.value) - md);
  }
  mean_log /= count;
  mean_lin /= count;

  // Per-observation log likelihood.
  auto loglik = [&](double alpha, double rate) {
    const auto mo = model_moments(alpha, rate, min_value, false);
    return -alpha * mean_log - rate * mean_lin - mo.log_z;
  };

  const double rate_floor = truncated ? 1e-9 : 0.0;
  double alpha = 1.5;
  double rate = truncated ? 1.0 / (mean_lin + 1.0) : 0.0;
  if (!truncated) alpha = 1.0 + 1.0 / std::max(mean_log - std::log(md - 0.5), 1e-3);

  FitResult fit;
  fit.model = truncated ? FitModel::TruncatedPowerLaw : FitModel::PowerLaw;
  int iter = 0;
  bool converged = false;
  Moments mo;
  for (; iter < 200; ++iter) {
    mo = model_moments(alpha, rate, min_value, truncated);
    // Gradient and negative Hessian (Fisher information) per observation.
    const double g_alpha = -mean_log + mo.mean_log;
    const double g_rate = -mean_lin + mo.mean_lin;
    Eigen::Vector2d step;
    if (truncated) {
      Eigen::Matrix2d info;
      info << mo.var_log, mo.cov, mo.cov, mo.var_lin;
      step = info.ldlt().solve(Eigen::Vector2d(g_alpha, g_rate));
    } else {
      step = Eigen::Vector2d(g_alpha / mo.var_log, 0.0);
    }
    const double current = loglik(alpha, rate);
    double scale = 1.0;
    double next_alpha = alpha, next_rate = rate;
    for (int halving = 0; halving < 50; ++halving, scale *= 0.5) {
      next_alpha = alpha + scale * step(0);
      next_rate = std::max(rate + scale * step(1), rate_floor);
      if (next_alpha <= 0.0 || (next_rate == 0.0 && next_alpha <= 1.0)) continue;
      if (loglik(next_alpha, next_rate) >= current - 1e-15) break;
    }
    const bool small = std::abs(next_alpha - alpha) <= 1e-9 * (std::abs(alpha) + 1e-9) &&
                       std::abs(next_rate - rate) <= 1e-9 * (std::abs(rate) + 1e-9);
    alpha = next_alpha;
    rate = next_rate;
    if (small) {
      converged = true;
      break;
    }
  }
  fit.exponent = alpha;
  fit.rate = rate;
  fit.cutoff = rate > 0.0 ? 1.0 / rate : kInf;
  fit.iterations = iter;
  fit.range_min = min_value;
  fit.points = h.points.size();
  if (!converged) throw FitError("maximum likelihood fit did not converge", fit);

  mo = model_moments(alpha, rate, min_value, truncated);
  fit.amplitude = std::exp(-mo.log_z);  // normalized mass at k = m scale: P(k) = A k^-alpha e^{-rate k}
  fit.amplitude *= std::exp(rate * md);
  if (truncated) {
    Eigen::Matrix2d info;
    info << mo.var_log, mo.cov, mo.cov, mo.var_lin;
    const Eigen::Matrix2d cov = info.inverse() / count;
    fit.exponent_se = std::sqrt(std::max(cov(0, 0), 0.0));
    fit.rate_se = std::sqrt(std::max(cov(1, 1), 0.0));
    fit.cutoff_se = rate > 0.0 ? fit.rate_se / (rate * rate) : kInf;
  } else {
    fit.exponent_se = 1.0 / std::sqrt(count * mo.var_log);
  }
  return fit;
}

}  // namespace

FitResult fit_truncated_power_law_mle(const Histogram& histogram, std::uint64_t min_value) {
  return mle(histogram, min_value, true);
}

FitResult fit_power_law_mle(const Histogram& histogram, std::uint64_t min_value) {
  return mle(histogram, min_value, false);
}

// ---------------------------------------------------------------------------
// Sampling.
//
// Proposal: K = floor(Y), Y continuous Pareto on [k_min, inf) with exponent
// p > 1, so q(k) is proportional to I(k) = integral of y^-p over [k, k+1].
// Target t(k) = k^-alpha exp(-rate (k - k_min)). The ratio t/I splits into
// k^-p / I(k), which decreases in k, times k^(p - alpha) exp(-rate (k - k_min)),
// which is unimodal; their maxima bound the acceptance ratio.

namespace {

double log_interval_mass(double p, double k) {
  // log of (k^(1-p) - (k+1)^(1-p)) / (p - 1), computed without cancellation.
  return (1.0 - p) * std::log(k) + std::log(-std::expm1((1.0 - p) * std::log1p(1.0 / k))) - std::log(p - 1.0);
}

// Values past this are rejected; it only truncates pure power laws, at a
// point far beyond any representable mass.
constexpr double kMaxDraw = 9.0e18;

}  // namespace

TruncatedPowerLawSampler::TruncatedPowerLawSampler(double alpha, double beta, std::uint64_t k_min)
    : alpha_(alpha), rate_(0.0), k_min_(k_min) {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be > 0");
  if (k_min < 1) throw std::invalid_argument("k_min must be >= 1");
  rate_ = std::isinf(beta) ? 0.0 : 1.0 / beta;
  if (rate_ == 0.0 && alpha <= 1.0) throw std::invalid_argument("a pure power law needs alpha > 1");
  proposal_exponent_ = alpha > 1.0 ? alpha : alpha + 1.0;

  const double km = static_cast<double>(k_min);
  const double p = proposal_exponent_;
  double shape_max = 0.0;  // max of (p - alpha) log k - rate (k - k_min), relative to k_min
  if (p > alpha) {
    const double mode = (p - alpha) / rate_;
    auto shape = [&](double k) { return (p - alpha) * std::log(k) - rate_ * (k - km); };
    shape_max = shape(km);
    for (double k : {std::floor(mode), std::ceil(mode)}) {
      if (k >= km) shape_max = std::max(shape_max, shape(k));
    }
  } else {
    shape_max = (p - alpha) * std::log(km);
  }
  log_bound_ = (-p * std::log(km) - log_interval_mass(p, km)) + shape_max;
}

double TruncatedPowerLawSampler::log_accept(std::uint64_t k) const {
  const double kd = static_cast<double>(k);
  const double log_target = -alpha_ * std::log(kd) - rate_ * (kd - static_cast<double>(k_min_));
  return log_target - log_interval_mass(proposal_exponent_, kd) - log_bound_;
}

std::uint64_t TruncatedPowerLawSampler::operator()(Rng& rng) const {
  const double km = static_cast<double>(k_min_);
  while (true) {
    const double u = 1.0 - uniform01(rng);  // (0, 1]
    const double y = km * std::pow(u, -1.0 / (proposal_exponent_ - 1.0));
    if (!(y < kMaxDraw)) continue;
    const auto k = static_cast<std::uint64_t>(std::floor(y));
    const double v = 1.0 - uniform01(rng);
    if (std::log(v) <= log_accept(k)) return k;
  }
}

std::vector<std::uint64_t> sample_truncated_power_law(double alpha, double beta, std::uint64_t k_min,
                                                      std::size_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample size must be >= 1");
  TruncatedPowerLawSampler sampler(alpha, beta, k_min);
  Rng rng(seed);
  std::vector<std::uint64_t> out(n);
  for (auto& k : out) k = sampler(rng);
  return out;
}

std::vector<std::uint64_t> sample_power_law(double lambda, std::uint64_t w_min, std::size_t n,
                                            std::uint64_t seed) {
  return sample_truncated_power_law(lambda, kInf, w_min, n, seed);
}

std::string fit_to_json(const FitResult& fit) {
  using nlohmann::ordered_json;
  // Rounded to 6 significant digits like every other float the pipeline writes.
  auto finite_or_null = [](double v) -> ordered_json {
    if (std::isfinite(v)) return std::stod(format_double(v));
    return nullptr;
  };
  ordered_json j;
  ordered_json params, stderr_;
  if (fit.model == FitModel::TruncatedPowerLaw) {
    j["model"] = "truncated_power_law";
    params["alpha"] = finite_or_null(fit.exponent);
    params["beta"] = finite_or_null(fit.cutoff);
    params["inv_beta"] = finite_or_null(fit.rate);
    params["A"] = finite_or_null(fit.amplitude);
    stderr_["alpha"] = finite_or_null(fit.exponent_se);
    stderr_["beta"] = finite_or_null(fit.cutoff_se);
    stderr_["inv_beta"] = finite_or_null(fit.rate_se);
    stderr_["A"] = finite_or_null(fit.amplitude_se);
  } else {
    j["model"] = "power_law";
    params["lambda"] = finite_or_null(fit.exponent);
    params["B"] = finite_or_null(fit.amplitude);
    stderr_["lambda"] = finite_or_null(fit.exponent_se);
    stderr_["B"] = finite_or_null(fit.amplitude_se);
  }
  j["params"] = params;
  j["stderr"] = stderr_;
  j["rss"] = finite_or_null(fit.rss);
  j["range"] = {{"min", fit.range_min}, {"points", fit.points}};
  return j.dump(2);
}

}  // namespace collabnet
