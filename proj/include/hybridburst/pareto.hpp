#pragma once

#include <cmath>
#include <string>

#include "hybridburst/errors.hpp"
#include "hybridburst/random.hpp"

namespace hybridburst {

/// Pareto duration law with tail index `alpha` and scale (minimum value) `x_m`.
///
/// P(V > x) = (x_m/x)^alpha for x > x_m, 1 otherwise.  alpha > 1 is required
/// so the mean is finite; the interesting regime throughout is alpha in (1,2)
/// where the variance is infinite.  Slowly varying tail factors are treated
/// as constants absorbed into x_m^alpha.
class ParetoDist {
 public:
  ParetoDist(double alpha, double x_m) : alpha_(alpha), x_m_(x_m) {
    if (!(alpha > 1.0) || !std::isfinite(alpha))
      throw invalid_parameter_error("ParetoDist: alpha must be > 1, got " + std::to_string(alpha));
    if (!(x_m > 0.0) || !std::isfinite(x_m))
      throw invalid_parameter_error("ParetoDist: x_m must be > 0, got " + std::to_string(x_m));
    mean_ = x_m * alpha / (alpha - 1.0);
  }

  double alpha() const { return alpha_; }
  double x_m() const { return x_m_; }
  double mean() const { return mean_; }

 private:
  double alpha_;
  double x_m_;
  double mean_;
};

/// Build a Pareto law from its mean; x_m = mean*(alpha-1)/alpha.
inline ParetoDist pareto_from_mean(double mean, double alpha) {
  if (!(mean > 0.0))
    throw invalid_parameter_error("pareto_from_mean: mean must be > 0, got " + std::to_string(mean));
  if (!(alpha > 1.0))
    throw invalid_parameter_error("pareto_from_mean: alpha must be > 1, got " + std::to_string(alpha));
  return ParetoDist(alpha, mean * (alpha - 1.0) / alpha);
}

/// Survival function P(V > x).
inline double tail(const ParetoDist& d, double x) {
  if (x <= d.x_m()) return 1.0;
  return std::pow(d.x_m() / x, d.alpha());
}

/// Density; zero below x_m, alpha*x_m^alpha*x^-(alpha+1) above.
inline double density(const ParetoDist& d, double x) {
  if (x < d.x_m()) return 0.0;
  return d.alpha() / d.x_m() * std::pow(d.x_m() / x, d.alpha() + 1.0);
}

/// Integrated tail int_x^inf P(V > z) dz.
///
/// Equals mean - x on [0, x_m] and x_m^alpha * x^(1-alpha)/(alpha-1) beyond,
/// continuous at x_m.
inline double integrated_tail(const ParetoDist& d, double x) {
  if (x <= d.x_m()) return d.mean() - x;
  return std::pow(d.x_m() / x, d.alpha()) * x / (d.alpha() - 1.0);
}

/// Inverse-CDF draw: x_m * U^(-1/alpha), U uniform on open (0,1).
inline double sample(const ParetoDist& d, RandomStream& rng) {
  return d.x_m() * std::pow(rng.uniform_open01(), -1.0 / d.alpha());
}

/// Quantile x_m * (1-q)^(-1/alpha).
inline double quantile(const ParetoDist& d, double q) {
  return d.x_m() * std::pow(1.0 - q, -1.0 / d.alpha());
}

/// CDF of the equilibrium (residual-life) distribution, density tail(z)/mean.
inline double equilibrium_cdf(const ParetoDist& d, double z) {
  if (z <= 0.0) return 0.0;
  if (z <= d.x_m()) return z / d.mean();
  return 1.0 - integrated_tail(d, z) / d.mean();
}

/// Draw from the equilibrium (residual-life) distribution by CDF inversion.
///
/// The equilibrium law is what a stationary observer sees as the remaining
/// duration of the interval in progress; it initializes both stationary
/// on-off paths and the time-zero session population.
inline double equilibrium_sample(const ParetoDist& d, RandomStream& rng) {
  const double u = rng.uniform_open01();
  const double p_below = d.x_m() / d.mean();  // = (alpha-1)/alpha
  if (u <= p_below) return u * d.mean();
  // invert 1 - x_m^a z^(1-a) / ((a-1) mean) = u
  return d.x_m() * std::pow(d.alpha() * (1.0 - u), -1.0 / (d.alpha() - 1.0));
}

}  // namespace hybridburst
