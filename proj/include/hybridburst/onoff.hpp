#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "hybridburst/detail/parallel.hpp"
#include "hybridburst/errors.hpp"
#include "hybridburst/pareto.hpp"
#include "hybridburst/random.hpp"

namespace hybridburst {

/// Parameters of the strictly alternating stationary on-off process W(t).
///
/// Caches the stationary on-probability mu_w = mu1/(mu1+mu2), the marginal
/// variance sigma_w_sq = mu_w (1 - mu_w), the smaller tail index alpha_min
/// and mu_max, the mean of the duration whose tail index is the larger one.
class OnOffParams {
 public:
  OnOffParams(ParetoDist on, ParetoDist off) : on_(on), off_(off) {
    mu_w_ = on_.mean() / (on_.mean() + off_.mean());
    sigma_w_sq_ = mu_w_ * (1.0 - mu_w_);
    alpha_min_ = std::min(on_.alpha(), off_.alpha());
    // (min,max) = (1,2) if alpha1 < alpha2, else (2,1).  Ties resolve to
    // the off law; alpha_degenerate() marks results outside the stated
    // scope of the limit-variance formula.
    mu_max_ = (on_.alpha() < off_.alpha()) ? off_.mean() : on_.mean();
  }

  static OnOffParams from_means(double alpha_on, double mean_on, double alpha_off,
                                double mean_off) {
    return OnOffParams(pareto_from_mean(mean_on, alpha_on), pareto_from_mean(mean_off, alpha_off));
  }

  const ParetoDist& on() const { return on_; }
  const ParetoDist& off() const { return off_; }
  double mu_w() const { return mu_w_; }
  double sigma_w_sq() const { return sigma_w_sq_; }
  double alpha_min() const { return alpha_min_; }
  double mu_max() const { return mu_max_; }
  bool alpha_degenerate() const { return on_.alpha() == off_.alpha(); }

 private:
  ParetoDist on_;
  ParetoDist off_;
  double mu_w_;
  double sigma_w_sq_;
  double alpha_min_;
  double mu_max_;
};

/// One sample path of the stationary on-off process, advanced lazily.
///
/// Construction draws the time-zero state Bernoulli(mu_w) and the residual
/// of the interval in progress from the equilibrium law of that state's
/// duration, so the path is exactly stationary from t = 0.  Single-owner
/// mutable; move between threads, do not share.
class OnOffPath {
 public:
  OnOffPath(const OnOffParams& params, std::uint64_t seed)
      : params_(&params), rng_(seed) {
    on_ = rng_.bernoulli(params.mu_w());
    next_switch_ = equilibrium_sample(on_ ? params.on() : params.off(), rng_);
  }

  bool on() const { return on_; }
  double next_switch() const { return next_switch_; }

  /// State W(t); t must be nondecreasing across calls.
  bool state_at(double t) {
    while (t >= next_switch_) step();
    return on_;
  }

  /// Flip to the next interval with a fresh full duration draw.
  void step() {
    on_ = !on_;
    next_switch_ += sample(on_ ? params_->on() : params_->off(), rng_);
  }

 private:
  const OnOffParams* params_;
  RandomStream rng_;
  bool on_;
  double next_switch_;
};

inline OnOffPath new_stationary_path(const OnOffParams& params, std::uint64_t seed) {
  return OnOffPath(params, seed);
}

/// Point-sample W at integer ticks 0..n_ticks-1, advancing the path.
inline std::vector<std::uint8_t> sample_at_ticks(OnOffPath& path, std::size_t n_ticks) {
  std::vector<std::uint8_t> out(n_ticks);
  for (std::size_t k = 0; k < n_ticks; ++k)
    out[k] = path.state_at(static_cast<double>(k)) ? 1 : 0;
  return out;
}

/// Autocovariance r and conditional on-probability pi11 on a uniform grid.
///
/// values[k] = sigma_w_sq - mu_w * (1 - pi11[k]) on every grid point.
struct AutocovTable {
  double dt = 0.0;
  std::vector<double> pi11;    // pi11[k] = P(W(k dt)=1 | W(0)=1)
  std::vector<double> values;  // r(k dt)

  double horizon() const { return dt * static_cast<double>(pi11.size() - 1); }

  /// r(t) by linear interpolation; t must lie within the grid.
  double r_at(double t) const {
    const double pos = t / dt;
    const auto k = static_cast<std::size_t>(pos);
    if (k + 1 >= values.size())
      return values.back();
    const double frac = pos - static_cast<double>(k);
    return values[k] * (1.0 - frac) + values[k + 1] * frac;
  }

  void write_csv(std::ostream& os) const {
    os << "t,pi11,r\n";
    os.precision(17);
    for (std::size_t k = 0; k < pi11.size(); ++k)
      os << dt * static_cast<double>(k) << ',' << pi11[k] << ',' << values[k] << '\n';
  }
};

namespace detail {

/// Volterra step solution of h = f + f*h on a uniform grid (trapezoid).
/// Requires f[0] == 0 (support bounded away from zero) so steps are explicit.
inline std::vector<double> renewal_density(const std::vector<double>& f, double dt) {
  const std::size_t n = f.size();
  std::vector<double> h(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 1; j < i; ++j) acc += f[i - j] * h[j];
    h[i] = f[i] + dt * acc;  // end weights vanish: f[0] = h[0] = 0
  }
  return h;
}

/// Generic pi11 solver over duration laws given as callables; the Pareto
/// front-end wraps this, and tests drive it with exponential laws where the
/// Markov closed form is known.
inline AutocovTable solve_pi11_grid(const std::function<double(double)>& density_on,
                                    const std::function<double(double)>& tail_on,
                                    const std::function<double(double)>& density_off,
                                    double mean_on, double mu_w, double sigma_w_sq, double dt,
                                    double horizon) {
  const auto n = static_cast<std::size_t>(std::ceil(horizon / dt)) + 1;
  std::vector<double> f1(n), f2(n), fbar1(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = dt * static_cast<double>(i);
    f1[i] = density_on(t);
    f2[i] = density_off(t);
    fbar1[i] = tail_on(t);
  }

  // interrenewal density f12 = f1 * f2 (trapezoid convolution)
  std::vector<double> f12(n, 0.0);
  detail::parallel_chunks(n, [&](unsigned, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      double acc = 0.5 * (f1[0] * f2[i] + f1[i] * f2[0]);
      for (std::size_t j = 1; j < i; ++j) acc += f1[j] * f2[i - j];
      f12[i] = dt * acc;
    }
  });

  const std::vector<double> h12 = renewal_density(f12, dt);

  // 1 - pi11(t) = (1/mu1) int_0^t Fbar1 + int_0^t Fbar1(t-u) h12(u) du
  std::vector<double> cum_fbar(n, 0.0);
  for (std::size_t i = 1; i < n; ++i)
    cum_fbar[i] = cum_fbar[i - 1] + 0.5 * dt * (fbar1[i - 1] + fbar1[i]);

  AutocovTable table;
  table.dt = dt;
  table.pi11.assign(n, 0.0);
  table.values.assign(n, 0.0);
  detail::parallel_chunks(n, [&](unsigned, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      double conv = 0.5 * (fbar1[i] * h12[0] + fbar1[0] * h12[i]);
      for (std::size_t j = 1; j < i; ++j) conv += fbar1[i - j] * h12[j];
      const double one_minus_pi = cum_fbar[i] / mean_on + dt * conv;
      table.pi11[i] = 1.0 - one_minus_pi;
      table.values[i] = sigma_w_sq - mu_w * one_minus_pi;
    }
  });
  table.pi11[0] = 1.0;
  table.values[0] = sigma_w_sq;
  return table;
}

}  // namespace detail

/// Solve the renewal equation for pi11(t) and fill r(t).
///
/// The interrenewal density of F1*F2 is built by discretized convolution,
/// the renewal density by Volterra iteration, and both integrals of the
/// pi11 identity by trapezoidal quadrature on the same grid.
inline AutocovTable solve_pi11(const OnOffParams& params, double dt, double horizon) {
  if (!(dt > 0.0) || !(horizon >= dt))
    throw invalid_parameter_error("solve_pi11: need dt > 0 and horizon >= dt");
  const double min_xm = std::min(params.on().x_m(), params.off().x_m());
  if (dt > min_xm / 4.0)
    throw grid_too_coarse_error("solve_pi11: dt " + std::to_string(dt) +
                                " exceeds min(x_m)/4 = " + std::to_string(min_xm / 4.0));
  const ParetoDist on = params.on();
  const ParetoDist off = params.off();
  return detail::solve_pi11_grid([on](double x) { return density(on, x); },
                                 [on](double x) { return tail(on, x); },
                                 [off](double x) { return density(off, x); }, on.mean(),
                                 params.mu_w(), params.sigma_w_sq(), dt, horizon);
}

/// Default grid step for the renewal solver: x_m/8 of the shorter-support law.
inline double default_solver_dt(const OnOffParams& params) {
  return std::min(params.on().x_m(), params.off().x_m()) / 8.0;
}

/// Power-law tail fit of r(u) ~ c_r * u^(1-alpha_min).
struct RTailFit {
  double exponent_theory = 0.0;  // 1 - alpha_min
  double exponent_fitted = 0.0;  // free log-log regression slope
  double c_r = 0.0;              // constant under the theoretical exponent
  bool alpha_degenerate = false;
};

/// Fit the tail of a solved autocovariance over the largest decade of its grid.
inline RTailFit fit_r_tail(const OnOffParams& params, const AutocovTable& table) {
  const std::size_t n = table.values.size();
  const double horizon = table.horizon();
  const double u_lo = horizon / 10.0;
  std::vector<double> lx, ly;
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < n; ++k) {
    const double u = table.dt * static_cast<double>(k);
    if (u < u_lo) continue;
    const double r = table.values[k];
    if (!(r > 0.0))
      throw fit_failure_error("fit_r_tail: r(u) not positive at u = " + std::to_string(u));
    if (r > prev * (1.0 + 1e-12))
      throw fit_failure_error("fit_r_tail: r(u) not monotone at u = " + std::to_string(u));
    prev = r;
    lx.push_back(std::log(u));
    ly.push_back(std::log(r));
  }
  if (lx.size() < 8) throw fit_failure_error("fit_r_tail: fit window too small");

  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
  }
  const double mx = sx / static_cast<double>(lx.size());
  const double my = sy / static_cast<double>(lx.size());
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }

  RTailFit fit;
  fit.exponent_theory = 1.0 - params.alpha_min();
  fit.exponent_fitted = sxy / sxx;
  fit.alpha_degenerate = params.alpha_degenerate();
  // constant under the theoretical exponent: geometric mean of r(u) u^(a-1)
  double lc = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) lc += ly[i] - fit.exponent_theory * lx[i];
  fit.c_r = std::exp(lc / static_cast<double>(lx.size()));
  return fit;
}

/// Convenience overload running its own solve.
inline RTailFit r_tail_asymptote(const OnOffParams& params, double dt, double horizon) {
  const AutocovTable table = solve_pi11(params, dt, horizon);
  return fit_r_tail(params, table);
}

}  // namespace hybridburst
