#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hybridburst/errors.hpp"
#include "hybridburst/onoff.hpp"
#include "hybridburst/pareto.hpp"
#include "hybridburst/sessions.hpp"

namespace hybridburst {

/// Parameter regions of (alpha_min, alpha_sess).
///
/// Only case 3 (fractional Brownian motion limit), case 4 (Brownian motion
/// limit) and their common boundary have implemented limit laws.  The two
/// remaining regions are reported under a single joint label; the published
/// geometry does not name them individually and this library does not
/// invent a split.
enum class LimitCase { case1_or_2, case3, case4, boundary34 };

inline const char* to_label(LimitCase c) {
  switch (c) {
    case LimitCase::case3: return "case3";
    case LimitCase::case4: return "case4";
    case LimitCase::boundary34: return "boundary34";
    default: return "case1/2";
  }
}

struct CaseClassification {
  LimitCase case_id = LimitCase::case1_or_2;
  double alpha_min = 0.0;
  double alpha_sess = 0.0;
  bool supported = false;
};

/// Classify the tail-index pair.
///
/// case3:      alpha_sess > 1 and 2 < alpha_min + alpha_sess < 3
/// case4:      alpha_sess < 2 and 3 < alpha_min + alpha_sess < 4
/// boundary34: alpha_min + alpha_sess = 3
inline CaseClassification classify(double alpha_min, double alpha_sess) {
  if (!(alpha_min > 1.0 && alpha_min < 2.0))
    throw invalid_parameter_error("classify: alpha_min must lie in (1,2), got " +
                                  std::to_string(alpha_min));
  if (!(alpha_sess > 0.0))
    throw invalid_parameter_error("classify: alpha_sess must be > 0, got " +
                                  std::to_string(alpha_sess));
  CaseClassification c{LimitCase::case1_or_2, alpha_min, alpha_sess, false};
  const double sum = alpha_min + alpha_sess;
  if (std::fabs(sum - 3.0) <= 1e-9) {
    c.case_id = LimitCase::boundary34;
    c.supported = true;
  } else if (alpha_sess > 1.0 && sum < 3.0) {
    c.case_id = LimitCase::case3;
    c.supported = true;
  } else if (alpha_sess < 2.0 && sum > 3.0) {
    c.case_id = LimitCase::case4;
    c.supported = true;
  }
  return c;
}

/// Limit variance scale of the pure on-off superposition:
/// 2 mu_max^2 / (mu_w^3 (alpha_min-1)(3-alpha_min)(2-alpha_min)).
///
/// Stated for alpha_1 != alpha_2; with equal indices the value is still
/// evaluated (mu_max resolving to the off mean) and callers should surface
/// OnOffParams::alpha_degenerate() alongside it.
inline double sigma_lim_sq(const OnOffParams& oo) {
  const double am = oo.alpha_min();
  if (!(am > 1.0 && am < 2.0))
    throw invalid_parameter_error("sigma_lim_sq: alpha_min must lie in (1,2)");
  return 2.0 * oo.mu_max() * oo.mu_max() /
         (std::pow(oo.mu_w(), 3.0) * (am - 1.0) * (3.0 - am) * (2.0 - am));
}

/// Quadrature result for c = int_0^inf r(x) HbarI(x) dx.
struct CConstant {
  double value = 0.0;
  double tail_correction = 0.0;  // analytic part beyond the solver horizon
};

namespace detail {

/// Trapezoid of fn_r(x) * fn_h(x) over the uniform grid [0, K dt].
inline double trapz_product(const std::function<double(double)>& fn_r,
                            const std::function<double(double)>& fn_h, double dt, std::size_t k) {
  double acc = 0.5 * (fn_r(0.0) * fn_h(0.0) +
                      fn_r(dt * static_cast<double>(k)) * fn_h(dt * static_cast<double>(k)));
  for (std::size_t i = 1; i < k; ++i) {
    const double x = dt * static_cast<double>(i);
    acc += fn_r(x) * fn_h(x);
  }
  return dt * acc;
}

}  // namespace detail

/// c = int_0^inf r(x) HbarI(x) dx for the case-4 Brownian limit.
///
/// Head by trapezoid on the solver grid; beyond the horizon the integrand is
/// replaced by its fitted power form c_r x^(1-alpha_min) times the closed-form
/// integrated tail and integrated analytically.  The tail correction is
/// returned so convergence is auditable; if it exceeds 10% of the head the
/// quadrature has not converged and an error is raised.
inline CConstant c_constant_from_table(const AutocovTable& table, const OnOffParams& oo,
                                       const ParetoDist& lifetime) {
  const double dt = table.dt;
  const std::size_t n = table.values.size();
  const double horizon = table.horizon();

  double acc = 0.5 * (table.values[0] * integrated_tail(lifetime, 0.0) +
                      table.values[n - 1] * integrated_tail(lifetime, horizon));
  for (std::size_t i = 1; i + 1 < n; ++i)
    acc += table.values[i] * integrated_tail(lifetime, dt * static_cast<double>(i));
  const double head = dt * acc;

  const RTailFit fit = fit_r_tail(oo, table);
  const double p = 2.0 - oo.alpha_min() - lifetime.alpha();  // integrand tail exponent
  if (p >= -1.0 - 1e-9)
    throw nonconvergence_error(
        "c_constant: integrand tail exponent " + std::to_string(p) +
        " is not integrable (alpha_min + alpha_sess must exceed 3)");
  if (horizon <= lifetime.x_m())
    throw nonconvergence_error("c_constant: horizon below lifetime support onset");
  const double coef =
      fit.c_r * std::pow(lifetime.x_m(), lifetime.alpha()) / (lifetime.alpha() - 1.0);
  const double tail = coef * std::pow(horizon, p + 1.0) / (-(p + 1.0));
  if (tail > 0.1 * head)
    throw nonconvergence_error("c_constant: tail correction " + std::to_string(tail) +
                               " exceeds 10% of head integral " + std::to_string(head));
  return {head + tail, tail};
}

inline CConstant c_constant(const OnOffParams& oo, const ParetoDist& lifetime, double dt,
                            double horizon) {
  return c_constant_from_table(solve_pi11(oo, dt, horizon), oo, lifetime);
}

/// Variance profile V(t) = 2 int_0^t int_0^y r(x) HbarI(x) dx dy of the
/// integrated incremental process, evaluated at the requested times.
///
/// Times beyond the solver horizon use the fitted power-law closure of the
/// integrand.
inline std::vector<double> variance_profile_from_table(const AutocovTable& table,
                                                       const OnOffParams& oo,
                                                       const ParetoDist& lifetime,
                                                       const std::vector<double>& t_grid) {
  const double dt = table.dt;
  const std::size_t n = table.values.size();
  const double horizon = table.horizon();

  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i)
    g[i] = table.values[i] * integrated_tail(lifetime, dt * static_cast<double>(i));
  std::vector<double> inner(n, 0.0);  // J(y) = int_0^y g
  for (std::size_t i = 1; i < n; ++i) inner[i] = inner[i - 1] + 0.5 * dt * (g[i - 1] + g[i]);
  std::vector<double> outer(n, 0.0);  // int_0^t J
  for (std::size_t i = 1; i < n; ++i)
    outer[i] = outer[i - 1] + 0.5 * dt * (inner[i - 1] + inner[i]);

  const auto eval_within = [&](double t) {
    const double pos = t / dt;
    const auto k = std::min(static_cast<std::size_t>(pos), n - 2);
    const double frac = pos - static_cast<double>(k);
    return 2.0 * (outer[k] * (1.0 - frac) + outer[k + 1] * frac);
  };

  std::optional<RTailFit> fit;
  std::vector<double> v;
  v.reserve(t_grid.size());
  for (const double t : t_grid) {
    if (!(t >= 0.0)) throw invalid_parameter_error("variance_profile: t must be >= 0");
    if (t <= horizon) {
      v.push_back(eval_within(t));
      continue;
    }
    // analytic continuation with g(x) ~ C x^p beyond the horizon
    if (!fit) fit = fit_r_tail(oo, table);
    const double p = 2.0 - oo.alpha_min() - lifetime.alpha();
    if (std::fabs(p + 1.0) < 1e-9 || std::fabs(p + 2.0) < 1e-9)
      throw nonconvergence_error("variance_profile: tail exponent at a removable pole");
    const double coef =
        fit->c_r * std::pow(lifetime.x_m(), lifetime.alpha()) / (lifetime.alpha() - 1.0);
    const double jx = inner[n - 1];
    const double x = horizon;
    const double j_int = jx * (t - x) +
                         coef / (p + 1.0) *
                             ((std::pow(t, p + 2.0) - std::pow(x, p + 2.0)) / (p + 2.0) -
                              std::pow(x, p + 1.0) * (t - x));
    v.push_back(2.0 * (outer[n - 1] + j_int));
  }
  return v;
}

inline std::vector<double> variance_profile(const OnOffParams& oo, const ParetoDist& lifetime,
                                            const std::vector<double>& t_grid, double dt,
                                            double horizon) {
  return variance_profile_from_table(solve_pi11(oo, dt, horizon), oo, lifetime, t_grid);
}

/// All closed-form limit quantities for a parameter set.
struct TheoryReport {
  double h_hybrid = 0.0;
  double h_isp = 0.0;
  double h_onoff = 0.0;
  double sigma_lim_sq = 0.0;
  bool sigma_lim_flagged = false;           // alpha_1 == alpha_2: outside Eq-scope
  std::optional<double> sigma_sq;           // case 3 only
  std::optional<CConstant> c;               // case 4 / boundary only, when convergent
  std::string c_note;                       // why c is absent, when it is
  CaseClassification classification;
};

struct TheoryOptions {
  bool compute_c = true;
  double c_dt = 0.0;        // 0: x_m/8 of the shorter on-off support
  double c_horizon = 4e4;   // solver horizon for the c quadrature
};

/// Evaluate every limit formula for the hybrid model.
///
/// case 3: H = (4 - alpha_min - alpha_sess)/2 with variance scale
///   sigma^2 = sigma_lim^2 (3-am)(2-am) / ((as-1)(3-am-as)(4-am-as));
/// case 4 and the boundary: H = 1/2 with variance constant 2c.
/// The single-layer references are H_isp = (3-alpha_sess)/2 and
/// H_onoff = (3-alpha_min)/2.
inline TheoryReport hurst_formulas(const OnOffParams& oo, const SessionParams& sess,
                                   const TheoryOptions& options = {}) {
  const double am = oo.alpha_min();
  const double as = sess.lifetime.alpha();
  TheoryReport rep;
  rep.classification = classify(am, as);
  if (!rep.classification.supported)
    throw unsupported_case_error("hurst_formulas: no implemented limit law for alpha_min = " +
                                 std::to_string(am) + ", alpha_sess = " + std::to_string(as));

  rep.h_isp = (3.0 - as) / 2.0;
  rep.h_onoff = (3.0 - am) / 2.0;
  rep.sigma_lim_sq = sigma_lim_sq(oo);
  rep.sigma_lim_flagged = oo.alpha_degenerate();

  if (rep.classification.case_id == LimitCase::case3) {
    rep.h_hybrid = (4.0 - am - as) / 2.0;
    rep.sigma_sq = rep.sigma_lim_sq * (3.0 - am) * (2.0 - am) /
                   ((as - 1.0) * (3.0 - am - as) * (4.0 - am - as));
  } else {
    rep.h_hybrid = 0.5;
    if (options.compute_c) {
      const double dt = options.c_dt > 0.0 ? options.c_dt : default_solver_dt(oo);
      try {
        rep.c = c_constant(oo, sess.lifetime, dt, options.c_horizon);
      } catch (const nonconvergence_error& e) {
        rep.c_note = e.what();
      }
    }
  }
  return rep;
}

inline nlohmann::json to_json(const TheoryReport& rep) {
  nlohmann::json j{{"h_hybrid", rep.h_hybrid},
                   {"h_isp", rep.h_isp},
                   {"h_onoff", rep.h_onoff},
                   {"sigma_lim_sq", rep.sigma_lim_sq},
                   {"sigma_lim_flagged", rep.sigma_lim_flagged},
                   {"case", to_label(rep.classification.case_id)},
                   {"alpha_min", rep.classification.alpha_min},
                   {"alpha_sess", rep.classification.alpha_sess},
                   {"supported", rep.classification.supported}};
  j["sigma_sq"] = rep.sigma_sq ? nlohmann::json(*rep.sigma_sq) : nlohmann::json(nullptr);
  if (rep.c) {
    j["c"] = rep.c->value;
    j["c_tail_correction"] = rep.c->tail_correction;
  } else {
    j["c"] = nullptr;
    if (!rep.c_note.empty()) j["c_note"] = rep.c_note;
  }
  return j;
}

/// V(t) profile CSV: columns t,V.
inline void write_profile_csv(std::ostream& os, const std::vector<double>& t_grid,
                              const std::vector<double>& v) {
  os << "t,V\n";
  os.precision(17);
  for (std::size_t i = 0; i < t_grid.size(); ++i) os << t_grid[i] << ',' << v[i] << '\n';
}

}  // namespace hybridburst
