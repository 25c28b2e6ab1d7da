#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "hybridburst/errors.hpp"
#include "hybridburst/pareto.hpp"
#include "hybridburst/random.hpp"

namespace hybridburst {

/// Burst layer: Poisson arrivals with heavy-tailed lifetimes.
struct SessionParams {
  double lambda;       // arrivals per tick
  ParetoDist lifetime;  // alpha_sess, mu_sess

  SessionParams(double lambda_, ParetoDist lifetime_) : lambda(lambda_), lifetime(lifetime_) {
    if (!(lambda > 0.0))
      throw invalid_parameter_error("SessionParams: lambda must be > 0, got " +
                                    std::to_string(lambda_));
  }
};

/// Trace generation mode.
///
/// Exact-stationary seeds the time-zero population from the M/G/inf
/// stationary law (Poisson count, equilibrium residual lifetimes) so every
/// tick is stationary with no warm-up.  Warm-up generates arrivals from
/// -discard_ticks onward and keeps only sessions overlapping [0, horizon),
/// mirroring a discard-and-retain protocol.
struct GenMode {
  enum class Kind { exact_stationary, warmup };
  Kind kind = Kind::exact_stationary;
  double discard_ticks = 0.0;       // warmup only
  bool truncate_durations = false;  // floor durations to whole ticks

  static GenMode exact() { return {}; }
  static GenMode with_warmup(double discard, bool truncate = false) {
    return {Kind::warmup, discard, truncate};
  }
};

struct Session {
  double start;
  double duration;
};

/// Sessions overlapping [0, horizon), sorted by start time.
struct SessionSet {
  std::vector<Session> sessions;
  double horizon = 0.0;
  GenMode mode;
  std::uint64_t seed = 0;

  void write_csv(std::ostream& os) const {
    os << "start,duration\n";
    os.precision(17);
    for (const auto& s : sessions) os << s.start << ',' << s.duration << '\n';
  }

  static SessionSet read_csv(std::istream& is, double horizon) {
    SessionSet set;
    set.horizon = horizon;
    std::string line;
    if (!std::getline(is, line) || line.rfind("start,duration", 0) != 0)
      throw io_error("SessionSet: missing start,duration header");
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      const auto comma = line.find(',');
      if (comma == std::string::npos) throw io_error("SessionSet: malformed row: " + line);
      set.sessions.push_back(
          {std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
    }
    return set;
  }
};

/// Generate the session list for [0, horizon).
///
/// max_expected_live guards against accidental parameter choices whose
/// stationary population lambda * E[V] would not fit in memory.
inline SessionSet generate_sessions(const SessionParams& params, double horizon, GenMode mode,
                                    std::uint64_t seed, double max_expected_live = 5e7) {
  if (!(horizon >= 0.0))
    throw invalid_parameter_error("generate_sessions: horizon must be >= 0");
  const double expected_live = params.lambda * params.lifetime.mean();
  if (expected_live > max_expected_live)
    throw memory_budget_error("generate_sessions: expected live sessions " +
                              std::to_string(expected_live) + " exceeds budget " +
                              std::to_string(max_expected_live));

  SessionSet set;
  set.horizon = horizon;
  set.mode = mode;
  set.seed = seed;
  RandomStream rng(seed);
  const auto maybe_trunc = [&](double d) {
    return mode.truncate_durations ? std::floor(d) : d;
  };

  if (mode.kind == GenMode::Kind::exact_stationary) {
    const std::uint64_t n0 = rng.poisson(expected_live);
    set.sessions.reserve(n0 + static_cast<std::size_t>(params.lambda * horizon * 1.1) + 16);
    for (std::uint64_t i = 0; i < n0; ++i) {
      const double residual = maybe_trunc(equilibrium_sample(params.lifetime, rng));
      if (residual > 0.0) set.sessions.push_back({0.0, residual});
    }
    double t = rng.exponential(1.0 / params.lambda);
    while (t < horizon) {
      const double d = maybe_trunc(sample(params.lifetime, rng));
      if (d > 0.0) set.sessions.push_back({t, d});
      t += rng.exponential(1.0 / params.lambda);
    }
  } else {
    double t = -mode.discard_ticks + rng.exponential(1.0 / params.lambda);
    while (t < horizon) {
      const double d = maybe_trunc(sample(params.lifetime, rng));
      if (d > 0.0 && t + d > 0.0) set.sessions.push_back({t, d});
      t += rng.exponential(1.0 / params.lambda);
    }
  }
  return set;
}

/// Busy-server series B(k) = #{ sessions with start <= k < start + duration },
/// k = 0..n_ticks-1, via an event sweep.
inline std::vector<std::int64_t> busy_servers(const SessionSet& set, std::size_t n_ticks) {
  if (static_cast<double>(n_ticks) > set.horizon)
    throw invalid_parameter_error("busy_servers: n_ticks exceeds session horizon");
  std::vector<std::int64_t> diff(n_ticks + 1, 0);
  for (const auto& s : set.sessions) {
    const double lo_t = std::ceil(s.start);
    const double hi_t = std::ceil(s.start + s.duration);
    const auto lo = static_cast<std::size_t>(std::max(lo_t, 0.0));
    const auto hi = static_cast<std::size_t>(
        std::min(hi_t, static_cast<double>(n_ticks)));
    if (lo < hi) {
      ++diff[lo];
      --diff[hi];
    }
  }
  std::vector<std::int64_t> b(n_ticks);
  std::int64_t acc = 0;
  for (std::size_t k = 0; k < n_ticks; ++k) {
    acc += diff[k];
    b[k] = acc;
  }
  return b;
}

}  // namespace hybridburst
