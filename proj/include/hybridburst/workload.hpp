#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "hybridburst/detail/parallel.hpp"
#include "hybridburst/errors.hpp"
#include "hybridburst/onoff.hpp"
#include "hybridburst/sessions.hpp"

namespace hybridburst {

inline constexpr std::uint32_t kTraceMagic = 0x48594252;  // "HYBR"
inline constexpr std::uint32_t kTraceVersion = 1;

// Layer tags for splitting the master seed; changing one layer's stream
// must leave the other layer's draws untouched.
inline constexpr std::uint64_t kSeedLayerSessions = 0x5345u;
inline constexpr std::uint64_t kSeedLayerOnOff = 0x4f4eu;

struct TraceMeta {
  std::uint64_t seed = 0;
  double lambda = 0.0;
  double alpha_sess = 0.0, mu_sess = 0.0;
  double alpha_on = 0.0, mu_on = 0.0, alpha_off = 0.0, mu_off = 0.0;
  GenMode mode;
};

/// Aligned per-tick series of the hybrid model.
///
/// a(k) counts alive-and-on sources, b(k) counts alive sessions, and
/// c(k) = mu_w b(k) - a(k) is the random-centered workload increment.
struct Trace {
  std::vector<std::int64_t> a;
  std::vector<std::int64_t> b;
  std::vector<double> c;
  TraceMeta meta;

  std::size_t n_ticks() const { return c.size(); }

  void write_csv(std::ostream& os) const {
    os << "tick,A,B,C\n";
    os.precision(17);
    for (std::size_t k = 0; k < c.size(); ++k)
      os << k << ',' << a[k] << ',' << b[k] << ',' << c[k] << '\n';
  }

  static Trace read_csv(std::istream& is) {
    Trace t;
    std::string line;
    if (!std::getline(is, line) || line.rfind("tick,A,B,C", 0) != 0)
      throw io_error("Trace: missing tick,A,B,C header");
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      std::size_t p1 = line.find(','), p2 = line.find(',', p1 + 1), p3 = line.find(',', p2 + 1);
      if (p3 == std::string::npos) throw io_error("Trace: malformed row: " + line);
      t.a.push_back(std::stoll(line.substr(p1 + 1, p2 - p1 - 1)));
      t.b.push_back(std::stoll(line.substr(p2 + 1, p3 - p2 - 1)));
      t.c.push_back(std::stod(line.substr(p3 + 1)));
    }
    return t;
  }

  /// Raw little-endian binary: u32 magic, u32 version, u64 n_ticks,
  /// then n_ticks x (i64 A, i64 B, f64 C).
  void write_binary(std::ostream& os) const {
    const auto put = [&os](const void* p, std::size_t n) {
      os.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
    };
    const std::uint32_t magic = kTraceMagic, version = kTraceVersion;
    const std::uint64_t n = c.size();
    put(&magic, 4);
    put(&version, 4);
    put(&n, 8);
    for (std::size_t k = 0; k < c.size(); ++k) {
      put(&a[k], 8);
      put(&b[k], 8);
      put(&c[k], 8);
    }
  }

  static Trace read_binary(std::istream& is) {
    const auto get = [&is](void* p, std::size_t n) {
      is.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
      if (!is) throw io_error("Trace: truncated binary input");
    };
    std::uint32_t magic = 0, version = 0;
    std::uint64_t n = 0;
    get(&magic, 4);
    if (magic != kTraceMagic) throw io_error("Trace: bad magic");
    get(&version, 4);
    if (version != kTraceVersion)
      throw io_error("Trace: unsupported version " + std::to_string(version));
    get(&n, 8);
    Trace t;
    t.a.resize(n);
    t.b.resize(n);
    t.c.resize(n);
    for (std::uint64_t k = 0; k < n; ++k) {
      get(&t.a[k], 8);
      get(&t.b[k], 8);
      get(&t.c[k], 8);
    }
    return t;
  }
};

namespace detail {

/// Add the on intervals of one session into a tick-indexed diff array.
///
/// The session carries a fresh stationary on-off path observed on local
/// time [0, duration); tick k is on when k - start falls in an on interval.
inline void scatter_on_intervals(const OnOffParams& oo, const Session& s, std::uint64_t path_seed,
                                 std::size_t n_ticks, std::int64_t* diff) {
  OnOffPath path(oo, path_seed);
  const double start = s.start;
  // Nothing past the tick window can contribute, so clip the walk there;
  // residual lifetimes are heavy tailed and may dwarf the window.
  const double dur = std::min(s.duration, static_cast<double>(n_ticks) - start);
  double t = 0.0;
  while (t < dur) {
    const double seg_end = std::min(path.next_switch(), dur);
    if (path.on()) {
      const double lo_t = std::ceil(start + t);
      const double hi_t = std::ceil(start + seg_end);
      const auto lo = static_cast<std::size_t>(std::clamp(lo_t, 0.0, static_cast<double>(n_ticks)));
      const auto hi = static_cast<std::size_t>(std::clamp(hi_t, 0.0, static_cast<double>(n_ticks)));
      if (lo < hi) {
        ++diff[lo];
        --diff[hi];
      }
    }
    if (path.next_switch() >= dur) break;
    t = path.next_switch();
    path.step();
  }
}

}  // namespace detail

/// Synthesize the hybrid trace: sessions, per-session stationary on-off
/// activity, and the random-centered series C(k) = mu_w B(k) - A(k).
///
/// Deterministic in (params, n_ticks, mode, seed) regardless of thread
/// count: per-session streams are derived by counter and the A-accumulation
/// is an integer sum.
inline Trace synthesize(const SessionParams& sess, const OnOffParams& oo, std::size_t n_ticks,
                        GenMode mode, std::uint64_t seed) {
  if (n_ticks < 1) throw invalid_parameter_error("synthesize: n_ticks must be >= 1");
  const std::uint64_t session_seed = derive_seed(seed, kSeedLayerSessions);
  const std::uint64_t onoff_seed = derive_seed(seed, kSeedLayerOnOff);

  const SessionSet set =
      generate_sessions(sess, static_cast<double>(n_ticks), mode, session_seed);

  Trace trace;
  trace.b = busy_servers(set, n_ticks);
  trace.meta = {seed,
                sess.lambda,
                sess.lifetime.alpha(),
                sess.lifetime.mean(),
                oo.on().alpha(),
                oo.on().mean(),
                oo.off().alpha(),
                oo.off().mean(),
                mode};

  const unsigned workers = detail::thread_count();
  std::vector<std::vector<std::int64_t>> diffs(workers);
  detail::parallel_chunks(set.sessions.size(), [&](unsigned w, std::size_t b, std::size_t e) {
    auto& diff = diffs[w];
    diff.assign(n_ticks + 1, 0);
    for (std::size_t i = b; i < e; ++i)
      detail::scatter_on_intervals(oo, set.sessions[i], derive_seed(onoff_seed, i), n_ticks,
                                   diff.data());
  });

  trace.a.assign(n_ticks, 0);
  std::int64_t acc = 0;
  for (std::size_t k = 0; k < n_ticks; ++k) {
    for (const auto& diff : diffs)
      if (!diff.empty()) acc += diff[k];
    trace.a[k] = acc;
  }

  trace.c.resize(n_ticks);
  const double mu_w = oo.mu_w();
  for (std::size_t k = 0; k < n_ticks; ++k)
    trace.c[k] = mu_w * static_cast<double>(trace.b[k]) - static_cast<double>(trace.a[k]);
  return trace;
}

/// Partial sums Y(t) = sum_{k <= t} C(k); Y(0) = C(0).
inline std::vector<double> cumulative(const Trace& trace) {
  std::vector<double> y(trace.c.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < trace.c.size(); ++k) {
    acc += trace.c[k];
    y[k] = acc;
  }
  return y;
}

}  // namespace hybridburst
