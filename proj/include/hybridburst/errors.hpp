#pragma once

#include <stdexcept>
#include <string>

namespace hybridburst {

/// Base class for all library errors.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A constructor or operation received an argument outside its domain.
class invalid_parameter_error : public error {
 public:
  using error::error;
};

/// Renewal-solver grid step too coarse for the duration-law support.
class grid_too_coarse_error : public error {
 public:
  using error::error;
};

/// Parameter pair falls in a region with no implemented limit law.
class unsupported_case_error : public error {
 public:
  using error::error;
};

/// A regression or tail fit could not be performed on the given data.
class fit_failure_error : public error {
 public:
  using error::error;
};

/// A quadrature did not converge within its stated tail-correction bound.
class nonconvergence_error : public error {
 public:
  using error::error;
};

/// Input series too short for the requested wavelet decomposition.
class series_too_short_error : public error {
 public:
  using error::error;
};

/// Expected in-memory session population exceeds the configured budget.
class memory_budget_error : public error {
 public:
  using error::error;
};

/// Estimation failed (degenerate diagram, too few octaves, ...).
class estimation_error : public error {
 public:
  using error::error;
};

/// File import/export failure.
class io_error : public error {
 public:
  using error::error;
};

}  // namespace hybridburst
