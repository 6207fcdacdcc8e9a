#pragma once

#include <stdexcept>
#include <string>

namespace vov {

// Base class for all library errors.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid model parameters, tuning constants, or run configuration.
// Command-line mapping: exit code 2.
struct config_error : error {
  using error::error;
};

// Tuning exponents outside the validity region of an asymptotic formula.
struct rate_constraint_error : config_error {
  using config_error::config_error;
};

// Malformed, inconsistent, or insufficient input data.
// Command-line mapping: exit code 3.
struct data_error : error {
  using error::error;
};

// An estimator window reaches back before the start of the available path.
struct coverage_error : data_error {
  using data_error::data_error;
};

// A numerically degenerate fit: singular regression design, zero volatility
// of volatility, or a window rule that cannot produce a usable window.
struct degeneracy_error : data_error {
  using data_error::data_error;
};

}  // namespace vov
