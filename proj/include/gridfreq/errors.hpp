#pragma once

#include <stdexcept>
#include <string>

namespace gridfreq {

/// Input failed schema or model validation. The message names the offending
/// field or element.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Integration produced a non-finite state, or a linear solve failed.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Threshold-search bracket endpoints do not straddle the breach boundary.
/// Carries both endpoint nadirs so the caller can widen the bracket.
class BracketError : public std::runtime_error {
 public:
  BracketError(const std::string& msg, double lo_nadir, double hi_nadir)
      : std::runtime_error(msg), lo_nadir_hz(lo_nadir), hi_nadir_hz(hi_nadir) {}

  double lo_nadir_hz;
  double hi_nadir_hz;
};

}  // namespace gridfreq
