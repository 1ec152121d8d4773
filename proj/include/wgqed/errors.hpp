#pragma once

#include <stdexcept>
#include <string>

namespace wgqed {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requested frequency lies below a mode's cutoff (evanescent regime).
class BelowCutoff : public Error {
 public:
  using Error::Error;
};

/// Frequency sits on (or inside the guard band of) a coupled cutoff where the
/// density of states diverges.
class AtCutoffSingularity : public Error {
 public:
  using Error::Error;
};

class QuadratureFailure : public Error {
 public:
  using Error::Error;
};

class StepTooLarge : public Error {
 public:
  using Error::Error;
};

/// |amplitude| exceeded 1 in the delay integrator.
class NormViolation : public Error {
 public:
  using Error::Error;
};

/// k-space run asked for times beyond the grid's recurrence window.
class RecurrenceHorizonExceeded : public Error {
 public:
  using Error::Error;
};

/// Total single-excitation norm drifted in the k-space integrator.
class NormDrift : public Error {
 public:
  using Error::Error;
};

class EngineNotApplicable : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace wgqed
