#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

namespace wgqed {

/// Slowly varying excited-state amplitude eps~(t); the fast factor
/// exp(-i omega_A t) is never stored.
struct AmplitudeTrace {
  std::vector<double> times;
  std::vector<std::complex<double>> amplitudes;
  /// Flat key/value description of the run that produced the trace.
  std::map<std::string, std::string> metadata;

  [[nodiscard]] std::size_t size() const noexcept { return times.size(); }
};

}  // namespace wgqed
