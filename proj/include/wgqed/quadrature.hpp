#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace wgqed::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;
};

struct ComplexResult {
  std::complex<double> value;
  double error = 0.0;
};

/// Adaptive Gauss-Kronrod (31 point) on [lo, hi]. Throws QuadratureFailure when
/// the error estimate exceeds max(rel_tol * |value|, abs_tol).
Result adaptive(const std::function<double(double)>& f, double lo, double hi, double rel_tol,
                double abs_tol = 0.0);

ComplexResult adaptive_complex(const std::function<std::complex<double>(double)>& f, double lo,
                               double hi, double rel_tol, double abs_tol = 0.0);

/// Sum of adaptive integrals over consecutive breakpoints; each panel gets the
/// same relative tolerance and the errors add.
Result adaptive_panels(const std::function<double(double)>& f, std::span<const double> breaks,
                       double rel_tol, double abs_tol = 0.0);

/// Composite 8-point Gauss-Legendre on `panels` equal panels of [lo, hi].
std::complex<double> gauss_legendre(const std::function<std::complex<double>(double)>& f,
                                    double lo, double hi, int panels);

}  // namespace wgqed::quad
