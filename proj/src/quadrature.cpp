#include "wgqed/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <stdexcept>
#include <string>

#include "wgqed/errors.hpp"

namespace wgqed::quad {

namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 31>;
// Deeper recursion lets roundoff-level subintervals inflate the summed
// error estimate without improving the value.
constexpr unsigned kMaxDepth = 12;

void check_error(double value_magnitude, double error, double rel_tol, double abs_tol) {
  if (!std::isfinite(value_magnitude) || !std::isfinite(error)) {
    throw QuadratureFailure("quadrature produced a non-finite result");
  }
  const double allowed = std::max(rel_tol * value_magnitude, abs_tol);
  // Kronrod error estimates are pessimistic; a factor of 10 margin avoids
  // rejecting integrals that have in fact converged.
  if (error > 10.0 * allowed && error > 1e-14 * std::max(1.0, value_magnitude)) {
    throw QuadratureFailure("quadrature tolerance unattainable: error estimate " +
                            std::to_string(error) + " for value " +
                            std::to_string(value_magnitude));
  }
}

}  // namespace

Result adaptive(const std::function<double(double)>& f, double lo, double hi, double rel_tol,
                double abs_tol) {
  if (hi == lo) return {};
  Result r;
  r.value = Kronrod::integrate(f, lo, hi, kMaxDepth, rel_tol, &r.error);
  check_error(std::abs(r.value), r.error, rel_tol, abs_tol);
  return r;
}

ComplexResult adaptive_complex(const std::function<std::complex<double>(double)>& f, double lo,
                               double hi, double rel_tol, double abs_tol) {
  if (hi == lo) return {};
  ComplexResult r;
  r.value = Kronrod::integrate(f, lo, hi, kMaxDepth, rel_tol, &r.error);
  check_error(std::abs(r.value), r.error, rel_tol, abs_tol);
  return r;
}

Result adaptive_panels(const std::function<double(double)>& f, std::span<const double> breaks,
                       double rel_tol, double abs_tol) {
  Result total;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const Result panel = adaptive(f, breaks[i], breaks[i + 1], rel_tol, abs_tol);
    total.value += panel.value;
    total.error += panel.error;
  }
  return total;
}

std::complex<double> gauss_legendre(const std::function<std::complex<double>(double)>& f,
                                    double lo, double hi, int panels) {
  if (panels < 1) throw std::invalid_argument("at least one quadrature panel is required");
  const double width = (hi - lo) / panels;
  std::complex<double> sum{};
  for (int p = 0; p < panels; ++p) {
    const double a = lo + p * width;
    const double b = (p + 1 == panels) ? hi : a + width;
    sum += boost::math::quadrature::gauss<double, 8>::integrate(f, a, b);
  }
  return sum;
}

}  // namespace wgqed::quad
