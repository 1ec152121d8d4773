#include "wgqed/markov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "wgqed/errors.hpp"
#include "wgqed/quadrature.hpp"

namespace wgqed {

namespace {

constexpr double kPi = std::numbers::pi;

struct SpectralMode {
  ModeIndex index;
  double cutoff;
  double amplitude;  // 2 kappa Omega^2 S^2 / pi
};

std::vector<SpectralMode> spectral_modes(const WaveguideGeometry& geom, const AtomConfig& atom,
                                         double max_frequency) {
  std::vector<SpectralMode> out;
  for (const ModeIndex idx : coupled_modes(geom, atom, max_frequency)) {
    const double cutoff = cutoff_frequency(geom, idx);
    const double s = transverse_factor(geom, atom, idx);
    out.push_back({idx, cutoff, 2.0 * atom.dipole_scale() * cutoff * cutoff * s * s / kPi});
  }
  return out;
}

// 2 |g(k)|^2 for one mode: the spectral weight per unit wavenumber.
double weight_per_k(const SpectralMode& mode, double omega, double k, double z0) {
  const double c = std::cos(k * z0);
  return mode.amplitude * c * c / omega;
}

// G(omega) restricted to modes with cutoff strictly below omega.
double spectrum_value(const WaveguideGeometry& geom, const std::vector<SpectralMode>& modes,
                      double z0, double omega) {
  double sum = 0.0;
  const double c2 = geom.c() * geom.c();
  for (const auto& mode : modes) {
    if (mode.cutoff >= omega) break;
    const double k = std::sqrt((omega - mode.cutoff) * (omega + mode.cutoff)) / geom.c();
    // weight per k times dk/domega = omega / (c^2 k)
    sum += weight_per_k(mode, omega, k, z0) * omega / (c2 * k);
  }
  return sum;
}

// \int_lo^hi w(omega) G(omega) d omega. Every panel that starts at a cutoff is
// integrated in that mode's wavenumber, which turns the 1/sqrt divergence of
// the density of states into a smooth integrand.
template <class Weight, class Integrate>
auto integrate_spectrum(const WaveguideGeometry& geom, const std::vector<SpectralMode>& modes,
                        double z0, double lo, double hi, double panel_width, Weight weight,
                        Integrate integrate) {
  using Value = decltype(weight(0.0));
  Value total{};
  if (modes.empty()) return total;
  lo = std::max(lo, modes.front().cutoff);
  if (!(hi > lo)) return total;

  std::vector<double> breaks{lo};
  for (const auto& mode : modes) {
    if (mode.cutoff > lo && mode.cutoff < hi && mode.cutoff != breaks.back()) {
      breaks.push_back(mode.cutoff);
    }
  }
  breaks.push_back(hi);

  const double c = geom.c();
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double a = breaks[p];
    const double b = breaks[p + 1];
    const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / panel_width)));

    // Modes opening exactly at `a`.
    std::vector<const SpectralMode*> opening;
    for (const auto& mode : modes) {
      if (mode.cutoff == a) opening.push_back(&mode);
    }

    if (opening.empty()) {
      auto integrand = [&](double omega) -> Value {
        return weight(omega) * spectrum_value(geom, modes, z0, omega);
      };
      for (int i = 0; i < panels; ++i) {
        const double pa = a + (b - a) * i / panels;
        const double pb = (i + 1 == panels) ? b : a + (b - a) * (i + 1) / panels;
        total += integrate(integrand, pa, pb);
      }
      continue;
    }

    const double cutoff = a;
    auto integrand = [&](double k) -> Value {
      const double omega = std::hypot(c * k, cutoff);
      double g = 0.0;
      for (const SpectralMode* mode : opening) g += weight_per_k(*mode, omega, k, z0);
      double below = 0.0;
      for (const auto& mode : modes) {
        if (mode.cutoff >= cutoff) break;
        const double ki = std::sqrt((omega - mode.cutoff) * (omega + mode.cutoff)) / c;
        below += weight_per_k(mode, omega, ki, z0) * omega / (c * c * ki);
      }
      // d omega / dk = c^2 k / omega
      return weight(omega) * (g + below * c * c * k / omega);
    };
    auto k_of = [&](double omega) {
      return std::sqrt(std::max(0.0, (omega - cutoff) * (omega + cutoff))) / c;
    };
    for (int i = 0; i < panels; ++i) {
      const double pa = a + (b - a) * i / panels;
      const double pb = (i + 1 == panels) ? b : a + (b - a) * (i + 1) / panels;
      total += integrate(integrand, i == 0 ? 0.0 : k_of(pa), k_of(pb));
    }
  }
  return total;
}

}  // namespace

double coupling_spectrum(const WaveguideGeometry& geom, const AtomConfig& atom, double omega) {
  const auto modes = spectral_modes(geom, atom, omega);
  for (const auto& mode : modes) {
    if (std::abs(omega - mode.cutoff) <= 4.0 * std::numeric_limits<double>::epsilon() * omega) {
      throw AtCutoffSingularity("coupling spectrum diverges at a coupled cutoff");
    }
  }
  return spectrum_value(geom, modes, atom.z0(), omega);
}

DecayEstimate golden_rule_rate(const WaveguideGeometry& geom, const AtomConfig& atom,
                               double guard_band) {
  DecayEstimate est;
  const auto channels = enumerate_channels(geom, atom, guard_band);
  if (channels.empty()) return est;
  est.rate = 2.0 * kPi * coupling_spectrum(geom, atom, atom.omega_a());
  for (const auto& ch : channels) {
    est.per_channel[ch.index] = 2.0 * ch.rate * (1.0 + std::cos(ch.phase));
    est.frequency_shift += ch.rate * std::sin(ch.phase);
  }
  return est;
}

double modulation_spectrum(double t, double omega, double omega_a) {
  if (!(t > 0.0)) throw std::invalid_argument("modulation spectrum needs t > 0");
  const double x = 0.5 * (omega - omega_a) * t;
  const double sinc = (x == 0.0) ? 1.0 : std::sin(x) / x;
  return t / (2.0 * kPi) * sinc * sinc;
}

double finite_time_rate(const WaveguideGeometry& geom, const AtomConfig& atom, double t,
                        const MarkovQuadratureOptions& opts) {
  if (!(t > 0.0)) throw std::invalid_argument("finite-time rate needs t > 0");
  const double omega_a = atom.omega_a();
  const double half_width = opts.window_factor / t;
  const double hi = omega_a + half_width;
  const auto modes = spectral_modes(geom, atom, hi);

  auto weight = [&](double omega) { return modulation_spectrum(t, omega, omega_a); };
  double error = 0.0;
  // Tail panels are tiny next to the total, so accuracy is judged on the sum.
  auto integrate = [&](const auto& f, double a, double b) {
    const quad::Result r =
        quad::adaptive(f, a, b, opts.rel_tol, std::numeric_limits<double>::infinity());
    error += r.error;
    return r.value;
  };
  // Four sinc^2 lobes per panel.
  const double panel = 8.0 * kPi / t;
  const double integral = integrate_spectrum(geom, modes, atom.z0(), omega_a - half_width, hi,
                                             panel, weight, integrate);
  if (error > 10.0 * opts.rel_tol * std::abs(integral) && error > 1e-14 * std::abs(integral)) {
    throw QuadratureFailure("finite-time rate did not reach the requested tolerance");
  }
  return 2.0 * kPi * integral;
}

std::complex<double> perturbative_amplitude(const WaveguideGeometry& geom, const AtomConfig& atom,
                                            double t, const MarkovQuadratureOptions& opts) {
  if (!(t >= 0.0)) throw std::invalid_argument("perturbative amplitude needs t >= 0");
  if (t == 0.0) return {1.0, 0.0};

  const double omega_a = atom.omega_a();
  const double half_width = opts.window_factor / t;
  const double hi = omega_a + half_width;
  const auto modes = spectral_modes(geom, atom, hi);

  double gamma_total = 0.0;
  try {
    for (const auto& ch : enumerate_channels(geom, atom, 0.0)) gamma_total += ch.rate;
  } catch (const AtCutoffSingularity&) {
    // exactly at a cutoff; the panel count below then relies on the window
  }

  // K(0) = \int G is the natural magnitude for the oscillatory kernel values.
  double abs_tol = 1e-300;
  auto kernel = [&](double tau) {
    auto weight = [&](double omega) {
      return std::polar(1.0, -(omega - omega_a) * tau);
    };
    auto integrate = [&](const auto& f, double a, double b) {
      return quad::adaptive_complex(f, a, b, opts.rel_tol, abs_tol).value;
    };
    const double panel = std::max(8.0 * kPi / std::max(tau, 1e-300), 1e-3 * half_width);
    return integrate_spectrum(geom, modes, atom.z0(), omega_a - half_width, hi, panel, weight,
                              integrate);
  };

  abs_tol = opts.rel_tol * std::abs(kernel(0.0));

  // Gauss-Legendre in tau: enough panels for both the decay scale and the
  // fastest kernel oscillation inside the window.
  const int panels = std::max(
      {1, static_cast<int>(std::ceil(40.0 * gamma_total * t)),
       static_cast<int>(std::ceil(half_width * t / kPi))});
  const std::complex<double> memory = quad::gauss_legendre(
      [&](double tau) { return (t - tau) * kernel(tau); }, 0.0, t, panels);
  return std::polar(1.0, -omega_a * t) * (1.0 - memory);
}

}  // namespace wgqed
