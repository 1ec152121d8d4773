#pragma once

// Markov-approximation layer: coupling spectrum, modulation spectrum,
// finite-time and golden-rule decay rates, first-order amplitude.
//
// Spectral densities are manifestly non-negative. A channel's spectrum counts
// both propagation directions (k and -k), i.e. G(omega) = sum 2 |g|^2 rho, so
// that its Fourier transform is the memory kernel over the whole k axis and
// 2 pi G(omega_A) is the population decay rate.

#include <complex>
#include <map>

#include "wgqed/waveguide.hpp"

namespace wgqed {

struct DecayEstimate {
  double rate = 0.0;                       // R, population decay rate
  std::map<ModeIndex, double> per_channel;  // R_j = 2 Gamma_j (1 + cos phi_j)
  double frequency_shift = 0.0;            // sum Gamma_j sin phi_j
};

/// G(omega) summed over every coupled TM mode with Omega_mn < omega.
/// Throws AtCutoffSingularity when omega sits on a coupled cutoff.
[[nodiscard]] double coupling_spectrum(const WaveguideGeometry& geom, const AtomConfig& atom,
                                       double omega);

/// R = 2 pi G(omega_A). The per-channel split is built independently from the
/// linearised channel parameters. Below the lowest coupled cutoff the rate is
/// zero and the split is empty.
[[nodiscard]] DecayEstimate golden_rule_rate(const WaveguideGeometry& geom, const AtomConfig& atom,
                                             double guard_band = kDefaultGuardBand);

/// f(omega) = t / (2 pi) sinc^2((omega - omega_A) t / 2).
[[nodiscard]] double modulation_spectrum(double t, double omega, double omega_a);

struct MarkovQuadratureOptions {
  /// Integration window omega_A +/- window_factor / t.
  double window_factor = 200.0;
  double rel_tol = 1e-10;
};

/// R(t) = 2 pi \int f(omega) G(omega) d omega over the window. Band-edge
/// singularities are removed by integrating each newly opened mode in its
/// own wavenumber. The omitted sinc^2 tails weigh at most 2 / (pi t W) of the
/// spectrum at the window edges.
[[nodiscard]] double finite_time_rate(const WaveguideGeometry& geom, const AtomConfig& atom,
                                      double t, const MarkovQuadratureOptions& opts = {});

/// First-order amplitude with epsilon(tau) frozen at 1:
/// eps(t) = e^{-i omega_A t} [1 - \int_0^t (t - tau) K(tau) d tau],
/// K(tau) = \int G(omega) e^{-i (omega - omega_A) tau} d omega over the same
/// window as finite_time_rate.
[[nodiscard]] std::complex<double> perturbative_amplitude(const WaveguideGeometry& geom,
                                                          const AtomConfig& atom, double t,
                                                          const MarkovQuadratureOptions& opts = {
                                                              200.0, 1e-9});

}  // namespace wgqed
