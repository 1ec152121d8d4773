#pragma once

// Brute-force reference: the single-excitation amplitudes of the atom and of
// a discretised k continuum per TM channel, evolved without linearising the
// dispersion relation.

#include <complex>
#include <optional>
#include <vector>

#include "wgqed/trace.hpp"
#include "wgqed/waveguide.hpp"

namespace wgqed {

/// Uniform wavenumber grid on [0, K] for one channel. The continuum runs over
/// (-K, K); the integrand is even in k, so every node stands for the pair
/// +/-k and carries twice its trapezoid weight.
struct ChannelGrid {
  ModeIndex index;
  double cutoff = 0.0;
  double k_max = 0.0;
  double dk = 0.0;
  std::vector<double> k;
  std::vector<double> weight;  // trapezoid weights on [0, K], without the factor 2
};

struct KGrid {
  std::vector<ChannelGrid> channels;
  /// Frequency half-window above omega_A that every channel grid reaches.
  double band_window = 0.0;

  [[nodiscard]] std::size_t size() const noexcept;
};

struct KGridOptions {
  /// Window above omega_A in units of the total linewidth sum Gamma_j. The
  /// Lorentzian weight left outside is about 1 / (pi * window_linewidths).
  double window_linewidths = 400.0;
  /// Explicit window; required when no channel is resonant.
  std::optional<double> band_window;
  /// Multiplies the default spacing; values below 1 refine the grid.
  double spacing_scale = 1.0;
};

/// Grid for the given modes. Each reaches omega(K) = max(omega_A, Omega) +
/// window, down to k = 0 so the band edge is resolved, with
/// dk = 2 pi / (4 v t_max) so the recurrence time is four times t_max, further
/// refined to resolve cos(k z0).
[[nodiscard]] KGrid build_kgrid(const WaveguideGeometry& geom, const AtomConfig& atom,
                                const std::vector<ModeIndex>& modes, double t_max,
                                const KGridOptions& opts = {});

/// Grid over the resonant channels of enumerate_channels.
[[nodiscard]] KGrid build_kgrid(const WaveguideGeometry& geom, const AtomConfig& atom,
                                double t_max, const KGridOptions& opts = {});

/// Atom and field amplitudes in the frame rotating at omega_A. Field
/// amplitudes are stored as sqrt(2 w_i) phi(k_i), so the norm is a plain sum.
struct FullState {
  std::complex<double> atom_amplitude;
  std::vector<std::vector<std::complex<double>>> field_amplitudes;  // per channel

  [[nodiscard]] double norm_squared() const;
};

struct KspaceOptions {
  /// Treat omega_A as the dressed transition frequency: the bare frequency is
  /// omega_A minus the static self-energy shift of the truncated continuum.
  bool renormalize_frequency = true;
  /// Internal substeps per output step; 0 picks enough that
  /// h * max|omega_k - omega_A| <= 0.2.
  int substeps = 0;
  double norm_tolerance = 1e-8;
};

struct KspaceResult {
  AmplitudeTrace trace;  // on the output grid t_i = i * step
  FullState final_state;
  double max_norm_error = 0.0;
  double frequency_shift = 0.0;  // self-energy shift removed from the bare frequency
};

/// Evolves the full model with the fourth-order Gauss-Legendre (two-stage)
/// collocation rule. In the rotating frame the Hamiltonian is a constant
/// arrowhead matrix, so each step applies the (2,2) Pade approximant of the
/// propagator through two shifted O(N) solves and conserves the norm to
/// round-off.
///
/// Throws RecurrenceHorizonExceeded when t_max exceeds a quarter of a resonant
/// channel's recurrence time 2 pi / (v dk) and NormDrift when the norm moves by more than norm_tolerance.
[[nodiscard]] KspaceResult integrate_full(const WaveguideGeometry& geom, const AtomConfig& atom,
                                          const KGrid& grid, double t_max, double step,
                                          const KspaceOptions& opts = {});

/// Static self-energy shift of the truncated continuum at omega_A: the
/// principal value of sum_j \int dk |g_j(k)|^2_avg / (omega_A - omega_j(k)),
/// where |g|^2_avg replaces cos^2(k z0) by its mean 1/2.
[[nodiscard]] double continuum_shift(const WaveguideGeometry& geom, const AtomConfig& atom,
                                     const KGrid& grid);

/// G(tau) = sum_j \int dk |g_j(k)|^2 e^{-i omega_j(k) tau} on the grid.
[[nodiscard]] std::complex<double> memory_kernel(const WaveguideGeometry& geom,
                                                 const AtomConfig& atom, const KGrid& grid,
                                                 double tau);

}  // namespace wgqed
