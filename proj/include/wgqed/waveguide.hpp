#pragma once

// Geometry, atom placement and TM-mode mathematics of a hollow rectangular
// waveguide terminated by a perfect mirror at z = 0.
//
// Units are dimensionless: lengths in units of the guide height b, speeds in
// units of c. Every quantity here is a pure function of immutable inputs.

#include <compare>
#include <vector>

namespace wgqed {

/// Perfectly conducting pipe 0 <= x <= a, 0 <= y <= b, mirror at z = 0.
class WaveguideGeometry {
 public:
  /// Throws std::invalid_argument unless a >= b > 0 and c > 0.
  WaveguideGeometry(double a, double b, double c = 1.0);

  [[nodiscard]] double a() const noexcept { return a_; }
  [[nodiscard]] double b() const noexcept { return b_; }
  [[nodiscard]] double c() const noexcept { return c_; }

 private:
  double a_;
  double b_;
  double c_;
};

/// Two-level atom with its dipole along z.
///
/// `dipole_scale` is the single coupling constant kappa = 4 d^2 / (A eps0); the
/// individual factors never appear separately.
class AtomConfig {
 public:
  AtomConfig(double omega_a, double dipole_scale, double x0, double y0, double z0);

  [[nodiscard]] double omega_a() const noexcept { return omega_a_; }
  [[nodiscard]] double dipole_scale() const noexcept { return dipole_scale_; }
  [[nodiscard]] double x0() const noexcept { return x0_; }
  [[nodiscard]] double y0() const noexcept { return y0_; }
  [[nodiscard]] double z0() const noexcept { return z0_; }

  [[nodiscard]] AtomConfig with_omega_a(double omega_a) const;
  [[nodiscard]] AtomConfig with_dipole_scale(double dipole_scale) const;
  [[nodiscard]] AtomConfig with_z0(double z0) const;

  /// Throws std::invalid_argument when the atom is not strictly inside the pipe.
  void check_inside(const WaveguideGeometry& geom) const;

 private:
  double omega_a_;
  double dipole_scale_;
  double x0_;
  double y0_;
  double z0_;
};

/// TM_mn mode label; both indices are at least 1.
struct ModeIndex {
  int m = 1;
  int n = 1;

  friend auto operator<=>(const ModeIndex&, const ModeIndex&) = default;
};

/// Checks m >= 1 and n >= 1, throwing std::invalid_argument otherwise.
ModeIndex make_mode(int m, int n);

/// One TM channel resonant with the atom, linearised around omega_A.
struct ModeChannel {
  ModeIndex index;
  double cutoff = 0.0;          // Omega_mn
  double k0 = 0.0;              // resonant wavenumber
  double group_velocity = 0.0;  // v_j at omega_A
  double rate = 0.0;            // Gamma_j
  double phase = 0.0;           // phi_j = 2 k0 z0
  double delay = 0.0;           // tau_j = 2 z0 / v_j
};

/// Omega_mn = pi c sqrt(m^2/a^2 + n^2/b^2).
[[nodiscard]] double cutoff_frequency(const WaveguideGeometry& geom, ModeIndex idx);

/// omega(k) = sqrt(c^2 k^2 + Omega_mn^2).
[[nodiscard]] double dispersion(const WaveguideGeometry& geom, ModeIndex idx, double k);

/// Inverse dispersion on the k >= 0 branch. Throws BelowCutoff for omega < Omega_mn.
[[nodiscard]] double wavenumber_at(const WaveguideGeometry& geom, ModeIndex idx, double omega);

/// v = c sqrt(omega^2 - Omega^2) / omega. Throws BelowCutoff for omega <= Omega_mn.
[[nodiscard]] double group_velocity(const WaveguideGeometry& geom, ModeIndex idx, double omega);

/// rho(omega) = omega / (c sqrt(omega^2 - Omega^2)) for one propagation direction.
/// Throws AtCutoffSingularity at omega == Omega_mn and BelowCutoff below it.
[[nodiscard]] double density_of_states(const WaveguideGeometry& geom, ModeIndex idx, double omega);

/// sin(m pi x0 / a) sin(n pi y0 / b); the standing-wave profile at the atom.
[[nodiscard]] double transverse_factor(const WaveguideGeometry& geom, const AtomConfig& atom,
                                       ModeIndex idx);

/// |g_mn(omega)|. The global factor i of the dipole coupling is dropped; only
/// |g|^2 enters observables.
[[nodiscard]] double coupling_strength(const WaveguideGeometry& geom, const AtomConfig& atom,
                                       ModeIndex idx, double omega);

/// Same as coupling_strength with the propagation wavenumber supplied by the
/// caller; used where sqrt(omega^2 - Omega^2) would lose precision.
[[nodiscard]] double coupling_strength_at_k(const WaveguideGeometry& geom, const AtomConfig& atom,
                                            ModeIndex idx, double k);

/// Transverse factors below this magnitude count as decoupled.
inline constexpr double kDecoupledThreshold = 1e-12;

/// Default exclusion half-width around each coupled cutoff, relative to omega_A.
inline constexpr double kDefaultGuardBand = 1e-3;

/// All TM modes that couple to the atom (nonzero transverse factor), in
/// ascending cutoff order with ties broken by (m, n). `max_frequency` bounds
/// the search: only modes with Omega_mn <= max_frequency are returned.
[[nodiscard]] std::vector<ModeIndex> coupled_modes(const WaveguideGeometry& geom,
                                                   const AtomConfig& atom, double max_frequency);

/// Resonant channels (Omega_mn < omega_A, nonzero coupling) sorted by cutoff,
/// ties broken lexicographically by (m, n).
///
/// Throws AtCutoffSingularity when omega_A lies within guard_band * omega_A of
/// any coupled cutoff, where the linear expansion of the dispersion fails.
[[nodiscard]] std::vector<ModeChannel> enumerate_channels(const WaveguideGeometry& geom,
                                                          const AtomConfig& atom,
                                                          double guard_band = kDefaultGuardBand);

/// lambda_1A = 2 pi c / sqrt(omega_A^2 - Omega_11^2), the guided wavelength of
/// the lowest TM mode at the transition frequency.
[[nodiscard]] double guided_wavelength(const WaveguideGeometry& geom, ModeIndex idx,
                                       double omega_a);

}  // namespace wgqed
