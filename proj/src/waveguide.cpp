#include "wgqed/waveguide.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "wgqed/errors.hpp"

namespace wgqed {

namespace {

constexpr double kPi = std::numbers::pi;

std::string mode_name(ModeIndex idx) {
  std::ostringstream os;
  os << "TM" << idx.m << "," << idx.n;
  return os.str();
}

void check_mode(ModeIndex idx) {
  if (idx.m < 1 || idx.n < 1) {
    throw std::invalid_argument("TM modes need m >= 1 and n >= 1");
  }
}

// Proportional to Omega_mn^2 and exact in floating point for integral a, b, so
// equal cutoffs compare equal.
double cutoff_key(const WaveguideGeometry& geom, ModeIndex idx) {
  const double m = idx.m;
  const double n = idx.n;
  return m * m * geom.b() * geom.b() + n * n * geom.a() * geom.a();
}

}  // namespace

WaveguideGeometry::WaveguideGeometry(double a, double b, double c) : a_(a), b_(b), c_(c) {
  if (!(a > 0.0) || !(b > 0.0) || !(c > 0.0)) {
    throw std::invalid_argument("waveguide dimensions and wave speed must be positive");
  }
  if (a < b) {
    throw std::invalid_argument("waveguide convention requires a >= b");
  }
}

AtomConfig::AtomConfig(double omega_a, double dipole_scale, double x0, double y0, double z0)
    : omega_a_(omega_a), dipole_scale_(dipole_scale), x0_(x0), y0_(y0), z0_(z0) {
  if (!(omega_a > 0.0)) throw std::invalid_argument("omega_a must be positive");
  if (!(dipole_scale > 0.0)) throw std::invalid_argument("dipole_scale must be positive");
  if (!(z0 >= 0.0)) throw std::invalid_argument("z0 must be non-negative");
  if (!std::isfinite(x0) || !std::isfinite(y0) || !std::isfinite(z0)) {
    throw std::invalid_argument("atom position must be finite");
  }
}

AtomConfig AtomConfig::with_omega_a(double omega_a) const {
  return {omega_a, dipole_scale_, x0_, y0_, z0_};
}

AtomConfig AtomConfig::with_dipole_scale(double dipole_scale) const {
  return {omega_a_, dipole_scale, x0_, y0_, z0_};
}

AtomConfig AtomConfig::with_z0(double z0) const { return {omega_a_, dipole_scale_, x0_, y0_, z0}; }

void AtomConfig::check_inside(const WaveguideGeometry& geom) const {
  if (!(x0_ > 0.0 && x0_ < geom.a() && y0_ > 0.0 && y0_ < geom.b())) {
    throw std::invalid_argument("atom must sit strictly inside the waveguide cross section");
  }
}

ModeIndex make_mode(int m, int n) {
  ModeIndex idx{m, n};
  check_mode(idx);
  return idx;
}

double cutoff_frequency(const WaveguideGeometry& geom, ModeIndex idx) {
  check_mode(idx);
  const double mx = idx.m / geom.a();
  const double ny = idx.n / geom.b();
  return kPi * geom.c() * std::sqrt(mx * mx + ny * ny);
}

double dispersion(const WaveguideGeometry& geom, ModeIndex idx, double k) {
  return std::hypot(geom.c() * k, cutoff_frequency(geom, idx));
}

double wavenumber_at(const WaveguideGeometry& geom, ModeIndex idx, double omega) {
  const double cutoff = cutoff_frequency(geom, idx);
  if (omega < cutoff) {
    throw BelowCutoff("frequency " + std::to_string(omega) + " is below the cutoff of " +
                      mode_name(idx));
  }
  // (omega - Omega)(omega + Omega) keeps precision close to the cutoff.
  return std::sqrt((omega - cutoff) * (omega + cutoff)) / geom.c();
}

double group_velocity(const WaveguideGeometry& geom, ModeIndex idx, double omega) {
  const double cutoff = cutoff_frequency(geom, idx);
  if (omega <= cutoff) {
    throw BelowCutoff("no propagating " + mode_name(idx) + " wave at this frequency");
  }
  return geom.c() * geom.c() * wavenumber_at(geom, idx, omega) / omega;
}

double density_of_states(const WaveguideGeometry& geom, ModeIndex idx, double omega) {
  const double cutoff = cutoff_frequency(geom, idx);
  if (omega == cutoff) {
    throw AtCutoffSingularity("density of states diverges at the cutoff of " + mode_name(idx));
  }
  if (omega < cutoff) {
    throw BelowCutoff("no propagating " + mode_name(idx) + " wave at this frequency");
  }
  return omega / (geom.c() * geom.c() * wavenumber_at(geom, idx, omega));
}

double transverse_factor(const WaveguideGeometry& geom, const AtomConfig& atom, ModeIndex idx) {
  check_mode(idx);
  return std::sin(idx.m * kPi * atom.x0() / geom.a()) * std::sin(idx.n * kPi * atom.y0() / geom.b());
}

double coupling_strength_at_k(const WaveguideGeometry& geom, const AtomConfig& atom, ModeIndex idx,
                              double k) {
  const double cutoff = cutoff_frequency(geom, idx);
  const double omega = dispersion(geom, idx, k);
  const double amplitude = std::sqrt(atom.dipole_scale() * cutoff * cutoff / (kPi * omega));
  return amplitude * std::abs(transverse_factor(geom, atom, idx) * std::cos(k * atom.z0()));
}

double coupling_strength(const WaveguideGeometry& geom, const AtomConfig& atom, ModeIndex idx,
                         double omega) {
  return coupling_strength_at_k(geom, atom, idx, wavenumber_at(geom, idx, omega));
}

std::vector<ModeIndex> coupled_modes(const WaveguideGeometry& geom, const AtomConfig& atom,
                                     double max_frequency) {
  atom.check_inside(geom);
  std::vector<ModeIndex> modes;
  if (!(max_frequency > 0.0)) return modes;
  // Omega_mn > m pi c / a and > n pi c / b, so these bounds are complete.
  const int m_max = static_cast<int>(std::ceil(geom.a() * max_frequency / (kPi * geom.c())));
  const int n_max = static_cast<int>(std::ceil(geom.b() * max_frequency / (kPi * geom.c())));
  for (int m = 1; m <= m_max; ++m) {
    for (int n = 1; n <= n_max; ++n) {
      const ModeIndex idx{m, n};
      if (cutoff_frequency(geom, idx) > max_frequency) continue;
      if (std::abs(transverse_factor(geom, atom, idx)) < kDecoupledThreshold) continue;
      modes.push_back(idx);
    }
  }
  std::sort(modes.begin(), modes.end(), [&](ModeIndex lhs, ModeIndex rhs) {
    return std::tuple(cutoff_key(geom, lhs), lhs.m, lhs.n) <
           std::tuple(cutoff_key(geom, rhs), rhs.m, rhs.n);
  });
  return modes;
}

std::vector<ModeChannel> enumerate_channels(const WaveguideGeometry& geom, const AtomConfig& atom,
                                            double guard_band) {
  if (!(guard_band >= 0.0)) throw std::invalid_argument("guard band must be non-negative");
  const double omega_a = atom.omega_a();
  const double guard = guard_band * omega_a;

  std::vector<ModeChannel> channels;
  for (const ModeIndex idx : coupled_modes(geom, atom, omega_a + guard)) {
    const double cutoff = cutoff_frequency(geom, idx);
    if (std::abs(omega_a - cutoff) <= guard) {
      throw AtCutoffSingularity("transition frequency lies within the guard band of the " +
                                mode_name(idx) + " cutoff");
    }
    if (cutoff >= omega_a) continue;

    ModeChannel ch;
    ch.index = idx;
    ch.cutoff = cutoff;
    ch.k0 = wavenumber_at(geom, idx, omega_a);
    ch.group_velocity = group_velocity(geom, idx, omega_a);
    const double s = transverse_factor(geom, atom, idx);
    ch.rate = atom.dipole_scale() * cutoff * cutoff * s * s / (omega_a * ch.group_velocity);
    ch.phase = 2.0 * ch.k0 * atom.z0();
    ch.delay = 2.0 * atom.z0() / ch.group_velocity;
    channels.push_back(ch);
  }
  return channels;
}

double guided_wavelength(const WaveguideGeometry& geom, ModeIndex idx, double omega_a) {
  const double k = wavenumber_at(geom, idx, omega_a);
  if (k == 0.0) throw AtCutoffSingularity("guided wavelength diverges at the cutoff");
  return 2.0 * kPi / k;
}

}  // namespace wgqed
