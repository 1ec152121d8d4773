#include "wgqed/kspace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "wgqed/errors.hpp"
#include "wgqed/quadrature.hpp"

namespace wgqed {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

// Recurrence time 2 pi / (v dk) must exceed t_max by this factor.
constexpr double kRecurrenceFactor = 4.0;
// Internal step bound: h * max|omega_k - omega_A|.
constexpr double kPhaseStep = 0.2;

double total_rate(const std::vector<ModeChannel>& channels) {
  double sum = 0.0;
  for (const auto& ch : channels) sum += ch.rate;
  return sum;
}

double reliable_window(const ChannelGrid& grid, double group_velocity) {
  return 2.0 * kPi / (group_velocity * grid.dk) / kRecurrenceFactor;
}

// Flattened arrowhead Hamiltonian in the frame rotating at omega_A: atom
// diagonal, field detunings and real couplings sqrt(2 w) g.
struct Arrowhead {
  double atom_detuning = 0.0;
  std::vector<double> detuning;
  std::vector<double> coupling;

  double max_detuning() const {
    double m = std::abs(atom_detuning);
    for (double d : detuning) m = std::max(m, std::abs(d));
    return m;
  }

  // psi <- psi + scale * (H - sigma)^{-1} psi in O(N).
  void apply_resolvent_update(cplx sigma, cplx scale, cplx& atom,
                              std::vector<cplx>& field) const {
    cplx num = atom;
    cplx den = atom_detuning - sigma;
    for (std::size_t i = 0; i < field.size(); ++i) {
      const cplx inv = 1.0 / (detuning[i] - sigma);
      num -= coupling[i] * field[i] * inv;
      den -= coupling[i] * coupling[i] * inv;
    }
    const cplx x0 = num / den;
    for (std::size_t i = 0; i < field.size(); ++i) {
      field[i] += scale * (field[i] - coupling[i] * x0) / (detuning[i] - sigma);
    }
    atom += scale * x0;
  }
};

double squared_coupling_avg(const WaveguideGeometry& geom, const AtomConfig& atom, ModeIndex idx,
                            double k) {
  // kappa Omega^2 S^2 / (pi omega) times the mean 1/2 of cos^2(k z0)
  const double s = transverse_factor(geom, atom, idx);
  const double cutoff = cutoff_frequency(geom, idx);
  return 0.5 * atom.dipole_scale() * cutoff * cutoff * s * s / (kPi * dispersion(geom, idx, k));
}

}  // namespace

std::size_t KGrid::size() const noexcept {
  std::size_t n = 0;
  for (const auto& ch : channels) n += ch.k.size();
  return n;
}

double FullState::norm_squared() const {
  double sum = std::norm(atom_amplitude);
  for (const auto& ch : field_amplitudes) {
    for (const cplx& x : ch) sum += std::norm(x);
  }
  return sum;
}

KGrid build_kgrid(const WaveguideGeometry& geom, const AtomConfig& atom,
                  const std::vector<ModeIndex>& modes, double t_max, const KGridOptions& opts) {
  if (!(t_max > 0.0)) throw std::invalid_argument("k grid needs t_max > 0");
  if (modes.empty()) throw std::invalid_argument("k grid needs at least one mode");
  const double omega_a = atom.omega_a();

  double window = 0.0;
  if (opts.band_window) {
    window = *opts.band_window;
  } else {
    const double gamma = total_rate(enumerate_channels(geom, atom, 0.0));
    if (!(gamma > 0.0)) {
      throw std::invalid_argument("no resonant channel: an explicit band window is required");
    }
    window = opts.window_linewidths * gamma;
  }
  if (!(window > 0.0)) throw std::invalid_argument("band window must be positive");
  if (!(opts.spacing_scale > 0.0 && opts.spacing_scale <= 1.0)) {
    throw std::invalid_argument("spacing scale must lie in (0, 1]");
  }

  KGrid grid;
  grid.band_window = window;
  for (const ModeIndex idx : modes) {
    ChannelGrid ch;
    ch.index = idx;
    ch.cutoff = cutoff_frequency(geom, idx);
    const double top = std::max(omega_a, ch.cutoff) + window;
    ch.k_max = wavenumber_at(geom, idx, top);

    // Slowest relevant group velocity: at omega_A when resonant, else at the top.
    const double v = group_velocity(geom, idx, ch.cutoff < omega_a ? omega_a : top);
    double dk = 2.0 * kPi / (v * kRecurrenceFactor * t_max);
    if (atom.z0() > 0.0) dk = std::min(dk, kPi / (8.0 * atom.z0()));
    dk *= opts.spacing_scale;
    const auto intervals = static_cast<std::size_t>(std::ceil(ch.k_max / dk));
    ch.dk = ch.k_max / static_cast<double>(intervals);

    ch.k.resize(intervals + 1);
    ch.weight.assign(intervals + 1, ch.dk);
    for (std::size_t i = 0; i <= intervals; ++i) ch.k[i] = ch.dk * static_cast<double>(i);
    ch.k.back() = ch.k_max;
    ch.weight.front() *= 0.5;
    ch.weight.back() *= 0.5;
    grid.channels.push_back(std::move(ch));
  }
  return grid;
}

KGrid build_kgrid(const WaveguideGeometry& geom, const AtomConfig& atom, double t_max,
                  const KGridOptions& opts) {
  std::vector<ModeIndex> modes;
  for (const auto& ch : enumerate_channels(geom, atom, 0.0)) modes.push_back(ch.index);
  if (modes.empty()) throw std::invalid_argument("no resonant channel for the default k grid");
  return build_kgrid(geom, atom, modes, t_max, opts);
}

double continuum_shift(const WaveguideGeometry& geom, const AtomConfig& atom, const KGrid& grid) {
  const double omega_a = atom.omega_a();
  const double c2 = geom.c() * geom.c();
  double shift = 0.0;
  for (const auto& ch : grid.channels) {
    const ModeIndex idx = ch.index;
    const double k_max = ch.k_max;
    auto plain = [&](double k) {
      return squared_coupling_avg(geom, atom, idx, k) / (omega_a - dispersion(geom, idx, k));
    };
    if (ch.cutoff >= omega_a || wavenumber_at(geom, idx, omega_a) >= k_max) {
      shift += 2.0 * quad::adaptive(plain, 0.0, k_max, 1e-12, 1e-300).value;
      continue;
    }
    // omega_A - omega(k) = -c^2 (k - k0)(k + k0) / (omega + omega_A), so the
    // integrand is smooth(k) / (k - k0); subtract the pole and add its log.
    const double k0 = wavenumber_at(geom, idx, omega_a);
    auto smooth = [&](double k) {
      const double omega = dispersion(geom, idx, k);
      return -squared_coupling_avg(geom, atom, idx, k) * (omega + omega_a) / (c2 * (k + k0));
    };
    const double at_pole = smooth(k0);
    auto regular = [&](double k) {
      return k == k0 ? 0.0 : (smooth(k) - at_pole) / (k - k0);
    };
    const double body = quad::adaptive(regular, 0.0, k0, 1e-12, 1e-300).value +
                        quad::adaptive(regular, k0, k_max, 1e-12, 1e-300).value;
    shift += 2.0 * (body + at_pole * std::log((k_max - k0) / k0));
  }
  return shift;
}

KspaceResult integrate_full(const WaveguideGeometry& geom, const AtomConfig& atom,
                            const KGrid& grid, double t_max, double step,
                            const KspaceOptions& opts) {
  if (!(t_max > 0.0)) throw std::invalid_argument("integrate_full needs t_max > 0");
  if (!(step > 0.0) || step > t_max) {
    throw std::invalid_argument("integrate_full needs 0 < step <= t_max");
  }
  if (grid.channels.empty()) throw std::invalid_argument("integrate_full needs a non-empty grid");
  if (opts.substeps < 0) throw std::invalid_argument("substeps must be non-negative");
  const double omega_a = atom.omega_a();
  // Guard-band check; the channels themselves come from the grid.
  (void)enumerate_channels(geom, atom);

  for (const auto& ch : grid.channels) {
    if (ch.k.size() != ch.weight.size() || ch.k.empty()) {
      throw std::invalid_argument("k grid nodes and weights differ in length");
    }
    if (ch.cutoff < omega_a) {
      const double v = group_velocity(geom, ch.index, omega_a);
      if (ch.dk > 0.0 && t_max > reliable_window(ch, v)) {
        throw RecurrenceHorizonExceeded("t_max = " + std::to_string(t_max) +
                                        " exceeds the k grid's recurrence window " +
                                        std::to_string(reliable_window(ch, v)));
      }
    }
  }

  KspaceResult result;
  if (opts.renormalize_frequency) result.frequency_shift = continuum_shift(geom, atom, grid);

  Arrowhead ham;
  ham.atom_detuning = -result.frequency_shift;
  std::vector<std::size_t> offsets{0};
  for (const auto& ch : grid.channels) {
    for (std::size_t i = 0; i < ch.k.size(); ++i) {
      ham.detuning.push_back(dispersion(geom, ch.index, ch.k[i]) - omega_a);
      ham.coupling.push_back(std::sqrt(2.0 * ch.weight[i]) *
                             coupling_strength_at_k(geom, atom, ch.index, ch.k[i]));
    }
    offsets.push_back(ham.detuning.size());
  }

  int substeps = opts.substeps;
  if (substeps == 0) {
    substeps = std::max(1, static_cast<int>(std::ceil(step * ham.max_detuning() / kPhaseStep)));
  }
  const double h = step / substeps;

  // (2,2) Pade of exp(z), z = -i h H, as two unitary factors
  // (z + conj(p)) / (z - p) with p = 3 +/- i sqrt(3).
  const double r3 = std::sqrt(3.0);
  const cplx poles[2] = {{3.0, r3}, {3.0, -r3}};

  cplx atom_amp{1.0, 0.0};
  std::vector<cplx> field(ham.detuning.size(), cplx{});

  const auto steps = static_cast<std::size_t>(std::floor(t_max / step * (1.0 + 1e-12)));
  AmplitudeTrace& trace = result.trace;
  trace.times.reserve(steps + 1);
  trace.amplitudes.reserve(steps + 1);
  trace.times.push_back(0.0);
  trace.amplitudes.push_back(atom_amp);

  for (std::size_t n = 1; n <= steps; ++n) {
    for (int s = 0; s < substeps; ++s) {
      for (const cplx& p : poles) {
        const cplx sigma = cplx{0.0, 1.0} * p / h;
        const cplx scale = cplx{0.0, 6.0 / h};
        ham.apply_resolvent_update(sigma, scale, atom_amp, field);
      }
      double norm = std::norm(atom_amp);
      for (const cplx& x : field) norm += std::norm(x);
      const double err = std::abs(norm - 1.0);
      result.max_norm_error = std::max(result.max_norm_error, err);
      if (err > opts.norm_tolerance) {
        throw NormDrift("k-space norm drifted by " + std::to_string(err));
      }
    }
    trace.times.push_back(static_cast<double>(n) * step);
    trace.amplitudes.push_back(atom_amp);
  }

  result.final_state.atom_amplitude = atom_amp;
  for (std::size_t c = 0; c + 1 < offsets.size(); ++c) {
    result.final_state.field_amplitudes.emplace_back(field.begin() + offsets[c],
                                                     field.begin() + offsets[c + 1]);
  }
  trace.metadata["engine"] = "kspace";
  trace.metadata["grid_points"] = std::to_string(grid.size());
  trace.metadata["substeps"] = std::to_string(substeps);
  return result;
}

std::complex<double> memory_kernel(const WaveguideGeometry& geom, const AtomConfig& atom,
                                   const KGrid& grid, double tau) {
  if (!(tau >= 0.0)) throw std::invalid_argument("memory kernel needs tau >= 0");
  cplx sum{};
  for (const auto& ch : grid.channels) {
    for (std::size_t i = 0; i < ch.k.size(); ++i) {
      const double g = coupling_strength_at_k(geom, atom, ch.index, ch.k[i]);
      sum += 2.0 * ch.weight[i] * g * g *
             std::polar(1.0, -dispersion(geom, ch.index, ch.k[i]) * tau);
    }
  }
  return sum;
}

}  // namespace wgqed
