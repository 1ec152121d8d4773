#pragma once

// Retarded dynamics of the atom in front of the mirror:
//
//   d/dt e(t) = - sum_j Gamma_j [ e(t) + exp(i phi_j) e(t - tau_j) Theta(t - tau_j) ]
//
// integrated by the method of steps, together with closed-form series that
// serve as independent oracles.

#include <complex>
#include <span>
#include <vector>

#include "wgqed/trace.hpp"
#include "wgqed/waveguide.hpp"

namespace wgqed {

struct DdeProblem {
  std::vector<ModeChannel> channels;  // only rate, phase and delay are used
  double t_max = 0.0;
  double step = 0.0;
  std::complex<double> initial_amplitude{1.0, 0.0};
};

/// min(tau_min / 64, 0.01 / Gamma_total), shrunk so that tau_min is an exact
/// multiple of the step. Channels with zero delay do not constrain it.
[[nodiscard]] double default_step(std::span<const ModeChannel> channels);

/// Classical RK4 on a uniform grid, with extra nodes at every delay
/// breakpoint (sums of up to four delays) so no step straddles a kink. The
/// history e(t - tau_j) comes from cubic Lagrange interpolation of stored
/// nodes that never spans a kink. Delays within 1e-9 steps of a grid multiple
/// are snapped onto the grid. A zero delay folds into the instantaneous term.
///
/// Returns the amplitude on the uniform grid t_i = i * step, t_i <= t_max.
/// Throws StepTooLarge when step > tau_min / 10 and NormViolation when
/// |e| > 1 + 1e-6.
[[nodiscard]] AmplitudeTrace solve_dde(const DdeProblem& problem);

/// Smallest term count that makes the single-delay series exact at time t.
[[nodiscard]] int series_terms_needed(double t, double delay);

/// e(t) = sum_l (-Gamma e^{i phi})^l / l! * e^{-Gamma (t - l tau)} (t - l tau)^l Theta(t - l tau).
/// Terms are formed in log magnitude so large Gamma t does not overflow.
/// delay == 0 returns the summed exponential exp[-Gamma (1 + e^{i phi}) t].
[[nodiscard]] std::complex<double> series_single_mode(double gamma, double phase, double delay,
                                                      double t, int terms);

/// Two channels with tau_1 -> 0: the first channel only renormalises the
/// instantaneous rate to Gamma_1 (1 + e^{i phi_1}) + Gamma_2.
[[nodiscard]] std::complex<double> series_two_mode_tau1_zero(double gamma1, double phase1,
                                                             double gamma2, double phase2,
                                                             double delay2, double t, int terms);

enum class DelayRegime { AllDelaysZero, AllDelaysInfinite };

/// AllDelaysZero: exp[-sum Gamma_j (1 + e^{i phi_j}) t] (Markov limit).
/// AllDelaysInfinite: exp[-sum Gamma_j t] (mirror never seen).
[[nodiscard]] std::complex<double> limiting_amplitude(std::span<const ModeChannel> channels,
                                                      DelayRegime regime, double t);

}  // namespace wgqed
