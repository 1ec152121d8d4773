#include "wgqed/dde.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "wgqed/errors.hpp"

namespace wgqed {

namespace {

using cplx = std::complex<double>;

constexpr double kAlignTolerance = 1e-9;  // in units of the step
constexpr int kStepBreakpointOrder = 4;
constexpr int kStencilBreakpointOrder = 3;
constexpr double kNormLimit = 1.0 + 1e-6;

struct DelayedTerm {
  cplx coefficient;  // Gamma_j e^{i phi_j}
  double delay;
};

struct Breakpoint {
  double time;
  int order;  // number of delays summed
};

// All sums of 1..max_order delays that fall inside (0, t_end].
std::vector<Breakpoint> delay_breakpoints(const std::vector<double>& delays, double t_end,
                                          int max_order) {
  std::vector<Breakpoint> out;
  std::vector<Breakpoint> level{{0.0, 0}};
  for (int order = 1; order <= max_order; ++order) {
    std::vector<Breakpoint> next;
    for (const auto& bp : level) {
      for (double d : delays) {
        const double t = bp.time + d;
        if (t <= t_end * (1.0 + 1e-12)) next.push_back({t, order});
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    level = std::move(next);
    if (level.empty()) break;
  }
  std::sort(out.begin(), out.end(), [](const Breakpoint& a, const Breakpoint& b) {
    return a.time < b.time || (a.time == b.time && a.order < b.order);
  });
  return out;
}

cplx lagrange(std::span<const double> xs, std::span<const cplx> ys, double x) {
  cplx sum{};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double w = 1.0;
    for (std::size_t j = 0; j < xs.size(); ++j) {
      if (j != i) w *= (x - xs[j]) / (xs[i] - xs[j]);
    }
    sum += w * ys[i];
  }
  return sum;
}

class MethodOfSteps {
 public:
  MethodOfSteps(const DdeProblem& problem) : step_(problem.step) {
    for (const auto& ch : problem.channels) {
      const cplx coefficient = ch.rate * std::polar(1.0, ch.phase);
      instantaneous_ += ch.rate;
      if (ch.delay == 0.0) {
        instantaneous_ += coefficient;
      } else {
        double delay = ch.delay;
        const double ratio = delay / step_;
        if (std::abs(ratio - std::round(ratio)) < kAlignTolerance) delay = std::round(ratio) * step_;
        delayed_.push_back({coefficient, delay});
      }
    }

    grid_points_ = static_cast<std::size_t>(std::floor(problem.t_max / step_ + kAlignTolerance)) + 1;
    const double t_end = static_cast<double>(grid_points_ - 1) * step_;

    std::vector<double> delays;
    for (const auto& term : delayed_) delays.push_back(term.delay);
    const auto breakpoints = delay_breakpoints(delays, t_end, kStepBreakpointOrder);

    // Node times: the uniform grid plus off-grid breakpoints.
    std::vector<double> extra;
    pieces_.push_back(0.0);
    for (const auto& bp : breakpoints) {
      const double ratio = bp.time / step_;
      const double snapped = std::abs(ratio - std::round(ratio)) < kAlignTolerance
                                 ? std::round(ratio) * step_
                                 : bp.time;
      if (snapped != std::round(ratio) * step_) extra.push_back(snapped);
      if (bp.order <= kStencilBreakpointOrder) pieces_.push_back(snapped);
    }
    std::sort(pieces_.begin(), pieces_.end());
    pieces_.erase(std::unique(pieces_.begin(), pieces_.end()), pieces_.end());
    std::sort(extra.begin(), extra.end());
    extra.erase(std::unique(extra.begin(), extra.end()), extra.end());

    times_.reserve(grid_points_ + extra.size());
    grid_nodes_.reserve(grid_points_);
    std::size_t e = 0;
    for (std::size_t i = 0; i < grid_points_; ++i) {
      const double t = static_cast<double>(i) * step_;
      while (e < extra.size() && extra[e] < t) {
        if (extra[e] > 0.0) times_.push_back(extra[e]);
        ++e;
      }
      while (e < extra.size() && extra[e] == t) ++e;
      grid_nodes_.push_back(times_.size());
      times_.push_back(t);
    }
    values_.reserve(times_.size());
    values_.push_back(problem.initial_amplitude);
  }

  AmplitudeTrace run() {
    for (std::size_t i = 0; i + 1 < times_.size(); ++i) advance(i);
    AmplitudeTrace trace;
    trace.times.reserve(grid_points_);
    trace.amplitudes.reserve(grid_points_);
    for (std::size_t node : grid_nodes_) {
      trace.times.push_back(times_[node]);
      trace.amplitudes.push_back(values_[node]);
    }
    return trace;
  }

 private:
  // Forcing sum_j Gamma_j e^{i phi_j} e(t - tau_j) at the three RK4 stage times.
  struct Forcing {
    cplx start{}, mid{}, end{};
  };

  Forcing delayed_forcing(std::size_t node, double t0, double t1) const {
    Forcing f;
    const double tm = 0.5 * (t0 + t1);
    for (const auto& term : delayed_) {
      const double s_mid = tm - term.delay;
      // The sign of t - tau_j is fixed inside a step because tau_j is a node.
      if (s_mid <= 0.0) continue;
      const auto piece = std::upper_bound(pieces_.begin(), pieces_.end(), s_mid);
      const double piece_lo = *(piece - 1);
      const double piece_hi = piece == pieces_.end() ? std::numeric_limits<double>::infinity()
                                                      : *piece;
      f.start += term.coefficient * history(node, t0 - term.delay, piece_lo, piece_hi);
      f.mid += term.coefficient * history(node, tm - term.delay, piece_lo, piece_hi);
      f.end += term.coefficient * history(node, t1 - term.delay, piece_lo, piece_hi);
    }
    return f;
  }

  // Cubic interpolation of the stored solution at s, using only nodes inside
  // the smooth piece [piece_lo, piece_hi] that are already computed.
  cplx history(std::size_t current, double s, double piece_lo, double piece_hi) const {
    const auto first = times_.begin();
    const auto known_end = first + static_cast<std::ptrdiff_t>(current) + 1;
    const auto lo_it = std::lower_bound(first, known_end, piece_lo);
    auto hi_it = std::upper_bound(lo_it, known_end, piece_hi);
    const std::size_t lo = static_cast<std::size_t>(lo_it - first);
    const std::size_t hi = static_cast<std::size_t>(hi_it - first);  // one past last
    if (hi <= lo) throw std::logic_error("empty history stencil");

    std::size_t k = static_cast<std::size_t>(std::upper_bound(first, known_end, s) - first);
    k = (k == 0) ? 0 : k - 1;  // node at or before s

    // Greedy nearest-first choice of up to four nodes. Off-grid breakpoint
    // nodes can sit arbitrarily close to grid nodes; keeping a minimum spacing
    // avoids ill-conditioned Lagrange weights.
    const std::size_t cand_lo = (k >= lo + 4) ? k - 4 : lo;
    const std::size_t cand_hi = std::min(hi, k + 6);
    std::array<std::size_t, 10> candidates{};
    std::size_t count = 0;
    for (std::size_t j = cand_lo; j < cand_hi && count < candidates.size(); ++j) {
      candidates[count++] = j;
    }
    std::sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(count),
              [&](std::size_t a, std::size_t b) {
                return std::abs(times_[a] - s) < std::abs(times_[b] - s);
              });
    std::array<double, 4> xs{};
    std::array<cplx, 4> ys{};
    std::size_t width = 0;
    const double min_spacing = 0.25 * step_;
    for (std::size_t c = 0; c < count && width < 4; ++c) {
      const double t = times_[candidates[c]];
      bool crowded = false;
      for (std::size_t w = 0; w < width; ++w) crowded = crowded || std::abs(xs[w] - t) < min_spacing;
      if (crowded) continue;
      xs[width] = t;
      ys[width] = values_[candidates[c]];
      ++width;
    }
    return lagrange(std::span(xs).first(width), std::span(ys).first(width), s);
  }

  void advance(std::size_t i) {
    const double t0 = times_[i];
    const double t1 = times_[i + 1];
    const double h = t1 - t0;
    const cplx y = values_[i];
    const Forcing f = delayed_forcing(i, t0, t1);
    auto rhs = [&](cplx state, cplx forcing) { return -instantaneous_ * state - forcing; };

    const cplx k1 = rhs(y, f.start);
    const cplx k2 = rhs(y + 0.5 * h * k1, f.mid);
    const cplx k3 = rhs(y + 0.5 * h * k2, f.mid);
    const cplx k4 = rhs(y + h * k3, f.end);
    const cplx next = y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!(std::abs(next) <= kNormLimit)) {
      throw NormViolation("|amplitude| = " + std::to_string(std::abs(next)) + " at t = " +
                          std::to_string(t1) + "; the step is too coarse for these rates");
    }
    values_.push_back(next);
  }

  double step_;
  cplx instantaneous_{};
  std::vector<DelayedTerm> delayed_;
  std::vector<double> pieces_;  // kink locations of the solution, including 0
  std::vector<double> times_;
  std::vector<cplx> values_;
  std::vector<std::size_t> grid_nodes_;
  std::size_t grid_points_ = 0;
};

double min_positive_delay(std::span<const ModeChannel> channels) {
  double tau = std::numeric_limits<double>::infinity();
  for (const auto& ch : channels) {
    if (ch.delay > 0.0) tau = std::min(tau, ch.delay);
  }
  return tau;
}

}  // namespace

double default_step(std::span<const ModeChannel> channels) {
  double gamma_total = 0.0;
  for (const auto& ch : channels) gamma_total += ch.rate;
  const double tau_min = min_positive_delay(channels);
  const double decay_step = gamma_total > 0.0 ? 0.01 / gamma_total : 0.01;
  if (!std::isfinite(tau_min)) return decay_step;
  const double per_delay = std::max(64.0, std::ceil(tau_min / decay_step));
  return tau_min / per_delay;
}

AmplitudeTrace solve_dde(const DdeProblem& problem) {
  if (problem.channels.empty()) throw std::invalid_argument("DDE problem has no channels");
  if (!(problem.step > 0.0) || !std::isfinite(problem.step)) {
    throw std::invalid_argument("DDE step must be positive");
  }
  if (!(problem.t_max >= 0.0) || !std::isfinite(problem.t_max)) {
    throw std::invalid_argument("DDE t_max must be non-negative");
  }
  if (std::abs(problem.initial_amplitude) > 1.0 + 1e-12) {
    throw std::invalid_argument("initial amplitude exceeds the single-excitation norm");
  }
  for (const auto& ch : problem.channels) {
    if (!(ch.rate >= 0.0) || !(ch.delay >= 0.0) || !std::isfinite(ch.phase)) {
      throw std::invalid_argument("channel needs rate >= 0, delay >= 0 and a finite phase");
    }
  }
  const double tau_min = min_positive_delay(problem.channels);
  if (std::isfinite(tau_min) && problem.step > tau_min / 10.0 * (1.0 + 1e-12)) {
    throw StepTooLarge("step " + std::to_string(problem.step) +
                       " exceeds a tenth of the shortest delay " + std::to_string(tau_min));
  }
  return MethodOfSteps(problem).run();
}

int series_terms_needed(double t, double delay) {
  if (!(delay > 0.0)) return 1;
  return static_cast<int>(std::floor(t / delay)) + 1;
}

namespace {

// sum_l c^l / l! e^{-lambda s_l} s_l^l with s_l = t - l tau, |c| = gamma.
cplx delayed_series(cplx lambda, double gamma, double phase, double delay, double t, int terms) {
  const int needed = series_terms_needed(t, delay);
  if (terms < needed) {
    throw std::invalid_argument("series needs at least " + std::to_string(needed) +
                                " terms at this time");
  }
  cplx sum = std::exp(-lambda * t);
  if (gamma == 0.0) return sum;
  const double step_phase = phase + std::numbers::pi;  // -c = gamma e^{i(phi + pi)}
  for (int l = 1; l < needed; ++l) {
    const double s = t - l * delay;
    if (s <= 0.0) break;
    const double log_mag =
        l * std::log(gamma * s) - std::lgamma(l + 1.0) - lambda.real() * s;
    sum += std::polar(std::exp(log_mag), l * step_phase - lambda.imag() * s);
  }
  return sum;
}

}  // namespace

std::complex<double> series_single_mode(double gamma, double phase, double delay, double t,
                                        int terms) {
  if (!(t >= 0.0)) throw std::invalid_argument("series needs t >= 0");
  if (!(delay >= 0.0)) throw std::invalid_argument("delay must be non-negative");
  if (!(gamma >= 0.0)) throw std::invalid_argument("rate must be non-negative");
  if (delay == 0.0) return std::exp(-gamma * (1.0 + std::polar(1.0, phase)) * t);
  return delayed_series(cplx{gamma, 0.0}, gamma, phase, delay, t, terms);
}

std::complex<double> series_two_mode_tau1_zero(double gamma1, double phase1, double gamma2,
                                               double phase2, double delay2, double t,
                                               int terms) {
  if (!(t >= 0.0)) throw std::invalid_argument("series needs t >= 0");
  if (!(delay2 >= 0.0)) throw std::invalid_argument("delay must be non-negative");
  if (!(gamma1 >= 0.0) || !(gamma2 >= 0.0)) {
    throw std::invalid_argument("rates must be non-negative");
  }
  const cplx lambda = gamma1 * (1.0 + std::polar(1.0, phase1)) + gamma2;
  if (delay2 == 0.0) return std::exp(-(lambda + gamma2 * std::polar(1.0, phase2)) * t);
  return delayed_series(lambda, gamma2, phase2, delay2, t, terms);
}

std::complex<double> limiting_amplitude(std::span<const ModeChannel> channels, DelayRegime regime,
                                        double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("limiting amplitude needs t >= 0");
  cplx exponent{};
  for (const auto& ch : channels) {
    exponent += ch.rate;
    if (regime == DelayRegime::AllDelaysZero) exponent += ch.rate * std::polar(1.0, ch.phase);
  }
  return std::exp(-exponent * t);
}

}  // namespace wgqed
