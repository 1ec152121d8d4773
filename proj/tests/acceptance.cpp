// Acceptance criteria: one PASS/FAIL line each, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "wgqed/dde.hpp"
#include "wgqed/errors.hpp"
#include "wgqed/kspace.hpp"
#include "wgqed/markov.hpp"
#include "wgqed/scenario.hpp"

using namespace wgqed;
using cplx = std::complex<double>;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;
const WaveguideGeometry kGuide{2.0, 1.0};

int failures = 0;

void verdict(int id, bool ok, const std::string& what, const std::string& detail) {
  std::printf("%s criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

ScenarioConfig delayed(const MidbandBetween& band, double gamma_tau, double phase, double gt_max) {
  ScenarioConfig cfg;
  cfg.omega_mode = band;
  cfg.z0_mode = ByGammaTau{gamma_tau, phase};
  cfg.t_max_gamma = gt_max;
  return cfg;
}

const MidbandBetween kLow{{1, 1}, {3, 1}};
const MidbandBetween kHigh{{3, 1}, {5, 1}};

AmplitudeTrace dde_trace(const ResolvedScenario& r) { return solve_dde({r.channels, r.t_max, r.step}); }

double revival_peak(const AmplitudeTrace& tr, double lo, double hi) {
  double best = -1.0;
  for (std::size_t i = 1; i + 1 < tr.size(); ++i) {
    if (tr.times[i] <= lo || tr.times[i] >= hi) continue;
    const double a = std::abs(tr.amplitudes[i]);
    if (a >= std::abs(tr.amplitudes[i - 1]) && a >= std::abs(tr.amplitudes[i + 1])) {
      best = std::max(best, a);
    }
  }
  return best;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void criterion1() {
  double worst = 0.0;
  for (double phase : {0.0, kPi / 2.0, kPi, 2.2}) {
    const auto r = resolve(delayed(kLow, 1.0, phase, 1.0));
    const auto tr = dde_trace(r);
    const double tau = r.channels.front().delay;
    for (std::size_t i = 0; i < tr.size(); ++i) {
      if (tr.times[i] > tau) break;
      worst = std::max(worst, std::abs(tr.amplitudes[i] - std::exp(-r.gamma1 * tr.times[i])));
    }
  }
  verdict(1, worst < 1e-9, "solve_dde equals exp(-Gamma t) before the first echo",
          "max error " + sci(worst) + " < 1e-9");
}

void criterion2() {
  double worst = 0.0;
  for (double gt : {0.1, 1.0, 10.0}) {
    for (double phase : {0.0, kPi / 2.0, kPi}) {
      const auto r = resolve(delayed(kLow, gt, phase, 10.0));
      const auto tr = dde_trace(r);
      const auto& ch = r.channels.front();
      for (std::size_t i = 0; i < tr.size(); ++i) {
        const double t = tr.times[i];
        const cplx s = series_single_mode(ch.rate, ch.phase, ch.delay, t, series_terms_needed(t, ch.delay));
        worst = std::max(worst, std::abs(tr.amplitudes[i] - s));
      }
    }
  }
  verdict(2, worst < 1e-8, "stepper matches the series on the 3x3 (Gamma tau, phi) matrix",
          "max deviation " + sci(worst) + " < 1e-8");
}

void criterion3() {
  ModeChannel ch;
  ch.rate = 1.0;
  ch.phase = kPi;
  ch.delay = 0.0;
  const auto tr = solve_dde({{ch}, 10.0, default_step(std::vector{ch})});
  double worst = 0.0;
  for (const auto& a : tr.amplitudes) worst = std::max(worst, std::abs(std::abs(a) - 1.0));

  ScenarioConfig quarter;
  quarter.z0_mode = FractionOfWavelength{0.25};
  const auto r = resolve(quarter);
  const double rate = golden_rule_rate(r.geometry, r.atom).rate / r.gamma1;
  verdict(3, worst < 1e-12 && std::abs(rate) < 1e-12,
          "complete suppression at phi = pi with zero delay",
          "| |e|-1 | max " + sci(worst) + ", R/Gamma_1 at lambda/4 " + sci(rate) + ", both < 1e-12");
}

void criterion4() {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> frac(0.05, 0.95);
  std::uniform_real_distribution<double> zdist(0.0, 5.0);
  const double o11 = cutoff_frequency(kGuide, {1, 1});
  const double o31 = cutoff_frequency(kGuide, {3, 1});
  const double o51 = cutoff_frequency(kGuide, {5, 1});
  double worst = 0.0;
  int configs = 0, singles = 0, multiples = 0;
  for (int attempt = 0; configs < 20 && attempt < 1000; ++attempt) {
    const bool upper = configs % 2 == 1;
    const double lo = upper ? o31 : o11;
    const double hi = upper ? o51 : o31;
    const double w = lo + (hi - lo) * frac(rng);
    const AtomConfig atom(w, 0.3, frac(rng) * kGuide.a(), frac(rng) * kGuide.b(), zdist(rng));
    std::vector<ModeChannel> chans;
    try {
      chans = enumerate_channels(kGuide, atom);
    } catch (const AtCutoffSingularity&) {
      continue;
    }
    if (chans.empty()) continue;
    double expected = 0.0;
    for (const auto& c : chans) expected += 2.0 * c.rate * (1.0 + std::cos(c.phase));
    const double rate = golden_rule_rate(kGuide, atom).rate;
    worst = std::max(worst, std::abs(rate - expected) / expected);
    (chans.size() == 1 ? singles : multiples)++;
    ++configs;
  }
  verdict(4, configs == 20 && singles > 0 && multiples > 0 && worst < 1e-10,
          "golden rule equals sum 2 Gamma_j (1 + cos phi_j)",
          std::to_string(singles) + " one-channel and " + std::to_string(multiples) +
              " multi-channel configs, max rel error " + sci(worst) + " < 1e-10");
}

void criterion5() {
  const auto r = resolve(delayed(kHigh, 1.0, kPi / 3.0, 0.5));
  const auto tr = dde_trace(r);
  const double tau1 = r.channels[0].delay;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const double t = tr.times[i];
    if (t > 0.5 * tau1 * (1.0 + 1e-12)) break;
    const double y = std::log(std::abs(tr.amplitudes[i]));
    sx += t; sy += y; sxx += t * t; sxy += t * y;
    ++n;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double expected = r.channels[0].rate + r.channels[1].rate;
  const double rel = std::abs(-slope / expected - 1.0);
  verdict(5, r.channels.size() == 2 && rel < 5e-3, "two-channel initial decay rate is Gamma + Gamma_2",
          "fitted " + sci(-slope) + " vs " + sci(expected) + ", rel gap " + sci(rel) + " < 5e-3");
}

void criterion6() {
  std::vector<double> heights;
  bool all_have_peak = true;
  for (double phase : {0.0, kPi / 2.0, kPi}) {
    const auto r = resolve(delayed(kLow, 10.0, phase, 20.0));
    const auto tr = dde_trace(r);
    const double tau = r.channels[0].delay;
    const double h = revival_peak(tr, tau, 2.0 * tau);
    all_have_peak = all_have_peak && h > 0.0;
    heights.push_back(h);
  }
  double spread = 0.0;
  for (double h : heights) spread = std::max(spread, std::abs(h - heights[0]));

  const auto single = resolve(delayed(kLow, 10.0, 0.0, 20.0));
  const auto two = resolve(delayed(kHigh, 10.0, 0.0, 20.0));
  const double p1 = revival_peak(dde_trace(single), single.channels[0].delay, 2.0 * single.channels[0].delay);
  const double p2 = revival_peak(dde_trace(two), two.channels[0].delay, 2.0 * two.channels[0].delay);
  const bool lower = p2 >= 0.0 && p2 < p1;

  verdict(6, all_have_peak && spread < 1e-10 && lower,
          "revival at Gamma tau_1 = 10: peak present, phase independent, lower with two modes",
          std::string("peak in (tau,2tau) ") + (all_have_peak ? "yes" : "no") +
              "; height spread across phi " + sci(spread) + " (tolerance 1e-10; e^{-Gamma tau} = " +
              sci(std::exp(-10.0)) + ")" + "; two-mode peak " + sci(p2) + " < single " + sci(p1));
}

struct KspaceRun {
  double deviation = 0.0;
  double norm_error = 0.0;
};

KspaceRun kspace_vs_dde(double band_fraction, double gamma1, double gamma_tau, double gt_max) {
  const double o11 = cutoff_frequency(kGuide, {1, 1});
  const double o31 = cutoff_frequency(kGuide, {3, 1});
  ScenarioConfig cfg;
  cfg.omega_mode = AbsoluteFrequency{o11 + band_fraction * (o31 - o11)};
  cfg.z0_mode = ByGammaTau{gamma_tau, kPi / 2.0};
  cfg.gamma1 = gamma1;
  cfg.t_max_gamma = gt_max;
  const auto r = resolve(cfg);
  const auto d = dde_trace(r);
  const KGrid grid = build_kgrid(r.geometry, r.atom, r.t_max);
  const auto k = integrate_full(r.geometry, r.atom, grid, r.t_max, r.step);
  KspaceRun out;
  out.norm_error = k.max_norm_error;
  for (std::size_t i = 0; i < d.size(); ++i) {
    out.deviation = std::max(out.deviation, std::abs(d.amplitudes[i] - k.trace.amplitudes[i]));
  }
  return out;
}

void criterion7and8() {
  const double gamma1 = ScenarioConfig{}.gamma1;
  const auto mid = kspace_vs_dde(0.5, gamma1, 1.0, 6.0);
  std::vector<double> trend;
  double norm_error = mid.norm_error;
  std::string listing;
  for (double f : {0.15, 0.25, 0.35, 0.5}) {
    const auto run = f == 0.5 ? mid : kspace_vs_dde(f, gamma1, 1.0, 6.0);
    trend.push_back(run.deviation);
    norm_error = std::max(norm_error, run.norm_error);
    listing += (listing.empty() ? "" : ", ") + sci(run.deviation);
  }
  bool monotone = true;
  for (std::size_t i = 1; i < trend.size(); ++i) monotone = monotone && trend[i] < trend[i - 1];
  verdict(7, mid.deviation < 2e-2 && monotone,
          "k-space agrees with the delay equation at mid-band and improves toward it",
          "mid-band deviation " + sci(mid.deviation) + " < 2e-2 at Gamma_1 = " + sci(gamma1) +
              "; band fractions 0.15..0.5: " + listing);

  // two-channel case as well
  ScenarioConfig two;
  two.omega_mode = kHigh;
  two.z0_mode = ByGammaTau{1.0, 0.0};
  two.t_max_gamma = 6.0;
  const auto r = resolve(two);
  const auto k = integrate_full(r.geometry, r.atom, build_kgrid(r.geometry, r.atom, r.t_max), r.t_max, r.step);
  norm_error = std::max(norm_error, k.max_norm_error);
  verdict(8, norm_error < 1e-8, "k-space conserves the single-excitation norm",
          "max |norm - 1| over every step " + sci(norm_error) + " < 1e-8");
}

void criterion9() {
  const double w = 4.5;
  const double gamma = 0.005;
  const double U = 640.0 * kPi;
  double worst = 0.0;
  for (double gt : {0.1, 1.0, 10.0}) {
    const double t = gt / gamma;
    const double half = 2.0 * U / t;
    const double panel = 2.0 * kPi / t;
    const int panels = static_cast<int>(std::lround(2.0 * half / panel));
    double sum = 0.0;
    for (int i = 0; i < panels; ++i) {
      const double lo = w - half + i * panel;
      sum += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
          [&](double x) { return modulation_spectrum(t, x, w); }, lo, lo + panel, 0, 1e-14);
    }
    // closed-form sinc^2 tails beyond |u| = U
    worst = std::max(worst, std::abs(sum + 1.0 / (kPi * U) - 1.0));
  }

  ScenarioConfig cfg;
  cfg.z0_mode = FractionOfWavelength{0.1};
  const auto r = resolve(cfg);
  const double golden = golden_rule_rate(r.geometry, r.atom).rate;
  const double gap = std::abs(finite_time_rate(r.geometry, r.atom, 50.0 / r.gamma1) / golden - 1.0);
  verdict(9, worst < 1e-8 && gap < 1e-2, "modulation spectrum normalised; finite-time rate reaches the golden rule",
          "normalisation error " + sci(worst) + " < 1e-8; rel gap at Gamma t = 50 " + sci(gap) + " < 1e-2");
}

void criterion10() {
  const fs::path root = fs::temp_directory_path() / "wgqed_acceptance_presets";
  fs::remove_all(root);
  int traces = 0;
  bool ok = true;
  std::string problem;
  for (const auto& name : preset_names()) {
    for (auto cfg : preset(name)) {
      cfg.output_directory = (root / "first").string();
      const auto out = run_scenario(cfg);
      std::ifstream is(out.csv);
      std::string line;
      std::getline(is, line);
      bool schema = line == "t_gamma,re,im,abs,prob";
      double prev = -1.0;
      std::size_t rows = 0;
      while (schema && std::getline(is, line)) {
        std::vector<double> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(std::stod(cell));
        schema = f.size() == 5 && f[0] > prev && std::abs(f[4] - f[3] * f[3]) <= 1e-15;
        prev = f.empty() ? prev : f[0];
        ++rows;
      }
      schema = schema && rows == out.trace.size() && rows > 1;

      ScenarioConfig again = load_config(out.manifest);
      again.output_directory = (root / "second").string();
      const auto rerun = run_scenario(again);
      const bool same = slurp(out.csv) == slurp(rerun.csv);
      if (!schema || !same) {
        ok = false;
        problem += " " + cfg.trace_name + (schema ? "" : "[schema]") + (same ? "" : "[rerun]");
      }
      ++traces;
    }
  }
  fs::remove_all(root);
  verdict(10, ok, "presets fig2a-fig5b regenerate schema-valid, byte-reproducible CSV",
          std::to_string(traces) + " traces" + (ok ? "" : ", failing:" + problem));
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();
  // an exception fails every criterion the function reports on
  auto guarded = [](std::initializer_list<int> ids, void (*fn)()) {
    try {
      fn();
    } catch (const std::exception& e) {
      for (int id : ids) verdict(id, false, "raised an exception", e.what());
    }
  };
  guarded({1}, criterion1);
  guarded({2}, criterion2);
  guarded({3}, criterion3);
  guarded({4}, criterion4);
  guarded({5}, criterion5);
  guarded({6}, criterion6);
  guarded({7, 8}, criterion7and8);
  guarded({9}, criterion9);
  guarded({10}, criterion10);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%d criteria failed, %.1f s\n", failures, secs);
  return failures == 0 ? 0 : 1;
}
