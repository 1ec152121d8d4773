#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "wgqed/errors.hpp"
#include "wgqed/waveguide.hpp"

using namespace wgqed;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double kPi = std::numbers::pi;

const WaveguideGeometry kGuide{2.0, 1.0};

AtomConfig centered(double omega_a, double z0 = 0.0, double kappa = 1.0) {
  return {omega_a, kappa, 1.0, 0.5, z0};
}

// Hand-built guide whose TM11 cutoff is exactly 3: pi sqrt(2)/a = 3 for a = b.
WaveguideGeometry cutoff_three() {
  const double side = kPi * std::sqrt(2.0) / 3.0;
  return {side, side};
}

}  // namespace

TEST_CASE("cutoff frequencies of the a = 2b guide") {
  CHECK_THAT(cutoff_frequency(kGuide, {1, 1}), WithinRel(kPi * std::sqrt(5.0) / 2.0, 1e-14));
  CHECK_THAT(cutoff_frequency(kGuide, {1, 1}), WithinAbs(3.5124, 5e-5));
  CHECK_THAT(cutoff_frequency(kGuide, {3, 1}), WithinRel(kPi * std::sqrt(13.0) / 2.0, 1e-14));
  CHECK_THAT(cutoff_frequency(kGuide, {3, 1}), WithinAbs(5.6636, 5e-5));
}

TEST_CASE("square guide cutoffs are symmetric in m and n") {
  const WaveguideGeometry square{1.3, 1.3};
  CHECK(cutoff_frequency(square, {1, 2}) == cutoff_frequency(square, {2, 1}));
}

TEST_CASE("dispersion and its inverse") {
  const auto g = cutoff_three();
  CHECK_THAT(cutoff_frequency(g, {1, 1}), WithinRel(3.0, 1e-14));
  CHECK_THAT(dispersion(g, {1, 1}, 0.0), WithinRel(3.0, 1e-14));
  CHECK_THAT(dispersion(g, {1, 1}, 4.0), WithinRel(5.0, 1e-14));
  CHECK_THAT(wavenumber_at(g, {1, 1}, 5.0), WithinRel(4.0, 1e-13));
  CHECK(wavenumber_at(g, {1, 1}, cutoff_frequency(g, {1, 1})) == 0.0);
  CHECK_THROWS_AS(wavenumber_at(g, {1, 1}, cutoff_frequency(g, {1, 1}) - 0.1), BelowCutoff);
}

TEST_CASE("group velocity limits") {
  const double cutoff = cutoff_frequency(kGuide, {1, 1});
  CHECK_THAT(group_velocity(kGuide, {1, 1}, std::sqrt(2.0) * cutoff),
             WithinRel(1.0 / std::sqrt(2.0), 1e-13));
  CHECK(group_velocity(kGuide, {1, 1}, cutoff * (1.0 + 1e-10)) < 1e-4);
  CHECK_THAT(group_velocity(kGuide, {1, 1}, 1e6 * cutoff), WithinRel(1.0, 1e-11));
  CHECK_THROWS_AS(group_velocity(kGuide, {1, 1}, cutoff), BelowCutoff);
}

TEST_CASE("density of states") {
  const auto g = cutoff_three();
  CHECK_THAT(density_of_states(g, {1, 1}, 5.0), WithinRel(1.25, 1e-13));
  const double cutoff = cutoff_frequency(kGuide, {1, 1});
  CHECK_THROWS_AS(density_of_states(kGuide, {1, 1}, cutoff), AtCutoffSingularity);
  CHECK_THROWS_AS(density_of_states(kGuide, {1, 1}, cutoff - 0.1), BelowCutoff);
  CHECK_THAT(density_of_states(kGuide, {1, 1}, 1e6 * cutoff), WithinRel(1.0, 1e-11));

  double previous = density_of_states(kGuide, {1, 1}, cutoff * (1.0 + 1e-8));
  CHECK(previous > 1e3);
  for (double f = 1e-6; f < 10.0; f *= 3.0) {
    const double rho = density_of_states(kGuide, {1, 1}, cutoff * (1.0 + f));
    CHECK(rho < previous);
    previous = rho;
  }
}

TEST_CASE("velocity times density of states is one") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> above(1e-6, 20.0);
  for (int i = 0; i < 200; ++i) {
    const ModeIndex idx{1 + i % 4, 1 + i % 3};
    const double omega = cutoff_frequency(kGuide, idx) * (1.0 + above(rng));
    CHECK_THAT(group_velocity(kGuide, idx, omega) * density_of_states(kGuide, idx, omega),
               WithinRel(1.0, 1e-12));
  }
}

TEST_CASE("coupling selection rules and zeros") {
  const double omega = 6.0;
  // centred atom: even m decouples
  for (int n = 1; n <= 3; ++n) {
    const double above = 1.1 * cutoff_frequency(kGuide, {2, n});
    CHECK(coupling_strength(kGuide, centered(above), {2, n}, above) < 1e-15);
  }
  const double k = wavenumber_at(kGuide, {1, 1}, omega);
  const double node = kPi / (2.0 * k);
  CHECK(coupling_strength(kGuide, centered(omega, node), {1, 1}, omega) < 1e-15);

  // z0 = 0 gives the largest value: kappa Omega^2 S^2 / (pi omega)
  const double cutoff = cutoff_frequency(kGuide, {1, 1});
  const double expected = std::sqrt(cutoff * cutoff / (kPi * omega));
  CHECK_THAT(coupling_strength(kGuide, centered(omega), {1, 1}, omega), WithinRel(expected, 1e-13));
  for (double z : {0.1, 0.37, 1.9}) {
    CHECK(coupling_strength(kGuide, centered(omega, z), {1, 1}, omega) <= expected);
  }
}

TEST_CASE("coupling magnitude is mirror symmetric in x0") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> frac(0.01, 0.99);
  for (int i = 0; i < 100; ++i) {
    const double x0 = frac(rng) * kGuide.a();
    const double y0 = frac(rng) * kGuide.b();
    const double z0 = frac(rng);
    const AtomConfig left(8.0, 0.7, x0, y0, z0);
    const AtomConfig right(8.0, 0.7, kGuide.a() - x0, y0, z0);
    for (ModeIndex idx : {ModeIndex{1, 1}, ModeIndex{2, 1}, ModeIndex{3, 1}, ModeIndex{1, 2}}) {
      CHECK_THAT(coupling_strength(kGuide, left, idx, 8.0),
                 WithinAbs(coupling_strength(kGuide, right, idx, 8.0), 1e-13));
    }
  }
}

TEST_CASE("channel enumeration in the a = 2b guide") {
  const double o11 = cutoff_frequency(kGuide, {1, 1});
  const double o31 = cutoff_frequency(kGuide, {3, 1});
  const double o51 = cutoff_frequency(kGuide, {5, 1});

  const auto low = enumerate_channels(kGuide, centered(0.5 * (o11 + o31), 0.3));
  REQUIRE(low.size() == 1);
  CHECK(low[0].index == ModeIndex{1, 1});

  const auto high = enumerate_channels(kGuide, centered(0.5 * (o31 + o51), 0.3));
  REQUIRE(high.size() == 2);
  CHECK(high[0].index == ModeIndex{1, 1});
  CHECK(high[1].index == ModeIndex{3, 1});
  CHECK(high[0].delay < high[1].delay);

  CHECK(enumerate_channels(kGuide, centered(0.9 * o11, 0.3)).empty());
  CHECK_THROWS_AS(enumerate_channels(kGuide, centered(o31 * (1.0 + 1e-4), 0.3)),
                  AtCutoffSingularity);
  CHECK_NOTHROW(enumerate_channels(kGuide, centered(o31 * (1.0 + 1e-4), 0.3), 1e-5));
}

TEST_CASE("channel parameters match their closed forms") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> omega_dist(4.0, 14.0);
  std::uniform_real_distribution<double> z_dist(0.0, 3.0);
  std::uniform_real_distribution<double> kappa_dist(0.01, 2.0);
  int checked = 0;
  for (int i = 0; i < 50; ++i) {
    const AtomConfig atom = centered(omega_dist(rng), z_dist(rng), kappa_dist(rng));
    std::vector<ModeChannel> channels;
    try {
      channels = enumerate_channels(kGuide, atom);
    } catch (const AtCutoffSingularity&) {
      continue;
    }
    double previous_cutoff = 0.0;
    for (const auto& ch : channels) {
      CHECK(ch.cutoff > previous_cutoff);
      previous_cutoff = ch.cutoff;
      CHECK(ch.index.m % 2 == 1);
      CHECK(ch.index.n % 2 == 1);

      const double w = atom.omega_a();
      CHECK_THAT(dispersion(kGuide, ch.index, ch.k0), WithinRel(w, 1e-12));
      const double v = std::sqrt(w * w - ch.cutoff * ch.cutoff) / w;
      const double s2 = 1.0;  // sin^2(m pi/2) sin^2(n pi/2) for odd m, n
      CHECK_THAT(ch.rate, WithinRel(atom.dipole_scale() * ch.cutoff * ch.cutoff * s2 / (w * v), 1e-12));
      CHECK_THAT(ch.delay, WithinRel(2.0 * atom.z0() / v, 1e-12));
      CHECK_THAT(ch.phase, WithinAbs(2.0 * ch.k0 * atom.z0(), 1e-12 * (1.0 + ch.phase)));
      ++checked;
    }
  }
  CHECK(checked > 40);
}

TEST_CASE("lowest channel rate equals the golden-rule prefactor pi G") {
  // Gamma = pi |g(omega_A)|^2 rho(omega_A) with cos = 1 and both directions.
  const double omega = 4.6;
  const AtomConfig atom = centered(omega, 0.0, 0.37);
  const auto ch = enumerate_channels(kGuide, atom).front();
  const double g = coupling_strength(kGuide, atom, {1, 1}, omega);
  const double rho = density_of_states(kGuide, {1, 1}, omega);
  CHECK_THAT(ch.rate, WithinRel(kPi * g * g * rho, 1e-12));
}

TEST_CASE("coupled mode search is complete") {
  const AtomConfig atom(20.0, 1.0, 0.3, 0.41, 0.0);
  const auto modes = coupled_modes(kGuide, atom, 20.0);
  int brute = 0;
  for (int m = 1; m < 40; ++m) {
    for (int n = 1; n < 40; ++n) {
      if (cutoff_frequency(kGuide, {m, n}) <= 20.0 &&
          std::abs(transverse_factor(kGuide, atom, {m, n})) > kDecoupledThreshold) {
        ++brute;
      }
    }
  }
  CHECK(static_cast<int>(modes.size()) == brute);
}

TEST_CASE("equal cutoffs are ordered by (m, n)") {
  const WaveguideGeometry square{1.0, 1.0};
  const AtomConfig atom(20.0, 1.0, 0.3, 0.41, 0.0);
  const auto modes = coupled_modes(square, atom, 20.0);
  for (std::size_t i = 1; i < modes.size(); ++i) {
    const double a = cutoff_frequency(square, modes[i - 1]);
    const double b = cutoff_frequency(square, modes[i]);
    CHECK(a <= b);
    if (a == b) CHECK(modes[i - 1] < modes[i]);
  }
}

TEST_CASE("invalid inputs are rejected") {
  CHECK_THROWS_AS(WaveguideGeometry(1.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(WaveguideGeometry(0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_mode(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(AtomConfig(-1.0, 1.0, 0.5, 0.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(AtomConfig(5.0, 1.0, 0.5, 0.5, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_channels(kGuide, AtomConfig(5.0, 1.0, 2.5, 0.5, 0.0)),
                  std::invalid_argument);
}

TEST_CASE("guided wavelength") {
  const auto g = cutoff_three();
  CHECK_THAT(guided_wavelength(g, {1, 1}, 5.0), WithinRel(2.0 * kPi / 4.0, 1e-13));
}
