#include <numbers>
#include <string>
#include <vector>

#include "wgqed/errors.hpp"
#include "wgqed/scenario.hpp"

namespace wgqed {

namespace {

constexpr double kPi = std::numbers::pi;

const MidbandBetween kLowBand{{1, 1}, {3, 1}};   // TM11 only
const MidbandBetween kHighBand{{3, 1}, {5, 1}};  // TM11 and TM31

ScenarioConfig base(const MidbandBetween& band, Engine engine, double t_max_gamma) {
  ScenarioConfig cfg;
  cfg.a_over_b = 2.0;
  cfg.omega_mode = band;
  cfg.engine = engine;
  cfg.t_max_gamma = t_max_gamma;
  return cfg;
}

// Fig. 2: Markov decay for several mirror distances.
std::vector<ScenarioConfig> markov_distances(const std::string& name) {
  std::vector<ScenarioConfig> out;
  if (name == "fig2a") {
    const std::pair<double, const char*> cases[] = {
        {0.0, "z0_0"}, {0.125, "z0_lambda_8"}, {0.25, "z0_lambda_4"}};
    for (const auto& [fraction, label] : cases) {
      ScenarioConfig cfg = base(kLowBand, Engine::Markov, 5.0);
      cfg.z0_mode = FractionOfWavelength{fraction};
      cfg.trace_name = name + "_" + label;
      out.push_back(cfg);
    }
  } else {
    ScenarioConfig single = base(kHighBand, Engine::Markov, 5.0);
    single.z0_mode = FractionOfWavelength{0.25};
    single.max_channels = 1;
    single.trace_name = name + "_tm11";
    ScenarioConfig both = single;
    both.max_channels.reset();
    both.trace_name = name + "_tm11_tm31";
    out = {single, both};
  }
  return out;
}

// Figs. 3 to 5: retarded dynamics at fixed Gamma_1 tau_1 for three phases,
// plus the decay without any mirror.
std::vector<ScenarioConfig> delayed_phases(const std::string& name, const MidbandBetween& band,
                                           double gamma_tau, double t_max_gamma,
                                           bool with_reference) {
  const std::pair<double, const char*> phases[] = {
      {kPi / 2.0, "phi_pi_2"}, {kPi, "phi_pi"}, {0.0, "phi_0"}};
  std::vector<ScenarioConfig> out;
  for (const auto& [phase, label] : phases) {
    ScenarioConfig cfg = base(band, Engine::Dde, t_max_gamma);
    cfg.z0_mode = ByGammaTau{gamma_tau, phase};
    cfg.trace_name = name + "_" + label;
    out.push_back(cfg);
  }
  if (with_reference) {
    ScenarioConfig cfg = out.back();
    cfg.mirror = false;
    cfg.trace_name = name + "_no_mirror";
    out.push_back(cfg);
  }
  return out;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"fig2a", "fig2b", "fig3a", "fig3b", "fig4a", "fig4b", "fig5a", "fig5b"};
}

std::vector<ScenarioConfig> preset(const std::string& name) {
  if (name == "fig2a" || name == "fig2b") return markov_distances(name);
  if (name == "fig3a") return delayed_phases(name, kLowBand, 0.1, 10.0, true);
  if (name == "fig3b") return delayed_phases(name, kLowBand, 1.0, 10.0, true);
  if (name == "fig4a") return delayed_phases(name, kHighBand, 0.1, 10.0, true);
  if (name == "fig4b") return delayed_phases(name, kHighBand, 1.0, 10.0, true);
  if (name == "fig5a") return delayed_phases(name, kLowBand, 10.0, 40.0, false);
  if (name == "fig5b") return delayed_phases(name, kHighBand, 10.0, 40.0, false);
  throw ConfigError("unknown preset '" + name + "'");
}

}  // namespace wgqed
