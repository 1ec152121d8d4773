#pragma once

// Scenario files, parameter resolution and run artifacts (CSV traces plus a
// JSON manifest that reproduces them).

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "wgqed/trace.hpp"
#include "wgqed/waveguide.hpp"

namespace wgqed {

enum class Engine { Dde, Kspace, Markov, Series };

[[nodiscard]] std::string to_string(Engine engine);
/// Throws ConfigError for unknown names.
[[nodiscard]] Engine parse_engine(const std::string& name);

/// omega_A halfway between two cutoffs.
struct MidbandBetween {
  ModeIndex lower;
  ModeIndex upper;
};
struct AbsoluteFrequency {
  double value = 0.0;
};

/// z0 as a fraction of the guided wavelength of the lowest resonant channel.
struct FractionOfWavelength {
  double fraction = 0.0;
};
struct AbsoluteLength {
  double value = 0.0;
};
/// Places the atom so that Gamma_1 tau_1 equals `gamma_tau` and phi_1 equals
/// `phase` modulo 2 pi; the coupling is rescaled to keep Gamma_1 tau_1 exact.
struct ByGammaTau {
  double gamma_tau = 0.0;
  double phase = 0.0;
};

struct ScenarioConfig {
  double a_over_b = 2.0;
  std::variant<MidbandBetween, AbsoluteFrequency> omega_mode =
      MidbandBetween{{1, 1}, {3, 1}};
  std::variant<FractionOfWavelength, AbsoluteLength, ByGammaTau> z0_mode =
      FractionOfWavelength{0.125};
  double x0_frac = 0.5;
  double y0_frac = 0.5;
  /// Target rate of the lowest channel, in units of c / b. Only the k-space
  /// engine sees its absolute value; the others work in Gamma_1 t.
  double gamma1 = 0.005;

  Engine engine = Engine::Dde;
  std::optional<double> step;  // Gamma_1 t units; default from the delays
  double t_max_gamma = 10.0;
  std::optional<int> max_channels;  // keep only the lowest channels
  bool mirror = true;               // false: the emitted field never returns
  double guard_band = kDefaultGuardBand;
  double kspace_window_linewidths = 400.0;

  std::string output_directory = "out";
  std::string trace_name = "trace";
};

/// Flat `section.key = value` text; `#` starts a comment. Throws ConfigError on
/// unknown or repeated keys, conflicting variants and invalid values.
[[nodiscard]] ScenarioConfig parse_config(const std::string& text);
/// Reads either a config file or a run manifest (JSON with a "config" object).
[[nodiscard]] ScenarioConfig load_config(const std::filesystem::path& path);

/// Canonical flat form: every field that is set, numbers in round-trip form.
[[nodiscard]] std::map<std::string, std::string> to_key_values(const ScenarioConfig& config);
[[nodiscard]] ScenarioConfig from_key_values(const std::map<std::string, std::string>& kv);
[[nodiscard]] std::string to_config_text(const ScenarioConfig& config);

/// Throws ConfigError when an invariant of the config is violated.
void validate(const ScenarioConfig& config);

struct ResolvedScenario {
  WaveguideGeometry geometry{2.0, 1.0};
  AtomConfig atom{1.0, 1.0, 1.0, 0.5, 0.0};
  std::vector<ModeChannel> channels;
  double gamma1 = 0.0;            // rate of the lowest channel
  double t_max = 0.0;             // absolute time
  double step = 0.0;              // absolute time
  double golden_rule_rate = 0.0;  // over the retained channels
};

/// omega_A, z0 and the coupling from the config. Throws ConfigError when no
/// channel is resonant or the atom sits inside a guard band.
[[nodiscard]] ResolvedScenario resolve(const ScenarioConfig& config);

/// Atom amplitude on the uniform grid t_i = i * step from the chosen engine.
/// Throws EngineNotApplicable when the engine cannot treat the configuration.
[[nodiscard]] AmplitudeTrace run_engine(const ResolvedScenario& resolved, const ScenarioConfig& config,
                                        Engine engine);

struct RunOutput {
  std::filesystem::path csv;
  std::filesystem::path manifest;
  ResolvedScenario resolved;
  AmplitudeTrace trace;
};

/// Resolves, runs and writes `<dir>/<trace>.csv` and `<dir>/<trace>.manifest.json`.
RunOutput run_scenario(const ScenarioConfig& config);

struct EngineDeviation {
  Engine first;
  Engine second;
  double max_abs = 0.0;
  double mean_abs = 0.0;
};

/// Runs every engine on the same resolved parameters and time grid and
/// writes `<dir>/<trace>.compare.csv` with one row per engine pair.
std::vector<EngineDeviation> compare_engines(const ScenarioConfig& config,
                                             const std::vector<Engine>& engines);

enum class SweepParameter { Z0, OmegaA, GammaTau1 };
[[nodiscard]] SweepParameter parse_sweep_parameter(const std::string& name);

struct SweepEntry {
  double value = 0.0;
  double golden_rule_rate = 0.0;  // in units of Gamma_1
  double final_probability = 0.0;
};

/// One run per value in a shared directory, plus `<dir>/<trace>.sweep.csv`.
/// z0 values replace the active z0 variant (fraction or absolute length).
std::vector<SweepEntry> sweep(const ScenarioConfig& config, SweepParameter parameter,
                              const std::vector<double>& values);

/// Named figure presets: fig2a ... fig5b. Each yields several configs whose
/// output directory is left at its default.
[[nodiscard]] std::vector<std::string> preset_names();
[[nodiscard]] std::vector<ScenarioConfig> preset(const std::string& name);

/// CSV with header t_gamma,re,im,abs,prob; floats in shortest round-trip form.
[[nodiscard]] std::string format_trace_csv(const AmplitudeTrace& trace, double time_unit);
void write_text_file(const std::filesystem::path& path, const std::string& content);
[[nodiscard]] std::string sha256_hex(const std::string& data);
[[nodiscard]] std::string format_double(double value);

/// Engine identity recorded in manifests.
[[nodiscard]] std::string engine_version();

}  // namespace wgqed
