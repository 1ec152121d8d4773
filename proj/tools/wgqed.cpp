// wgqed: run scenarios, figure presets, engine comparisons and sweeps.

#include <charconv>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wgqed/errors.hpp"
#include "wgqed/scenario.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitEngine = 3;

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    const auto last = item.find_last_not_of(" \t");
    out.push_back(item.substr(first, last - first + 1));
  }
  return out;
}

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> values;
  for (const auto& item : split_list(text)) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc{} || ptr != item.data() + item.size()) {
      throw wgqed::ConfigError("cannot read sweep value '" + item + "'");
    }
    values.push_back(v);
  }
  return values;
}

void report(const wgqed::RunOutput& out) {
  std::cout << out.csv.string() << '\n' << out.manifest.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spontaneous emission of an atom in a terminated rectangular waveguide"};
  app.require_subcommand(1);
  app.set_version_flag("--version", wgqed::engine_version());

  std::string config_path;
  std::string out_dir;

  auto* run = app.add_subcommand("run", "Run one scenario from a config file or manifest");
  run->add_option("--config", config_path, "Config file or run manifest")->required();
  run->add_option("--out", out_dir, "Output directory");

  std::string preset_name;
  auto* preset = app.add_subcommand("preset", "Regenerate the traces of a figure");
  preset->add_option("name", preset_name, "fig2a fig2b fig3a fig3b fig4a fig4b fig5a fig5b")
      ->required()
      ->check(CLI::IsMember(wgqed::preset_names()));
  preset->add_option("--out", out_dir, "Output directory");

  std::string engines_text = "dde,series,kspace";
  auto* compare = app.add_subcommand("compare", "Deviation table between engines");
  compare->add_option("--config", config_path, "Config file")->required();
  compare->add_option("--engines", engines_text, "Comma-separated engines");
  compare->add_option("--out", out_dir, "Output directory");

  std::string param;
  std::string values_text;
  auto* sweep = app.add_subcommand("sweep", "One run per parameter value");
  sweep->add_option("--config", config_path, "Config file")->required();
  sweep->add_option("--param", param, "z0, omega_a or gamma_tau1")->required();
  sweep->add_option("--values", values_text, "Comma-separated values (may be empty)")->expected(0, 1);
  sweep->add_option("--out", out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    auto configure = [&](wgqed::ScenarioConfig cfg) {
      if (!out_dir.empty()) cfg.output_directory = out_dir;
      return cfg;
    };

    if (*run) {
      report(wgqed::run_scenario(configure(wgqed::load_config(config_path))));
    } else if (*preset) {
      for (auto cfg : wgqed::preset(preset_name)) report(wgqed::run_scenario(configure(cfg)));
    } else if (*compare) {
      std::vector<wgqed::Engine> engines;
      for (const auto& name : split_list(engines_text)) engines.push_back(wgqed::parse_engine(name));
      const auto cfg = configure(wgqed::load_config(config_path));
      for (const auto& d : wgqed::compare_engines(cfg, engines)) {
        std::cout << wgqed::to_string(d.first) << " vs " << wgqed::to_string(d.second)
                  << ": max " << d.max_abs << ", mean " << d.mean_abs << '\n';
      }
    } else if (*sweep) {
      const auto parameter = wgqed::parse_sweep_parameter(param);
      const auto values = parse_values(values_text);
      const auto cfg = configure(wgqed::load_config(config_path));
      const auto entries = wgqed::sweep(cfg, parameter, values);
      std::cout << entries.size() << " runs, summary in "
                << (std::filesystem::path(cfg.output_directory) / (cfg.trace_name + ".sweep.csv"))
                       .string()
                << '\n';
    }
  } catch (const wgqed::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "engine error: " << e.what() << '\n';
    return kExitEngine;
  }
  return 0;
}
