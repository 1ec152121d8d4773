#include "wgqed/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <regex>
#include <set>
#include <sstream>

#include "json.hpp"

#include "wgqed/dde.hpp"
#include "wgqed/errors.hpp"
#include "wgqed/kspace.hpp"

namespace wgqed {

namespace {

using cplx = std::complex<double>;
using json = nlohmann::json;
constexpr double kPi = std::numbers::pi;

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "geometry.a_over_b",
      "atom.omega_mode.midband_between",
      "atom.omega_mode.absolute",
      "atom.z0_mode.fraction_of_lambda1A",
      "atom.z0_mode.absolute",
      "atom.z0_mode.by_gamma_tau1",
      "atom.z0_mode.phase1",
      "atom.x0_frac",
      "atom.y0_frac",
      "atom.gamma1",
      "solver.engine",
      "solver.step",
      "solver.t_max_gamma",
      "solver.max_channels",
      "solver.mirror",
      "solver.guard_band",
      "kspace.window_linewidths",
      "output.directory",
      "output.trace",
  };
  return keys;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool parse_plain_number(const std::string& text, double& out) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc{} && ptr == end;
}

// Plain decimal, or a multiple of pi written as pi, 3pi/2, 0.5*pi, pi/4.
double parse_real(const std::string& key, const std::string& raw) {
  const std::string text = trim(raw);
  double value = 0.0;
  if (parse_plain_number(text, value)) {
    if (!std::isfinite(value)) throw ConfigError(key + ": value must be finite");
    return value;
  }
  static const std::regex pi_form(R"(^([-+]?[0-9.eE+-]*?)\s*\*?\s*pi\s*(?:/\s*([0-9.eE+-]+))?$)");
  std::smatch m;
  if (std::regex_match(text, m, pi_form)) {
    double coef = 1.0;
    double den = 1.0;
    const std::string c = m[1].str();
    if (c == "-") {
      coef = -1.0;
    } else if (!c.empty() && c != "+" && !parse_plain_number(c[0] == '+' ? c.substr(1) : c, coef)) {
      throw ConfigError(key + ": cannot read '" + text + "' as a number");
    }
    if (m[2].matched && !parse_plain_number(m[2].str(), den)) {
      throw ConfigError(key + ": cannot read '" + text + "' as a number");
    }
    if (den == 0.0) throw ConfigError(key + ": division by zero");
    return coef * kPi / den;
  }
  throw ConfigError(key + ": cannot read '" + text + "' as a number");
}

int parse_int(const std::string& key, const std::string& raw) {
  const std::string text = trim(raw);
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError(key + ": expected an integer, got '" + text + "'");
  }
  return value;
}

bool parse_bool(const std::string& key, const std::string& raw) {
  const std::string text = trim(raw);
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError(key + ": expected true or false, got '" + text + "'");
}

MidbandBetween parse_mode_pair(const std::string& key, const std::string& raw) {
  static const std::regex pair(
      R"(^\s*\(\s*(\d+)\s*,\s*(\d+)\s*\)\s*,\s*\(\s*(\d+)\s*,\s*(\d+)\s*\)\s*$)");
  std::smatch m;
  if (!std::regex_match(raw, m, pair)) {
    throw ConfigError(key + ": expected two modes as (m,n),(m,n), got '" + raw + "'");
  }
  try {
    return {make_mode(std::stoi(m[1].str()), std::stoi(m[2].str())),
            make_mode(std::stoi(m[3].str()), std::stoi(m[4].str()))};
  } catch (const std::exception& e) {
    throw ConfigError(key + ": " + e.what());
  }
}

std::string mode_pair_text(const MidbandBetween& p) {
  std::ostringstream os;
  os << '(' << p.lower.m << ',' << p.lower.n << "),(" << p.upper.m << ',' << p.upper.n << ')';
  return os.str();
}

std::vector<double> output_times(double t_max, double step) {
  const auto steps = static_cast<std::size_t>(std::floor(t_max / step * (1.0 + 1e-12)));
  std::vector<double> times(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) times[i] = static_cast<double>(i) * step;
  return times;
}

AmplitudeTrace closed_form_trace(const std::vector<double>& times, auto amplitude) {
  AmplitudeTrace trace;
  trace.times = times;
  trace.amplitudes.reserve(times.size());
  for (double t : times) trace.amplitudes.push_back(amplitude(t));
  return trace;
}

}  // namespace

std::string to_string(Engine engine) {
  switch (engine) {
    case Engine::Dde: return "dde";
    case Engine::Kspace: return "kspace";
    case Engine::Markov: return "markov";
    case Engine::Series: return "series";
  }
  return "unknown";
}

Engine parse_engine(const std::string& name) {
  const std::string n = trim(name);
  if (n == "dde") return Engine::Dde;
  if (n == "kspace") return Engine::Kspace;
  if (n == "markov") return Engine::Markov;
  if (n == "series") return Engine::Series;
  throw ConfigError("unknown engine '" + n + "' (expected dde, kspace, markov or series)");
}

SweepParameter parse_sweep_parameter(const std::string& name) {
  if (name == "z0") return SweepParameter::Z0;
  if (name == "omega_a") return SweepParameter::OmegaA;
  if (name == "gamma_tau1") return SweepParameter::GammaTau1;
  throw ConfigError("unknown sweep parameter '" + name + "' (expected z0, omega_a or gamma_tau1)");
}

ScenarioConfig parse_config(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!kv.emplace(key, value).second) {
      throw ConfigError("line " + std::to_string(lineno) + ": repeated key " + key);
    }
  }
  return from_key_values(kv);
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot read " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  const std::string text = ss.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    json doc;
    try {
      doc = json::parse(text);
    } catch (const json::exception& e) {
      throw ConfigError(path.string() + ": " + e.what());
    }
    if (!doc.contains("config") || !doc["config"].is_object()) {
      throw ConfigError(path.string() + ": manifest has no config object");
    }
    std::map<std::string, std::string> kv;
    for (const auto& [key, value] : doc["config"].items()) {
      if (!value.is_string()) throw ConfigError(path.string() + ": config values must be strings");
      kv[key] = value.get<std::string>();
    }
    return from_key_values(kv);
  }
  return parse_config(text);
}

ScenarioConfig from_key_values(const std::map<std::string, std::string>& kv) {
  for (const auto& [key, value] : kv) {
    if (!known_keys().contains(key)) throw ConfigError("unknown key " + key);
    if (value.empty()) throw ConfigError(key + ": empty value");
  }
  auto get = [&](const std::string& key) -> const std::string* {
    const auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };

  ScenarioConfig cfg;
  if (auto v = get("geometry.a_over_b")) cfg.a_over_b = parse_real("geometry.a_over_b", *v);

  const auto* midband = get("atom.omega_mode.midband_between");
  const auto* omega_abs = get("atom.omega_mode.absolute");
  if (midband && omega_abs) throw ConfigError("atom.omega_mode: choose exactly one variant");
  if (midband) cfg.omega_mode = parse_mode_pair("atom.omega_mode.midband_between", *midband);
  if (omega_abs) {
    cfg.omega_mode = AbsoluteFrequency{parse_real("atom.omega_mode.absolute", *omega_abs)};
  }

  const auto* frac = get("atom.z0_mode.fraction_of_lambda1A");
  const auto* z_abs = get("atom.z0_mode.absolute");
  const auto* by_gt = get("atom.z0_mode.by_gamma_tau1");
  const auto* phase = get("atom.z0_mode.phase1");
  if ((frac != nullptr) + (z_abs != nullptr) + (by_gt != nullptr) > 1) {
    throw ConfigError("atom.z0_mode: choose exactly one variant");
  }
  if (phase && !by_gt) throw ConfigError("atom.z0_mode.phase1 requires by_gamma_tau1");
  if (frac) {
    cfg.z0_mode = FractionOfWavelength{parse_real("atom.z0_mode.fraction_of_lambda1A", *frac)};
  }
  if (z_abs) cfg.z0_mode = AbsoluteLength{parse_real("atom.z0_mode.absolute", *z_abs)};
  if (by_gt) {
    cfg.z0_mode = ByGammaTau{parse_real("atom.z0_mode.by_gamma_tau1", *by_gt),
                             phase ? parse_real("atom.z0_mode.phase1", *phase) : 0.0};
  }

  if (auto v = get("atom.x0_frac")) cfg.x0_frac = parse_real("atom.x0_frac", *v);
  if (auto v = get("atom.y0_frac")) cfg.y0_frac = parse_real("atom.y0_frac", *v);
  if (auto v = get("atom.gamma1")) cfg.gamma1 = parse_real("atom.gamma1", *v);
  if (auto v = get("solver.engine")) cfg.engine = parse_engine(*v);
  if (auto v = get("solver.step")) cfg.step = parse_real("solver.step", *v);
  if (auto v = get("solver.t_max_gamma")) cfg.t_max_gamma = parse_real("solver.t_max_gamma", *v);
  if (auto v = get("solver.max_channels")) cfg.max_channels = parse_int("solver.max_channels", *v);
  if (auto v = get("solver.mirror")) cfg.mirror = parse_bool("solver.mirror", *v);
  if (auto v = get("solver.guard_band")) cfg.guard_band = parse_real("solver.guard_band", *v);
  if (auto v = get("kspace.window_linewidths")) {
    cfg.kspace_window_linewidths = parse_real("kspace.window_linewidths", *v);
  }
  if (auto v = get("output.directory")) cfg.output_directory = *v;
  if (auto v = get("output.trace")) cfg.trace_name = *v;
  validate(cfg);
  return cfg;
}

std::map<std::string, std::string> to_key_values(const ScenarioConfig& cfg) {
  std::map<std::string, std::string> kv;
  kv["geometry.a_over_b"] = format_double(cfg.a_over_b);
  if (const auto* p = std::get_if<MidbandBetween>(&cfg.omega_mode)) {
    kv["atom.omega_mode.midband_between"] = mode_pair_text(*p);
  } else {
    kv["atom.omega_mode.absolute"] = format_double(std::get<AbsoluteFrequency>(cfg.omega_mode).value);
  }
  if (const auto* f = std::get_if<FractionOfWavelength>(&cfg.z0_mode)) {
    kv["atom.z0_mode.fraction_of_lambda1A"] = format_double(f->fraction);
  } else if (const auto* z = std::get_if<AbsoluteLength>(&cfg.z0_mode)) {
    kv["atom.z0_mode.absolute"] = format_double(z->value);
  } else {
    const auto& g = std::get<ByGammaTau>(cfg.z0_mode);
    kv["atom.z0_mode.by_gamma_tau1"] = format_double(g.gamma_tau);
    kv["atom.z0_mode.phase1"] = format_double(g.phase);
  }
  kv["atom.x0_frac"] = format_double(cfg.x0_frac);
  kv["atom.y0_frac"] = format_double(cfg.y0_frac);
  kv["atom.gamma1"] = format_double(cfg.gamma1);
  kv["solver.engine"] = to_string(cfg.engine);
  if (cfg.step) kv["solver.step"] = format_double(*cfg.step);
  kv["solver.t_max_gamma"] = format_double(cfg.t_max_gamma);
  if (cfg.max_channels) kv["solver.max_channels"] = std::to_string(*cfg.max_channels);
  kv["solver.mirror"] = cfg.mirror ? "true" : "false";
  kv["solver.guard_band"] = format_double(cfg.guard_band);
  kv["kspace.window_linewidths"] = format_double(cfg.kspace_window_linewidths);
  kv["output.directory"] = cfg.output_directory;
  kv["output.trace"] = cfg.trace_name;
  return kv;
}

std::string to_config_text(const ScenarioConfig& cfg) {
  std::string out;
  for (const auto& [key, value] : to_key_values(cfg)) out += key + " = " + value + "\n";
  return out;
}

void validate(const ScenarioConfig& cfg) {
  auto positive = [](double x) { return std::isfinite(x) && x > 0.0; };
  auto fraction = [](double x) { return x > 0.0 && x < 1.0; };
  if (!(std::isfinite(cfg.a_over_b) && cfg.a_over_b >= 1.0)) {
    throw ConfigError("geometry.a_over_b must be >= 1 (a is the wider side)");
  }
  if (const auto* f = std::get_if<AbsoluteFrequency>(&cfg.omega_mode); f && !positive(f->value)) {
    throw ConfigError("atom.omega_mode.absolute must be positive");
  }
  if (const auto* f = std::get_if<FractionOfWavelength>(&cfg.z0_mode);
      f && !(std::isfinite(f->fraction) && f->fraction >= 0.0)) {
    throw ConfigError("atom.z0_mode.fraction_of_lambda1A must be non-negative");
  }
  if (const auto* z = std::get_if<AbsoluteLength>(&cfg.z0_mode);
      z && !(std::isfinite(z->value) && z->value >= 0.0)) {
    throw ConfigError("atom.z0_mode.absolute must be non-negative");
  }
  if (const auto* g = std::get_if<ByGammaTau>(&cfg.z0_mode);
      g && !(positive(g->gamma_tau) && std::isfinite(g->phase))) {
    throw ConfigError("atom.z0_mode.by_gamma_tau1 must be positive with a finite phase1");
  }
  if (!fraction(cfg.x0_frac)) throw ConfigError("atom.x0_frac must lie in (0, 1)");
  if (!fraction(cfg.y0_frac)) throw ConfigError("atom.y0_frac must lie in (0, 1)");
  if (!positive(cfg.gamma1)) throw ConfigError("atom.gamma1 must be positive");
  if (cfg.step && !positive(*cfg.step)) throw ConfigError("solver.step must be positive");
  if (!positive(cfg.t_max_gamma)) throw ConfigError("solver.t_max_gamma must be positive");
  if (cfg.max_channels && *cfg.max_channels < 1) {
    throw ConfigError("solver.max_channels must be at least 1");
  }
  if (!(std::isfinite(cfg.guard_band) && cfg.guard_band >= 0.0)) {
    throw ConfigError("solver.guard_band must be non-negative");
  }
  if (!positive(cfg.kspace_window_linewidths)) {
    throw ConfigError("kspace.window_linewidths must be positive");
  }
  if (cfg.output_directory.empty()) throw ConfigError("output.directory must not be empty");
  if (cfg.trace_name.empty() || cfg.trace_name.find_first_of("/\\") != std::string::npos) {
    throw ConfigError("output.trace must be a plain file stem");
  }
}

ResolvedScenario resolve(const ScenarioConfig& cfg) {
  validate(cfg);
  ResolvedScenario r;
  r.geometry = WaveguideGeometry(cfg.a_over_b, 1.0);
  const auto& geom = r.geometry;

  double omega_a = 0.0;
  if (const auto* p = std::get_if<MidbandBetween>(&cfg.omega_mode)) {
    omega_a = 0.5 * (cutoff_frequency(geom, p->lower) + cutoff_frequency(geom, p->upper));
  } else {
    omega_a = std::get<AbsoluteFrequency>(cfg.omega_mode).value;
  }

  auto channels_for = [&](const AtomConfig& atom) {
    std::vector<ModeChannel> channels;
    try {
      channels = enumerate_channels(geom, atom, cfg.guard_band);
    } catch (const AtCutoffSingularity& e) {
      throw ConfigError(std::string("atom frequency too close to a cutoff: ") + e.what());
    }
    if (channels.empty()) throw ConfigError("no TM channel is resonant with the atom");
    if (cfg.max_channels && channels.size() > static_cast<std::size_t>(*cfg.max_channels)) {
      channels.resize(static_cast<std::size_t>(*cfg.max_channels));
    }
    return channels;
  };

  // Unit coupling first: every rate is linear in the coupling constant.
  AtomConfig probe(omega_a, 1.0, cfg.x0_frac * geom.a(), cfg.y0_frac * geom.b(), 0.0);
  const ModeChannel lowest = channels_for(probe).front();

  double z0 = 0.0;
  double gamma1 = cfg.gamma1;
  if (const auto* f = std::get_if<FractionOfWavelength>(&cfg.z0_mode)) {
    z0 = f->fraction * guided_wavelength(geom, lowest.index, omega_a);
  } else if (const auto* z = std::get_if<AbsoluteLength>(&cfg.z0_mode)) {
    z0 = z->value;
  } else {
    const auto& g = std::get<ByGammaTau>(cfg.z0_mode);
    const double phase = std::fmod(std::fmod(g.phase, 2.0 * kPi) + 2.0 * kPi, 2.0 * kPi);
    // Distance that would give the requested rate; pick the nearest winding.
    const double target = g.gamma_tau * lowest.group_velocity / (2.0 * cfg.gamma1);
    double winding = std::max(0.0, std::round((2.0 * lowest.k0 * target - phase) / (2.0 * kPi)));
    if (phase + 2.0 * kPi * winding == 0.0) winding = 1.0;
    z0 = (phase + 2.0 * kPi * winding) / (2.0 * lowest.k0);
    gamma1 = g.gamma_tau * lowest.group_velocity / (2.0 * z0);
  }

  r.atom = AtomConfig(omega_a, gamma1 / lowest.rate, probe.x0(), probe.y0(), z0);
  r.channels = channels_for(r.atom);
  r.gamma1 = r.channels.front().rate;
  r.t_max = cfg.t_max_gamma / r.gamma1;
  r.step = cfg.step ? *cfg.step / r.gamma1 : default_step(r.channels);
  for (const auto& ch : r.channels) r.golden_rule_rate += 2.0 * ch.rate * (1.0 + std::cos(ch.phase));
  return r;
}

AmplitudeTrace run_engine(const ResolvedScenario& r, const ScenarioConfig& cfg, Engine engine) {
  const std::vector<double> times = output_times(r.t_max, r.step);
  const auto& channels = r.channels;
  AmplitudeTrace trace;

  if (!cfg.mirror && engine != Engine::Kspace) {
    trace = closed_form_trace(times, [&](double t) {
      return limiting_amplitude(channels, DelayRegime::AllDelaysInfinite, t);
    });
  } else {
    switch (engine) {
      case Engine::Dde:
        trace = solve_dde({channels, r.t_max, r.step});
        break;
      case Engine::Markov:
        trace = closed_form_trace(times, [&](double t) {
          return limiting_amplitude(channels, DelayRegime::AllDelaysZero, t);
        });
        break;
      case Engine::Series:
        if (channels.size() == 1) {
          const auto& ch = channels.front();
          trace = closed_form_trace(times, [&](double t) {
            return series_single_mode(ch.rate, ch.phase, ch.delay, t,
                                      series_terms_needed(t, ch.delay));
          });
        } else if (channels.size() == 2 && channels[0].delay == 0.0) {
          const auto& a = channels[0];
          const auto& b = channels[1];
          trace = closed_form_trace(times, [&](double t) {
            return series_two_mode_tau1_zero(a.rate, a.phase, b.rate, b.phase, b.delay, t,
                                             series_terms_needed(t, b.delay));
          });
        } else {
          throw EngineNotApplicable(
              "series engine covers one channel, or two with the first delay zero");
        }
        break;
      case Engine::Kspace: {
        if (!cfg.mirror) throw EngineNotApplicable("k-space engine always includes the mirror");
        std::vector<ModeIndex> modes;
        for (const auto& ch : channels) modes.push_back(ch.index);
        KGridOptions grid_opts;
        grid_opts.window_linewidths = cfg.kspace_window_linewidths;
        const KGrid grid = build_kgrid(r.geometry, r.atom, modes, r.t_max, grid_opts);
        KspaceResult res = integrate_full(r.geometry, r.atom, grid, r.t_max, r.step);
        trace = std::move(res.trace);
        trace.metadata["max_norm_error"] = format_double(res.max_norm_error);
        trace.metadata["frequency_shift"] = format_double(res.frequency_shift);
        break;
      }
    }
  }
  trace.metadata["engine"] = to_string(engine);
  trace.metadata["mirror"] = cfg.mirror ? "true" : "false";
  trace.metadata["step"] = format_double(r.step);
  return trace;
}

RunOutput run_scenario(const ScenarioConfig& cfg) {
  RunOutput out;
  out.resolved = resolve(cfg);
  const auto& r = out.resolved;
  out.trace = run_engine(r, cfg, cfg.engine);

  const std::filesystem::path dir(cfg.output_directory);
  out.csv = dir / (cfg.trace_name + ".csv");
  out.manifest = dir / (cfg.trace_name + ".manifest.json");
  const std::string csv = format_trace_csv(out.trace, r.gamma1);
  write_text_file(out.csv, csv);

  json m;
  m["engine_version"] = engine_version();
  m["config"] = to_key_values(cfg);
  m["input_digest"] = sha256_hex(to_config_text(cfg));
  json resolved;
  resolved["a"] = r.geometry.a();
  resolved["b"] = r.geometry.b();
  resolved["c"] = r.geometry.c();
  resolved["omega_a"] = r.atom.omega_a();
  resolved["z0"] = r.atom.z0();
  resolved["x0"] = r.atom.x0();
  resolved["y0"] = r.atom.y0();
  resolved["dipole_scale"] = r.atom.dipole_scale();
  resolved["gamma1"] = r.gamma1;
  resolved["t_max"] = r.t_max;
  resolved["step"] = r.step;
  resolved["golden_rule_rate"] = r.golden_rule_rate;
  json channels = json::array();
  for (const auto& ch : r.channels) {
    channels.push_back({{"m", ch.index.m},
                        {"n", ch.index.n},
                        {"cutoff", ch.cutoff},
                        {"k0", ch.k0},
                        {"group_velocity", ch.group_velocity},
                        {"rate", ch.rate},
                        {"phase", ch.phase},
                        {"delay", ch.delay},
                        {"gamma_tau", ch.rate * ch.delay}});
  }
  resolved["channels"] = channels;
  m["resolved"] = resolved;
  m["engine"] = out.trace.metadata;
  m["outputs"] = json::array({{{"file", out.csv.filename().string()},
                               {"rows", out.trace.size()},
                               {"sha256", sha256_hex(csv)}}});
  write_text_file(out.manifest, m.dump(2) + "\n");
  return out;
}

std::vector<EngineDeviation> compare_engines(const ScenarioConfig& cfg,
                                             const std::vector<Engine>& engines) {
  const ResolvedScenario r = resolve(cfg);
  std::vector<AmplitudeTrace> traces;
  for (Engine e : engines) traces.push_back(run_engine(r, cfg, e));

  std::vector<EngineDeviation> report;
  std::string csv = "engine_a,engine_b,max_abs_dev,mean_abs_dev\n";
  for (std::size_t i = 0; i < engines.size(); ++i) {
    for (std::size_t j = i + 1; j < engines.size(); ++j) {
      const std::size_t n = std::min(traces[i].size(), traces[j].size());
      EngineDeviation d{engines[i], engines[j]};
      for (std::size_t k = 0; k < n; ++k) {
        const double dev = std::abs(traces[i].amplitudes[k] - traces[j].amplitudes[k]);
        d.max_abs = std::max(d.max_abs, dev);
        d.mean_abs += dev;
      }
      if (n > 0) d.mean_abs /= static_cast<double>(n);
      csv += to_string(d.first) + "," + to_string(d.second) + "," + format_double(d.max_abs) +
             "," + format_double(d.mean_abs) + "\n";
      report.push_back(d);
    }
  }
  write_text_file(std::filesystem::path(cfg.output_directory) / (cfg.trace_name + ".compare.csv"),
                  csv);
  return report;
}

std::vector<SweepEntry> sweep(const ScenarioConfig& cfg, SweepParameter parameter,
                              const std::vector<double>& values) {
  validate(cfg);
  std::vector<SweepEntry> entries;
  std::string csv = "value,golden_rule_rate,final_prob\n";
  for (std::size_t i = 0; i < values.size(); ++i) {
    ScenarioConfig run = cfg;
    const double v = values[i];
    switch (parameter) {
      case SweepParameter::Z0:
        if (auto* f = std::get_if<FractionOfWavelength>(&run.z0_mode)) {
          f->fraction = v;
        } else if (auto* z = std::get_if<AbsoluteLength>(&run.z0_mode)) {
          z->value = v;
        } else {
          throw ConfigError("z0 sweep needs a fraction_of_lambda1A or absolute z0 mode");
        }
        break;
      case SweepParameter::OmegaA:
        run.omega_mode = AbsoluteFrequency{v};
        break;
      case SweepParameter::GammaTau1:
        if (auto* g = std::get_if<ByGammaTau>(&run.z0_mode)) {
          g->gamma_tau = v;
        } else {
          run.z0_mode = ByGammaTau{v, 0.0};
        }
        break;
    }
    std::ostringstream name;
    name << cfg.trace_name << '_' << std::setw(3) << std::setfill('0') << i;
    run.trace_name = name.str();
    const RunOutput out = run_scenario(run);
    SweepEntry e;
    e.value = v;
    e.golden_rule_rate = out.resolved.golden_rule_rate / out.resolved.gamma1;
    e.final_probability = std::norm(out.trace.amplitudes.back());
    csv += format_double(e.value) + "," + format_double(e.golden_rule_rate) + "," +
           format_double(e.final_probability) + "\n";
    entries.push_back(e);
  }
  write_text_file(std::filesystem::path(cfg.output_directory) / (cfg.trace_name + ".sweep.csv"),
                  csv);
  return entries;
}

}  // namespace wgqed
