#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "wgqed/dde.hpp"
#include "wgqed/errors.hpp"
#include "wgqed/kspace.hpp"
#include "wgqed/markov.hpp"
#include "wgqed/scenario.hpp"

namespace py = pybind11;
using namespace wgqed;

namespace {

// (times, amplitudes) as numpy arrays
py::tuple trace_arrays(const AmplitudeTrace& trace) {
  py::array_t<double> t(trace.size());
  py::array_t<std::complex<double>> e(trace.size());
  std::copy(trace.times.begin(), trace.times.end(), t.mutable_data());
  std::copy(trace.amplitudes.begin(), trace.amplitudes.end(), e.mutable_data());
  return py::make_tuple(t, e);
}

py::dict trace_dict(const AmplitudeTrace& trace) {
  const py::tuple arrays = trace_arrays(trace);
  py::dict d;
  d["t"] = arrays[0];
  d["amplitude"] = arrays[1];
  d["metadata"] = trace.metadata;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Spontaneous emission near a waveguide mirror";
  m.attr("__version__") = engine_version();

  auto error = py::register_exception<Error>(m, "Error");
  py::register_exception<BelowCutoff>(m, "BelowCutoff", error);
  py::register_exception<AtCutoffSingularity>(m, "AtCutoffSingularity", error);
  py::register_exception<QuadratureFailure>(m, "QuadratureFailure", error);
  py::register_exception<StepTooLarge>(m, "StepTooLarge", error);
  py::register_exception<NormViolation>(m, "NormViolation", error);
  py::register_exception<RecurrenceHorizonExceeded>(m, "RecurrenceHorizonExceeded", error);
  py::register_exception<NormDrift>(m, "NormDrift", error);
  py::register_exception<EngineNotApplicable>(m, "EngineNotApplicable", error);
  py::register_exception<ConfigError>(m, "ConfigError", error);

  py::class_<WaveguideGeometry>(m, "WaveguideGeometry")
      .def(py::init<double, double, double>(), py::arg("a"), py::arg("b"), py::arg("c") = 1.0)
      .def_property_readonly("a", &WaveguideGeometry::a)
      .def_property_readonly("b", &WaveguideGeometry::b)
      .def_property_readonly("c", &WaveguideGeometry::c);

  py::class_<AtomConfig>(m, "AtomConfig")
      .def(py::init<double, double, double, double, double>(), py::arg("omega_a"),
           py::arg("dipole_scale"), py::arg("x0"), py::arg("y0"), py::arg("z0"))
      .def_property_readonly("omega_a", &AtomConfig::omega_a)
      .def_property_readonly("dipole_scale", &AtomConfig::dipole_scale)
      .def_property_readonly("x0", &AtomConfig::x0)
      .def_property_readonly("y0", &AtomConfig::y0)
      .def_property_readonly("z0", &AtomConfig::z0)
      .def("with_z0", &AtomConfig::with_z0)
      .def("with_omega_a", &AtomConfig::with_omega_a)
      .def("with_dipole_scale", &AtomConfig::with_dipole_scale);

  py::class_<ModeChannel>(m, "ModeChannel")
      .def(py::init<>())
      .def_property_readonly("m", [](const ModeChannel& c) { return c.index.m; })
      .def_property_readonly("n", [](const ModeChannel& c) { return c.index.n; })
      .def_readwrite("cutoff", &ModeChannel::cutoff)
      .def_readwrite("k0", &ModeChannel::k0)
      .def_readwrite("group_velocity", &ModeChannel::group_velocity)
      .def_readwrite("rate", &ModeChannel::rate)
      .def_readwrite("phase", &ModeChannel::phase)
      .def_readwrite("delay", &ModeChannel::delay)
      .def("__repr__", [](const ModeChannel& c) {
        return "<ModeChannel TM" + std::to_string(c.index.m) + "," + std::to_string(c.index.n) +
               " rate=" + format_double(c.rate) + " delay=" + format_double(c.delay) + ">";
      });

  m.def("cutoff_frequency",
        [](const WaveguideGeometry& g, int mi, int ni) { return cutoff_frequency(g, make_mode(mi, ni)); },
        py::arg("geometry"), py::arg("m"), py::arg("n"));
  m.def("enumerate_channels", &enumerate_channels, py::arg("geometry"), py::arg("atom"),
        py::arg("guard_band") = kDefaultGuardBand);
  m.def("golden_rule_rate",
        [](const WaveguideGeometry& g, const AtomConfig& a, double guard) {
          return golden_rule_rate(g, a, guard).rate;
        },
        py::arg("geometry"), py::arg("atom"), py::arg("guard_band") = kDefaultGuardBand);
  m.def("coupling_spectrum", &coupling_spectrum, py::arg("geometry"), py::arg("atom"), py::arg("omega"));
  m.def("modulation_spectrum", &modulation_spectrum, py::arg("t"), py::arg("omega"), py::arg("omega_a"));
  m.def("finite_time_rate",
        [](const WaveguideGeometry& g, const AtomConfig& a, double t) { return finite_time_rate(g, a, t); },
        py::arg("geometry"), py::arg("atom"), py::arg("t"));

  m.def("default_step",
        [](const std::vector<ModeChannel>& chans) { return default_step(chans); }, py::arg("channels"));
  m.def("solve_dde",
        [](const std::vector<ModeChannel>& chans, double t_max, std::optional<double> step) {
          return trace_arrays(solve_dde({chans, t_max, step ? *step : default_step(chans)}));
        },
        py::arg("channels"), py::arg("t_max"), py::arg("step") = py::none(),
        "Delay-equation amplitude on a uniform grid; returns (t, amplitude).");
  m.def("series_single_mode",
        [](double gamma, double phase, double delay, double t) {
          return series_single_mode(gamma, phase, delay, t, series_terms_needed(t, delay));
        },
        py::arg("gamma"), py::arg("phase"), py::arg("delay"), py::arg("t"));
  m.def("integrate_full",
        [](const WaveguideGeometry& g, const AtomConfig& a, double t_max, double step) {
          const auto res = integrate_full(g, a, build_kgrid(g, a, t_max), t_max, step);
          return py::make_tuple(trace_arrays(res.trace), res.max_norm_error);
        },
        py::arg("geometry"), py::arg("atom"), py::arg("t_max"), py::arg("step"),
        "Full k-space evolution; returns ((t, amplitude), max_norm_error).");

  m.def("preset_names", &preset_names);
  m.def("parse_config", [](const std::string& text) { return to_key_values(parse_config(text)); },
        py::arg("text"), "Validated flat key/value form of a config text.");
  m.def("run",
        [](const std::string& text, const std::string& engine) {
          auto cfg = parse_config(text);
          const auto r = resolve(cfg);
          auto trace = run_engine(r, cfg, engine.empty() ? cfg.engine : parse_engine(engine));
          for (double& t : trace.times) t *= r.gamma1;
          py::dict d = trace_dict(trace);
          d["gamma1"] = r.gamma1;
          return d;
        },
        py::arg("config_text"), py::arg("engine") = "",
        "Run a config in memory; times are in units of 1/Gamma_1.");
  m.def("run_scenario",
        [](const std::string& text, const std::string& out_dir) {
          auto cfg = parse_config(text);
          if (!out_dir.empty()) cfg.output_directory = out_dir;
          const auto out = run_scenario(cfg);
          return py::make_tuple(out.csv, out.manifest);
        },
        py::arg("config_text"), py::arg("out") = "", "Write the trace CSV and manifest; returns their paths.");
  m.def("run_preset",
        [](const std::string& name, const std::string& out_dir) {
          std::vector<std::filesystem::path> csvs;
          for (auto cfg : preset(name)) {
            if (!out_dir.empty()) cfg.output_directory = out_dir;
            csvs.push_back(run_scenario(cfg).csv);
          }
          return csvs;
        },
        py::arg("name"), py::arg("out") = "");
}
