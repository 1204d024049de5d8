#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qtraj/io.hpp"
#include "qtraj/measurement_model.hpp"
#include "qtraj/past_state.hpp"
#include "qtraj/record_gen.hpp"
#include "qtraj/tomography.hpp"
#include "qtraj/trajectory.hpp"
#include "qtraj/two_qubit.hpp"

namespace py = pybind11;
using namespace qtraj;

namespace {

using Bloch = std::array<double, 3>;

BlochVector to_bloch(const Bloch& a) { return {a[0], a[1], a[2]}; }
Bloch from_bloch(const BlochVector& q) { return {q.x, q.y, q.z}; }

py::array_t<double> states_array(const std::vector<BlochVector>& states) {
  py::array_t<double> out({static_cast<py::ssize_t>(states.size()), py::ssize_t{3}});
  auto v = out.mutable_unchecked<2>();
  for (std::size_t k = 0; k < states.size(); ++k) {
    v(k, 0) = states[k].x;
    v(k, 1) = states[k].y;
    v(k, 2) = states[k].z;
  }
  return out;
}

py::array_t<double> vector_array(const std::vector<double>& xs) { return py::array_t<double>(xs.size(), xs.data()); }

MeasurementRecord make_record(const std::vector<double>& samples, const MeasurementConfig& c) {
  MeasurementRecord r;
  r.samples = samples;
  r.dt = c.dt;
  r.axis = c.axis;
  return r;
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bayesian trajectories of continuously measured qubits";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<io::ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<InsufficientStatistics>(m, "InsufficientStatistics", PyExc_RuntimeError);

  py::enum_<MeasurementAxis>(m, "MeasurementAxis").value("Z", MeasurementAxis::Z).value("PHI", MeasurementAxis::PHI);

  py::class_<MeasurementConfig>(m, "MeasurementConfig")
      .def_readonly("tau", &MeasurementConfig::tau)
      .def_readonly("dt", &MeasurementConfig::dt)
      .def_readonly("eta_m", &MeasurementConfig::eta_m)
      .def_readonly("nbar", &MeasurementConfig::nbar)
      .def_readonly("S", &MeasurementConfig::S)
      .def_readonly("Gamma_meas", &MeasurementConfig::Gamma_meas)
      .def_readonly("gamma", &MeasurementConfig::gamma)
      .def_readonly("T2star", &MeasurementConfig::T2star)
      .def_readonly("Omega", &MeasurementConfig::Omega)
      .def_readonly("axis", &MeasurementConfig::axis)
      .def("Gamma_ensemble", &MeasurementConfig::Gamma_ensemble)
      .def("with_dt", &MeasurementConfig::with_dt);

  m.def("config_from_timescale", &config_from_timescale, py::arg("tau"), py::arg("dt"), py::arg("eta_m") = 1.0,
        py::arg("T2star") = kInf, py::arg("Omega") = 0.0, py::arg("axis") = MeasurementAxis::Z,
        py::arg("chi_over_kappa") = 0.05, py::arg("kappa") = 2.0 * kPi * 1.0e7);

  py::class_<GeneratorSettings>(m, "GeneratorSettings")
      .def(py::init<>())
      .def_readwrite("config", &GeneratorSettings::config)
      .def_readwrite("n_steps", &GeneratorSettings::n_steps)
      .def_readwrite("seed", &GeneratorSettings::seed)
      .def_readwrite("substeps_per_dt", &GeneratorSettings::substeps_per_dt)
      .def_property(
          "initial_state", [](const GeneratorSettings& s) { return from_bloch(s.initial_state); },
          [](GeneratorSettings& s, const Bloch& q) { s.initial_state = to_bloch(q); });

  m.def(
      "load_config",
      [](const std::string& text) { return io::parse_run_config(io::json::parse(text)).generator; },
      py::arg("json_text"), "Generator settings from a JSON config (a preset name may be given under 'preset').");
  m.def("preset_names", &io::preset_names);

  m.def(
      "update_z", [](const Bloch& q, double r, const MeasurementConfig& c) { return from_bloch(update_z(to_bloch(q), r, c)); },
      py::arg("q"), py::arg("r"), py::arg("config"));
  m.def(
      "update_phi",
      [](const Bloch& q, double r, const MeasurementConfig& c) { return from_bloch(update_phi(to_bloch(q), r, c)); },
      py::arg("q"), py::arg("r"), py::arg("config"));
  m.def(
      "rabi_rotate", [](const Bloch& q, double theta) { return from_bloch(rabi_rotate(to_bloch(q), theta)); },
      py::arg("q"), py::arg("theta"));

  m.def(
      "generate",
      [](const GeneratorSettings& s) {
        GeneratedRecord g;
        {
          py::gil_scoped_release release;
          g = generate_record(s);
        }
        return py::make_tuple(vector_array(g.record.samples), states_array(g.truth.states));
      },
      py::arg("settings"), "Returns (samples, truth) with truth of shape (n_steps + 1, 3).");

  m.def(
      "reconstruct",
      [](const std::vector<double>& samples, const Bloch& initial, const MeasurementConfig& c) {
        return states_array(reconstruct(make_record(samples, c), to_bloch(initial), c).states);
      },
      py::arg("samples"), py::arg("initial"), py::arg("config"));

  m.def(
      "ensemble_moments",
      [](std::size_t n, const GeneratorSettings& s, unsigned threads) {
        EnsembleMoments mom;
        {
          py::gil_scoped_release release;
          mom = ensemble_moments(n, s, {threads, EnsembleSource::Truth});
        }
        std::vector<BlochVector> mean, se;
        for (std::size_t k = 0; k < mom.n_points(); ++k) {
          mean.push_back(mom.mean(k));
          se.push_back(mom.standard_error(k));
        }
        return py::make_tuple(states_array(mean), states_array(se));
      },
      py::arg("n"), py::arg("settings"), py::arg("threads") = 0, "Returns (mean, standard_error), each (n_steps + 1, 3).");

  m.def(
      "smooth",
      [](const std::vector<double>& samples, const Bloch& initial, const MeasurementConfig& c) {
        const auto states = smooth(make_record(samples, c), HermitianMatrix2::from_bloch(to_bloch(initial)), c);
        std::vector<BlochVector> rho, effect;
        for (const auto& s : states) {
          rho.push_back(s.rho.to_bloch());
          effect.push_back(s.E.to_bloch());
        }
        return py::make_tuple(states_array(rho), states_array(effect));
      },
      py::arg("samples"), py::arg("initial"), py::arg("config"),
      "Returns (rho, E) as Bloch vectors of the unit-trace forward state and effect.");

  m.def(
      "guessing_game",
      [](const MeasurementConfig& c, std::size_t before, std::size_t after, std::size_t games, std::uint64_t seed,
         const Bloch& initial) {
        GuessingGameResult r;
        {
          py::gil_scoped_release release;
          r = play_guessing_game({c, before, after, to_bloch(initial)}, games, seed);
        }
        py::dict d;
        d["games"] = r.games;
        d["forward_correct"] = r.forward_correct;
        d["smoothed_correct"] = r.smoothed_correct;
        d["p_value"] = r.p_value;
        return d;
      },
      py::arg("config"), py::arg("steps_before"), py::arg("steps_after"), py::arg("games"), py::arg("seed") = 0,
      py::arg("initial") = Bloch{0.0, 0.0, 1.0});

  m.def(
      "cascade",
      [](double tau, double dt, double eta_m, double gamma_pair, std::size_t n_steps, std::uint64_t seed,
         const std::string& initial) {
        CascadeConfig c;
        c.tau = tau;
        c.dt = dt;
        c.eta_m = eta_m;
        c.gamma_pair.fill(gamma_pair);
        const auto steps = cascade_trajectory(io::cascade_initial_state(initial), n_steps, c, seed);
        py::array_t<double> p({static_cast<py::ssize_t>(steps.size()), py::ssize_t{4}});
        auto pv = p.mutable_unchecked<2>();
        std::vector<double> conc, r;
        for (std::size_t k = 0; k < steps.size(); ++k) {
          for (int i = 0; i < 4; ++i) pv(k, i) = steps[k].state.p[i];
          conc.push_back(steps[k].C);
          r.push_back(steps[k].r);
        }
        return py::make_tuple(vector_array(r), p, vector_array(conc));
      },
      py::arg("tau"), py::arg("dt"), py::arg("eta_m") = 1.0, py::arg("gamma_pair") = 0.0, py::arg("n_steps") = 100,
      py::arg("seed") = 0, py::arg("initial") = "product", "Returns (r, populations (n+1, 4), concurrence).");
}
