#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hexcpg/check.hpp"
#include "hexcpg/config.hpp"
#include "hexcpg/errors.hpp"
#include "hexcpg/sim.hpp"

namespace py = pybind11;
using namespace hexcpg;

namespace {

py::object json_to_py(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

RunConfig config_from_py(const py::object& config) {
  if (config.is_none()) return RunConfig{};
  if (py::isinstance<py::str>(config)) return RunConfig::from_file(config.cast<std::string>());
  const std::string text =
      py::module_::import("json").attr("dumps")(config).cast<std::string>();
  return RunConfig::from_json(nlohmann::json::parse(text));
}

}  // namespace

PYBIND11_MODULE(_hexcpg, m) {
  m.doc() = "hexapod locomotion stack: oscillator network, leg kinematics, skill "
            "sampling and the kinematic rollout loop";
  m.attr("__version__") = "0.1.0";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<Unreachable>(m, "UnreachableError", PyExc_ValueError);
  py::register_exception<ShapeMismatch>(m, "ShapeMismatchError", PyExc_ValueError);
  py::register_exception<DegenerateGoal>(m, "DegenerateGoalError", PyExc_ValueError);

  // --- oscillator ---------------------------------------------------------
  py::enum_<PhaseMode>(m, "PhaseMode")
      .value("EmbeddedAlpha", PhaseMode::EmbeddedAlpha)
      .value("CoupledTheta", PhaseMode::CoupledTheta);

  py::class_<OscillatorParams>(m, "OscillatorParams")
      .def(py::init<>())
      .def_readwrite("a", &OscillatorParams::a)
      .def_readwrite("mu_min", &OscillatorParams::mu_min)
      .def_readwrite("mu_max", &OscillatorParams::mu_max)
      .def_readwrite("omega_min", &OscillatorParams::omega_min)
      .def_readwrite("Omega", &OscillatorParams::Omega)
      .def_readwrite("dt", &OscillatorParams::dt)
      .def_readwrite("phase_mode", &OscillatorParams::phase_mode)
      .def_readwrite("coupling_weights", &OscillatorParams::coupling_weights)
      .def_readwrite("coupling_bias", &OscillatorParams::coupling_bias)
      .def("validate", &OscillatorParams::validate);

  py::class_<OscillatorState>(m, "OscillatorState")
      .def(py::init<>())
      .def_readwrite("r", &OscillatorState::r)
      .def_readwrite("v", &OscillatorState::v)
      .def_readwrite("theta", &OscillatorState::theta)
      .def_readwrite("alpha", &OscillatorState::alpha);

  py::class_<ControlInputs>(m, "ControlInputs")
      .def(py::init<>())
      .def_readwrite("mu", &ControlInputs::mu)
      .def_readwrite("omega", &ControlInputs::omega)
      .def_readwrite("omega_m", &ControlInputs::omega_m);

  m.def("default_state", &default_state, py::arg("params"));
  m.def("step_oscillator", &step, py::arg("state"), py::arg("inputs"), py::arg("params"));
  m.def("mixed_phase", &mixed_phase, py::arg("state"));
  m.def("map_amplitude_factor", &map_amplitude_factor, py::arg("mu"), py::arg("params"));
  m.def("map_frequency_factor", &map_frequency_factor, py::arg("omega"), py::arg("omega_m"),
        py::arg("omega_min") = 0.0);
  m.def("compute_omega_max", &compute_omega_max, py::arg("skill_norm"), py::arg("Omega"));
  m.def("default_coupling_bias", &default_coupling_bias);

  // --- kinematics ---------------------------------------------------------
  py::class_<MorphParams>(m, "MorphParams")
      .def(py::init<>())
      .def_readwrite("l", &MorphParams::l)
      .def_readwrite("h", &MorphParams::h)
      .def_readwrite("g_p", &MorphParams::g_p)
      .def_readwrite("g_c", &MorphParams::g_c)
      .def_readwrite("w_y", &MorphParams::w_y)
      .def("as_array", &MorphParams::as_array);

  py::class_<LegGeometry>(m, "LegGeometry")
      .def(py::init<>())
      .def_readwrite("l1", &LegGeometry::l1)
      .def_readwrite("l2", &LegGeometry::l2)
      .def_readwrite("l3", &LegGeometry::l3);

  py::class_<JointAngles>(m, "JointAngles")
      .def(py::init<>())
      .def(py::init([](double j0, double j1, double j2) {
             return JointAngles{j0, j1, j2};
           }),
           py::arg("j0"), py::arg("j1"), py::arg("j2"))
      .def_readwrite("j0", &JointAngles::j0)
      .def_readwrite("j1", &JointAngles::j1)
      .def_readwrite("j2", &JointAngles::j2);

  py::class_<FootPosition>(m, "FootPosition")
      .def(py::init<>())
      .def(py::init([](double x, double y, double z) {
             return FootPosition{x, y, z};
           }),
           py::arg("x"), py::arg("y"), py::arg("z"))
      .def_readwrite("x", &FootPosition::x)
      .def_readwrite("y", &FootPosition::y)
      .def_readwrite("z", &FootPosition::z);

  m.def("foot_position", &foot_position, py::arg("r"), py::arg("phi"), py::arg("morph"),
        py::arg("geometry"));
  m.def("forward_kinematics", &forward_kinematics, py::arg("q"), py::arg("geometry"));
  m.def("inverse_kinematics", &inverse_kinematics, py::arg("p"), py::arg("geometry"));

  // --- skill sampling -----------------------------------------------------
  py::class_<RandomStream>(m, "RandomStream")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def("uniform", py::overload_cast<>(&RandomStream::uniform))
      .def("uniform", py::overload_cast<double, double>(&RandomStream::uniform),
           py::arg("lo"), py::arg("hi"))
      .def("split", &RandomStream::split, py::arg("stream_id"));

  py::class_<SkillVector>(m, "SkillVector")
      .def(py::init<>())
      .def(py::init([](double x, double y) { return SkillVector{x, y}; }), py::arg("x"),
           py::arg("y"))
      .def_readwrite("x", &SkillVector::x)
      .def_readwrite("y", &SkillVector::y)
      .def("norm", &SkillVector::norm);

  m.def("sample_skill", &sample_skill, py::arg("rng"));
  m.def("skill_frequency", &skill_frequency, py::arg("z"), py::arg("Omega"));

  // --- diagnostics and rollouts --------------------------------------------
  m.def("run_checks", [](const std::string& suite) { return json_to_py(run_checks(suite)); },
        py::arg("suite") = "all");

  m.def("log_columns", [] { return TrajectoryLog::columns(); });

  m.def(
      "rollout",
      [](const py::object& config) {
        const RunConfig cfg = config_from_py(config);
        RolloutResult res;
        {
          py::gil_scoped_release release;
          res = hexcpg::rollout(cfg);
        }
        py::dict out;
        out["summary"] = json_to_py(nlohmann::json::parse(res.summary.to_json()));
        out["columns"] = TrajectoryLog::columns();
        py::list rows;
        for (std::size_t i = 0; i < res.log.rows(); ++i) {
          const auto& r = res.log.row(i);
          rows.append(py::cast(r));
        }
        out["rows"] = rows;
        return out;
      },
      py::arg("config") = py::none(),
      "Runs one rollout. `config` is a path, a config dict, or None for the "
      "defaults; returns {'summary', 'columns', 'rows'}.");

  m.def("default_config", [] { return json_to_py(RunConfig{}.to_json()); });
}
