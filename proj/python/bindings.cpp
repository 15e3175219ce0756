// Python bindings for the core operations.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "slowlight/analysis.hpp"
#include "slowlight/config.hpp"
#include "slowlight/errors.hpp"
#include "slowlight/liouville.hpp"
#include "slowlight/model.hpp"
#include "slowlight/propagation.hpp"
#include "slowlight/scenario.hpp"
#include "slowlight/spectra.hpp"
#include "slowlight/units.hpp"

namespace py = pybind11;
using namespace slowlight;

PYBIND11_MODULE(slowlight, m) {
  m.doc() = "Slow light and all-optical switching in a spectral-hole-burning "
            "medium";

  py::register_exception<ValidationError>(m, "ValidationError",
                                          PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError",
                                         PyExc_ArithmeticError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  m.def("angular_from_kHz", &units::angular_from_kHz, py::arg("nu_kHz"));
  m.def("kHz_from_angular", &units::kHz_from_angular, py::arg("omega"));

  py::class_<LevelScheme>(m, "LevelScheme")
      .def_readonly("labels", &LevelScheme::labels)
      .def_readonly("transitions", &LevelScheme::transitions)
      .def("index_of", &LevelScheme::index_of)
      .def("allowed", &LevelScheme::allowed);
  m.def("build_pr_yso_scheme", &build_pr_yso_scheme);

  py::class_<IntensityCalibration>(m, "IntensityCalibration")
      .def(py::init([](double k) {
             return IntensityCalibration{k};
           }),
           py::arg("k_kHz_per_sqrt_intensity"))
      .def_readwrite("k_kHz_per_sqrt_intensity",
                     &IntensityCalibration::k_kHz_per_sqrt_intensity);
  m.def("rabi_from_intensity", &rabi_from_intensity, py::arg("intensity_W_cm2"),
        py::arg("calibration"));

  py::enum_<PulseShape>(m, "PulseShape")
      .value("Rectangular", PulseShape::Rectangular)
      .value("Gaussian", PulseShape::Gaussian);

  py::class_<Pulse>(m, "Pulse")
      .def(py::init<>())
      .def_readwrite("lower", &Pulse::lower)
      .def_readwrite("upper", &Pulse::upper)
      .def_readwrite("shape", &Pulse::shape)
      .def_readwrite("start_us", &Pulse::start_us)
      .def_readwrite("duration_us", &Pulse::duration_us)
      .def_readwrite("rabi_peak", &Pulse::rabi_peak)
      .def_readwrite("detuning", &Pulse::detuning)
      .def_readwrite("phase", &Pulse::phase)
      .def_readwrite("label", &Pulse::label);
  m.def("pulse_area",
        py::overload_cast<const Pulse&>(&pulse_area), py::arg("pulse"));

  py::class_<HoleBurnConfig>(m, "HoleBurnConfig")
      .def(py::init<>())
      .def_readwrite("background_depth", &HoleBurnConfig::background_depth)
      .def_readwrite("center", &HoleBurnConfig::center)
      .def_readwrite("hole_depth", &HoleBurnConfig::hole_depth)
      .def_readwrite("fwhm", &HoleBurnConfig::fwhm);

  py::class_<FrequencyGrid>(m, "FrequencyGrid")
      .def_readonly("span", &FrequencyGrid::span)
      .def_readonly("n", &FrequencyGrid::n)
      .def("omega", &FrequencyGrid::omega);
  m.def("make_grid", &make_grid, py::arg("fwhm"), py::arg("span_factor") = 40.0,
        py::arg("points_per_fwhm") = 50.0);

  py::class_<AbsorptionSpectrum>(m, "AbsorptionSpectrum")
      .def_readonly("grid", &AbsorptionSpectrum::grid)
      .def_readonly("alphaL", &AbsorptionSpectrum::alphaL)
      .def_readonly("phase", &AbsorptionSpectrum::phase)
      .def_readonly("phase_filled", &AbsorptionSpectrum::phase_filled)
      .def("omega", &AbsorptionSpectrum::omega);
  m.def("hole_spectrum", &hole_spectrum, py::arg("config"), py::arg("grid"));
  m.def("kramers_kronig", &kramers_kronig, py::arg("spectrum"));
  m.def("group_delay", &group_delay, py::arg("spectrum"), py::arg("omega0"));

  py::class_<ProbePulseSpec>(m, "ProbePulseSpec")
      .def(py::init<>())
      .def_readwrite("fwhm_us", &ProbePulseSpec::fwhm_us)
      .def_readwrite("carrier_detuning", &ProbePulseSpec::carrier_detuning)
      .def_readwrite("peak_intensity", &ProbePulseSpec::peak_intensity);

  py::class_<OpticalPulseTrace>(m, "OpticalPulseTrace")
      .def_readonly("t0", &OpticalPulseTrace::t0)
      .def_readonly("dt", &OpticalPulseTrace::dt)
      .def_readonly("field", &OpticalPulseTrace::field)
      .def("t", &OpticalPulseTrace::t)
      .def("intensity", &OpticalPulseTrace::intensity)
      .def("energy", &OpticalPulseTrace::energy);
  m.def("probe_input_trace", &probe_input_trace, py::arg("probe"),
        py::arg("spectrum"));
  m.def("propagate_pulse", &propagate_pulse, py::arg("probe"),
        py::arg("spectrum"));

  py::class_<DelayEstimate>(m, "DelayEstimate")
      .def_readonly("centroid_us", &DelayEstimate::centroid_us)
      .def_readonly("peak_us", &DelayEstimate::peak_us);
  m.def("measure_delay", &measure_delay, py::arg("input"), py::arg("output"));

  py::class_<OscillationEstimate>(m, "OscillationEstimate")
      .def_readonly("frequency_kHz", &OscillationEstimate::frequency_kHz)
      .def_readonly("amplitude", &OscillationEstimate::amplitude)
      .def_readonly("damping_rate", &OscillationEstimate::damping_rate)
      .def_readonly("method", &OscillationEstimate::method)
      .def_readonly("confidence", &OscillationEstimate::confidence);
  m.def("extract_oscillation_frequency", &extract_oscillation_frequency,
        py::arg("t"), py::arg("values"), py::arg("window_lo"),
        py::arg("window_hi"), py::arg("detrend_order") = 2);
  m.def("count_oscillation_cycles", &count_oscillation_cycles, py::arg("t"),
        py::arg("values"), py::arg("window_lo"), py::arg("window_hi"),
        py::arg("detrend_order") = 2);

  py::class_<SqrtLawFit>(m, "SqrtLawFit")
      .def_readonly("slope", &SqrtLawFit::slope)
      .def_readonly("intercept", &SqrtLawFit::intercept)
      .def_readonly("r_squared", &SqrtLawFit::r_squared)
      .def_readonly("residuals", &SqrtLawFit::residuals);
  m.def("fit_sqrt_law", &fit_sqrt_law, py::arg("intensity_frequency_points"));

  py::class_<ScenarioOutcome>(m, "ScenarioOutcome")
      .def_readonly("scenario", &ScenarioOutcome::scenario)
      .def_readonly("summary", &ScenarioOutcome::summary)
      .def_property_readonly("files", [](const ScenarioOutcome& o) {
        std::vector<std::string> out;
        for (const auto& p : o.files) out.push_back(p.string());
        return out;
      });
  m.def(
      "run_scenario",
      [](const std::string& config_path, const std::string& out_dir,
         bool plots) {
        return run_scenario(Config::load(config_path), out_dir, plots);
      },
      py::arg("config_path"), py::arg("out_dir"), py::arg("plots") = false);
  m.def("config_schema_help", &Config::schema_help);
}
