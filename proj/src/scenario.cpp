#include "slowlight/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "slowlight/analysis.hpp"
#include "slowlight/errors.hpp"
#include "slowlight/io.hpp"
#include "slowlight/units.hpp"

namespace slowlight {

namespace fs = std::filesystem;

RelaxationSpec build_relaxation(const Config& cfg, const LevelScheme& scheme) {
  const int l2 = scheme.index_of("2");
  const int l3 = scheme.index_of("3");
  const int l5 = scheme.index_of("5");
  RelaxationSpec relax;
  relax.channels.push_back({l5, l2, units::rate_from_kHz(cfg.number("relax.G25_kHz"))});
  relax.channels.push_back({l5, l3, units::rate_from_kHz(cfg.number("relax.G35_kHz"))});
  relax.coherence_total[{std::min(l2, l5), std::max(l2, l5)}] =
      units::rate_from_kHz(cfg.number("relax.g25_kHz"));
  relax.coherence_total[{std::min(l3, l5), std::max(l3, l5)}] =
      units::rate_from_kHz(cfg.number("relax.g35_kHz"));
  relax.coherence_total[{std::min(l2, l3), std::max(l2, l3)}] =
      units::rate_from_kHz(cfg.number("relax.g23_kHz"));
  relax.check(scheme.size());
  return relax;
}

HoleBurnConfig build_hole(const Config& cfg) {
  HoleBurnConfig hole;
  hole.background_depth = cfg.number("hole.D");
  hole.hole_depth = cfg.number("hole.d");
  hole.fwhm = units::angular_from_kHz(cfg.number("hole.fwhm_kHz"));
  hole.center = units::angular_from_kHz(cfg.number("hole.center_kHz"));
  return hole;
}

FrequencyGrid build_grid(const Config& cfg) {
  return make_grid(units::angular_from_kHz(cfg.number("hole.fwhm_kHz")),
                   cfg.number("grid.span_factor"),
                   cfg.number("grid.points_per_fwhm"));
}

std::vector<double> build_initial_populations(const Config& cfg,
                                              const LevelScheme& scheme) {
  std::vector<double> pops(scheme.size(), 0.0);
  pops[scheme.index_of("1")] = cfg.number("init.rho11");
  pops[scheme.index_of("2")] = cfg.number("init.rho22");
  pops[scheme.index_of("3")] = cfg.number("init.rho33");
  const double ground = pops[0] + pops[1] + pops[2];
  if (ground > 1.0 + 1e-12)
    throw ValidationError("init.*: ground populations exceed 1");
  pops[scheme.index_of("5")] = std::max(0.0, 1.0 - ground);
  return pops;
}

double probe_rabi(const Config& cfg) {
  if (!cfg.is_set("rabi.P_kHz") &&
      (cfg.is_set("intensity.P_Wcm2") || cfg.is_set("calib.P_kHz_per_sqrtWcm2"))) {
    return rabi_from_intensity(cfg.number("intensity.P_Wcm2"),
                               {cfg.number("calib.P_kHz_per_sqrtWcm2")});
  }
  return units::angular_from_kHz(cfg.number("rabi.P_kHz"));
}

double control_rabi(const Config& cfg) {
  if (!cfg.is_set("rabi.A_kHz") &&
      (cfg.is_set("intensity.A_Wcm2") || cfg.is_set("calib.A_kHz_per_sqrtWcm2"))) {
    return rabi_from_intensity(cfg.number("intensity.A_Wcm2"),
                               {cfg.number("calib.A_kHz_per_sqrtWcm2")});
  }
  return units::angular_from_kHz(cfg.number("rabi.A_kHz"));
}

double effective_od(const Config& cfg) {
  const double od = cfg.number("od.eff");
  if (od >= 0.0) return od;
  return cfg.number("hole.D") * (1.0 - cfg.number("hole.d"));
}

namespace {

AbsorptionSpectrum build_spectrum(const Config& cfg) {
  AbsorptionSpectrum s = hole_spectrum(build_hole(cfg), build_grid(cfg));
  kramers_kronig(s);
  return s;
}

ProbePulseSpec build_probe_spec(const Config& cfg) {
  ProbePulseSpec p;
  p.fwhm_us = cfg.number("probe.fwhm_us");
  p.carrier_detuning = units::angular_from_kHz(cfg.number("probe.detuning_kHz"));
  p.peak_intensity = cfg.number("intensity.P_Wcm2");
  return p;
}

Pulse build_control_pulse(const Config& cfg, double start_us,
                          double rabi_override) {
  Pulse a;
  a.lower = "3";
  a.upper = "5";
  a.shape = PulseShape::Rectangular;
  a.start_us = start_us;
  a.duration_us = cfg.number("control.duration_us");
  a.rabi_peak = rabi_override >= 0.0 ? rabi_override : control_rabi(cfg);
  a.detuning = units::angular_from_MHz(cfg.number("control.detuning_MHz"));
  a.label = "A";
  return a;
}

struct TraceColumns {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;
};

TraceColumns full_trace_columns(const TimeSeries& series,
                                const TransmitResult& transmit,
                                const CheckedPulse& probe,
                                const std::string& control_label) {
  TraceColumns tc;
  tc.header = {"t_us",  "I_in",  "I_out",        "rho22",
               "rho33", "rho55", "Im_rho_probe", "Omega_A"};
  const int g = std::min(probe.ground, probe.excited);
  const int e = std::max(probe.ground, probe.excited);
  const auto& coh = series.coherence(g, e);
  std::vector<double> im(coh.size());
  for (std::size_t k = 0; k < coh.size(); ++k) im[k] = coh[k].imag();
  std::vector<double> omega_a(series.t.size(), 0.0);
  if (auto it = series.envelopes.find(control_label); it != series.envelopes.end())
    omega_a = it->second;
  tc.columns = {series.t,
                transmit.intensity_in,
                transmit.intensity_out,
                series.population(1),
                series.population(2),
                series.population(3),
                im,
                omega_a};
  return tc;
}

// Staged emission: everything lands in <out>/.staging first and is renamed
// into place only if the whole scenario succeeded.
class OutputStage {
 public:
  OutputStage(const fs::path& out_dir) : out_(out_dir) {
    std::error_code ec;
    fs::create_directories(out_, ec);
    if (ec) throw IoError("cannot create output directory '" + out_.string() + "'");
    staging_ = out_ / ".staging";
    fs::remove_all(staging_, ec);
    fs::create_directories(staging_, ec);
    if (ec) throw IoError("cannot create staging directory");
  }

  ~OutputStage() {
    std::error_code ec;
    fs::remove_all(staging_, ec);
  }

  fs::path path(const std::string& rel) {
    const fs::path p = staging_ / rel;
    std::error_code ec;
    fs::create_directories(p.parent_path(), ec);
    rel_paths_.push_back(rel);
    return p;
  }

  std::vector<fs::path> commit() {
    std::vector<fs::path> final_paths;
    for (const auto& rel : rel_paths_) {
      const fs::path src = staging_ / rel;
      const fs::path dst = out_ / rel;
      std::error_code ec;
      fs::create_directories(dst.parent_path(), ec);
      fs::remove(dst, ec);
      fs::rename(src, dst, ec);
      if (ec) throw IoError("cannot move '" + rel + "' into place: " + ec.message());
      final_paths.push_back(dst);
    }
    std::error_code ec;
    fs::remove_all(staging_, ec);
    return final_paths;
  }

 private:
  fs::path out_;
  fs::path staging_;
  std::vector<std::string> rel_paths_;
};

std::string describe_estimate(const OscillationEstimate& est) {
  std::string s = format_number(est.frequency_kHz) + " kHz (" + est.method;
  if (est.damping_rate)
    s += ", damping " + format_number(*est.damping_rate) + " /us";
  s += ")";
  if (!est.confidence.empty()) s += " [" + est.confidence + "]";
  return s;
}

}  // namespace

TransientResult run_transient(const Config& cfg, double control_rabi_override) {
  const LevelScheme scheme = build_pr_yso_scheme();
  const RelaxationSpec relax = build_relaxation(cfg, scheme);

  const double a_start =
      std::isnan(cfg.number("control.start_us")) ? 0.0 : cfg.number("control.start_us");
  Pulse control = build_control_pulse(cfg, a_start, control_rabi_override);

  // The slow light is modeled as a Gaussian probe envelope whose peak sits at
  // the control turn-on: the control triggers the atoms shelved by the leading
  // half of the probe.
  Pulse probe;
  probe.lower = "2";
  probe.upper = "5";
  probe.shape = PulseShape::Gaussian;
  probe.start_us = control.start_us;
  // Configured FWHM is the intensity pulse length; the Rabi (field) envelope
  // is sqrt(2) wider.
  probe.duration_us = std::numbers::sqrt2 * cfg.number("probe.fwhm_us");
  probe.rabi_peak = probe_rabi(cfg);
  probe.detuning = units::angular_from_kHz(cfg.number("probe.detuning_kHz"));
  probe.label = "P";

  ScenarioConfig sc;
  sc.scheme = scheme;
  sc.relaxation = relax;
  sc.pulses = validate_pulse_sequence({probe, control}, scheme);
  sc.initial_populations = build_initial_populations(cfg, scheme);
  sc.sample_step_us = cfg.number("sim.sample_step_us");
  sc.rtol = cfg.number("sim.rtol");
  sc.atol = cfg.number("sim.atol");

  double t0 = cfg.number("sim.t0_us");
  double t1 = cfg.number("sim.t1_us");
  if (std::isnan(t0))
    t0 = std::min(control.start_us, probe.start_us - 2.0 * probe.duration_us) - 2.0;
  if (std::isnan(t1))
    t1 = std::max(control.start_us + control.duration_us,
                  probe.start_us + 2.0 * probe.duration_us) + 5.0;

  TransientResult result;
  result.series = evolve(sc, t0, t1);
  for (const auto& p : sc.pulses.pulses)
    (p.label == "P" ? result.probe : result.control) = p;

  result.transmit = transmit_thin(
      result.series, result.probe, effective_od(cfg),
      relax.coherence_rate(result.probe.ground, result.probe.excited),
      1.0 / 16.0);

  // Intensity window: inside the control pulse, but only where the probe
  // envelope is strong enough for the normalized absorption to be defined.
  result.window_lo = control.start_us;
  result.window_hi = std::min(control.start_us + control.duration_us,
                              probe.start_us + probe.duration_us);
  return result;
}

namespace {

void emit_spectrum_csv(const AbsorptionSpectrum& s, const fs::path& path) {
  std::vector<double> det_kHz(s.grid.n), alphaL(s.grid.n), phase(s.grid.n);
  for (int i = 0; i < s.grid.n; ++i) {
    det_kHz[i] = units::kHz_from_angular(s.omega(i));
    alphaL[i] = s.alphaL[i];
    phase[i] = s.phase_filled ? s.phase[i] : 0.0;
  }
  write_csv(path, {"detuning_kHz", "alphaL", "phase_rad"},
            {det_kHz, alphaL, phase});
}

void emit_transient(const Config& cfg, OutputStage& stage, bool plots,
                    std::ostringstream& summary) {
  TransientResult r = run_transient(cfg);

  const auto tc = full_trace_columns(r.series, r.transmit, r.probe, "A");
  write_csv(stage.path("trace.csv"), tc.header, tc.columns);

  const auto diff = r.series.population_difference(3, 2);  // rho55 - rho33
  const double a0 = r.control.start_us;
  const double a1 = r.control.start_us + r.control.duration_us;

  const auto est_pop = extract_oscillation_frequency(r.series.t, diff, a0, a1);
  const auto est_int = extract_oscillation_frequency(
      r.series.t, r.transmit.intensity_out, r.window_lo, r.window_hi);

  summary << "control_rabi_kHz = "
          << format_number(units::kHz_from_angular(r.control.rabi_peak)) << "\n"
          << "control_area_pi = "
          << format_number(pulse_area(r.control) / std::numbers::pi) << "\n"
          << "f_osc_population = " << describe_estimate(est_pop) << "\n"
          << "f_osc_intensity = " << describe_estimate(est_int) << "\n"
          << "cycles_population = "
          << format_number(count_oscillation_cycles(r.series.t, diff, a0, a1))
          << "\n"
          << "cycles_intensity = "
          << format_number(count_oscillation_cycles(
                 r.series.t, r.transmit.intensity_out, r.window_lo, r.window_hi))
          << "\n";

  if (plots) {
    write_svg_plot(stage.path("trace.svg"), "transient switching", "t (us)",
                   "intensity / population difference", r.series.t,
                   {{"I_out", r.transmit.intensity_out}, {"rho55-rho33", diff}});
  }
}

void emit_slowlight(const Config& cfg, OutputStage& stage, bool plots,
                    std::ostringstream& summary) {
  const AbsorptionSpectrum spectrum = build_spectrum(cfg);
  const ProbePulseSpec probe = build_probe_spec(cfg);
  const OpticalPulseTrace in = probe_input_trace(probe, spectrum);
  const OpticalPulseTrace out = propagate_pulse(probe, spectrum);

  emit_spectrum_csv(spectrum, stage.path("spectrum.csv"));
  std::vector<double> t(in.field.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = in.t(i);
  write_csv(stage.path("trace.csv"), {"t_us", "I_in", "I_out"},
            {t, in.intensity(), out.intensity()});

  const DelayEstimate delay = measure_delay(in, out);
  const double tau_g = group_delay(spectrum, probe.carrier_detuning);
  summary << "delay_centroid_us = " << format_number(delay.centroid_us) << "\n"
          << "delay_peak_us = " << format_number(delay.peak_us) << "\n"
          << "group_delay_us = " << format_number(tau_g) << "\n"
          << "transmitted_energy_fraction = "
          << format_number(out.energy() / in.energy()) << "\n";

  if (plots) {
    write_svg_plot(stage.path("trace.svg"), "self-induced slow light",
                   "t (us)", "intensity", t,
                   {{"I_in", in.intensity()}, {"I_out", out.intensity()}});
    std::vector<double> det(spectrum.grid.n);
    for (int i = 0; i < spectrum.grid.n; ++i)
      det[i] = units::kHz_from_angular(spectrum.omega(i));
    write_svg_plot(stage.path("spectrum.svg"), "hole-burnt spectrum",
                   "detuning (kHz)", "alphaL / phase (rad)", det,
                   {{"alphaL", spectrum.alphaL}, {"phase", spectrum.phase}});
  }
}

SwitchingResult run_switch_core(const Config& cfg, const AbsorptionSpectrum& spectrum,
                                double detuning_MHz_override,
                                bool has_detuning_override) {
  const ProbePulseSpec probe = build_probe_spec(cfg);
  const OpticalPulseTrace slow = propagate_pulse(probe, spectrum);

  // Control turn-on defaults to the peak intensity position of the slow light.
  double a_start = cfg.number("control.start_us");
  if (std::isnan(a_start)) {
    const auto intensity = slow.intensity();
    const std::size_t peak = static_cast<std::size_t>(
        std::max_element(intensity.begin(), intensity.end()) - intensity.begin());
    a_start = slow.t(peak);
  }

  SwitchingScenarioParams params;
  params.scheme = build_pr_yso_scheme();
  params.relaxation = build_relaxation(cfg, params.scheme);
  params.control = build_control_pulse(cfg, a_start, -1.0);
  if (has_detuning_override)
    params.control.detuning = units::angular_from_MHz(detuning_MHz_override);
  params.probe_calibration = {cfg.number("calib.P_kHz_per_sqrtWcm2")};
  params.initial_populations = build_initial_populations(cfg, params.scheme);
  params.od_eff = cfg.number("od.eff");
  params.sample_step_us = cfg.number("sim.sample_step_us");
  params.rtol = cfg.number("sim.rtol");
  params.atol = cfg.number("sim.atol");
  return run_switching_scenario(probe, spectrum, params);
}

void emit_switch_point(const SwitchingResult& r, OutputStage& stage,
                       const std::string& prefix, bool plots,
                       double* contrast_out) {
  CheckedPulse probe;
  probe.ground = 1;
  probe.excited = 3;
  probe.label = "P";
  const auto tc = full_trace_columns(r.series, r.switched, probe, "A");
  write_csv(stage.path(prefix + "trace.csv"), tc.header, tc.columns);
  write_csv(stage.path(prefix + "baseline.csv"), {"t_us", "I_in", "I_out"},
            {r.unswitched.t, r.unswitched.intensity_in, r.unswitched.intensity_out});

  *contrast_out =
      switching_contrast(r.switched, r.unswitched, r.control_t0, r.control_t1);

  if (plots) {
    write_svg_plot(stage.path(prefix + "trace.svg"), "all-optical switching",
                   "t (us)", "intensity", r.switched.t,
                   {{"I_out switched", r.switched.intensity_out},
                    {"I_out unswitched", r.unswitched.intensity_out}});
  }
}

void emit_switch(const Config& cfg, OutputStage& stage, bool plots,
                 std::ostringstream& summary) {
  const AbsorptionSpectrum spectrum = build_spectrum(cfg);
  const SwitchingResult r = run_switch_core(cfg, spectrum, 0.0, false);
  double contrast = 0.0;
  emit_switch_point(r, stage, "", plots, &contrast);

  const ProbePulseSpec probe = build_probe_spec(cfg);
  const OpticalPulseTrace in = probe_input_trace(probe, spectrum);
  const DelayEstimate delay = measure_delay(in, r.slow_trace);
  summary << "control_detuning_MHz = "
          << format_number(cfg.number("control.detuning_MHz")) << "\n"
          << "switching_contrast = " << format_number(contrast) << "\n"
          << "slow_light_delay_us = " << format_number(delay.centroid_us) << "\n";
}

void emit_detuning_sweep(const Config& cfg, OutputStage& stage, bool plots,
                         std::ostringstream& summary) {
  const AbsorptionSpectrum spectrum = build_spectrum(cfg);
  const std::vector<double> detunings = cfg.list("sweep.detunings_MHz");
  std::vector<double> contrasts;
  for (std::size_t i = 0; i < detunings.size(); ++i) {
    const SwitchingResult r = run_switch_core(cfg, spectrum, detunings[i], true);
    double contrast = 0.0;
    emit_switch_point(r, stage, "point_" + std::to_string(i) + "/", plots,
                      &contrast);
    contrasts.push_back(contrast);
  }
  write_csv(stage.path("contrast.csv"), {"delta_MHz", "contrast"},
            {detunings, contrasts});

  bool monotone = true;
  for (std::size_t i = 1; i < contrasts.size(); ++i)
    if (std::abs(detunings[i]) > std::abs(detunings[i - 1]) &&
        contrasts[i] > contrasts[i - 1] + 1e-12)
      monotone = false;
  summary << "points = " << detunings.size() << "\n"
          << "contrast_monotone_nonincreasing = " << (monotone ? "yes" : "no")
          << "\n";
  for (std::size_t i = 0; i < detunings.size(); ++i)
    summary << "contrast[delta=" << format_number(detunings[i])
            << " MHz] = " << format_number(contrasts[i]) << "\n";
  if (plots)
    write_svg_plot(stage.path("contrast.svg"), "switching contrast vs detuning",
                   "delta (MHz)", "contrast", detunings,
                   {{"contrast", contrasts}});
}

void emit_intensity_sweep(const Config& cfg, OutputStage& stage, bool plots,
                          std::ostringstream& summary) {
  const std::vector<double> intensities = cfg.list("sweep.intensities_Wcm2");
  const IntensityCalibration calib{cfg.number("calib.A_kHz_per_sqrtWcm2")};
  std::vector<double> freqs, sqrt_i;
  std::vector<std::pair<double, double>> points;
  for (std::size_t i = 0; i < intensities.size(); ++i) {
    const double rabi = rabi_from_intensity(intensities[i], calib);
    TransientResult r = run_transient(cfg, rabi);
    const double a0 = r.control.start_us;
    const double a1 = r.control.start_us + r.control.duration_us;
    const auto est = extract_oscillation_frequency(
        r.series.t, r.series.population_difference(3, 2), a0, a1);
    const auto tc = full_trace_columns(r.series, r.transmit, r.probe, "A");
    write_csv(stage.path("point_" + std::to_string(i) + "/trace.csv"),
              tc.header, tc.columns);
    freqs.push_back(est.frequency_kHz);
    sqrt_i.push_back(std::sqrt(intensities[i]));
    points.emplace_back(intensities[i], est.frequency_kHz);
  }

  const SqrtLawFit fit = fit_sqrt_law(points);
  write_csv(stage.path("sweep.csv"),
            {"I_Wcm2", "sqrt_I", "f_osc_kHz", "residual_kHz"},
            {intensities, sqrt_i, freqs, fit.residuals});

  double max_resid = 0.0;
  for (double r : fit.residuals) max_resid = std::max(max_resid, std::abs(r));
  summary << "fit_slope_kHz_per_sqrtWcm2 = " << format_number(fit.slope) << "\n"
          << "fit_intercept_kHz = " << format_number(fit.intercept) << "\n"
          << "fit_r_squared = " << format_number(fit.r_squared) << "\n"
          << "max_abs_residual_kHz = " << format_number(max_resid) << "\n";
  if (plots)
    write_svg_plot(stage.path("sweep.svg"), "oscillation frequency vs sqrt(I_A)",
                   "sqrt(I) (sqrt(W/cm^2))", "f_osc (kHz)", sqrt_i,
                   {{"f_osc", freqs}});
}

}  // namespace

ScenarioOutcome run_scenario(const Config& cfg, const fs::path& out_dir,
                             bool emit_plots) {
  ScenarioOutcome outcome;
  outcome.scenario = cfg.str("scenario");
  OutputStage stage(out_dir);
  std::ostringstream summary;
  summary << "scenario = " << outcome.scenario << "\n";

  if (outcome.scenario == "transient") {
    emit_transient(cfg, stage, emit_plots, summary);
  } else if (outcome.scenario == "slowlight") {
    emit_slowlight(cfg, stage, emit_plots, summary);
  } else if (outcome.scenario == "switch") {
    emit_switch(cfg, stage, emit_plots, summary);
  } else if (outcome.scenario == "detuning-sweep") {
    emit_detuning_sweep(cfg, stage, emit_plots, summary);
  } else if (outcome.scenario == "intensity-sweep") {
    emit_intensity_sweep(cfg, stage, emit_plots, summary);
  } else {
    throw ValidationError("unrecognized scenario '" + outcome.scenario + "'");
  }

  write_text(stage.path("summary.txt"), summary.str());
  outcome.files = stage.commit();
  outcome.summary = summary.str();
  return outcome;
}

}  // namespace slowlight
