#include "slowlight/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "slowlight/errors.hpp"
#include "slowlight/fft.hpp"
#include "slowlight/units.hpp"

namespace slowlight {

namespace {
using std::complex;
constexpr complex<double> kI(0.0, 1.0);

// Gaussian field envelope, FWHM on the field.
double gaussian_field(double dtc, double fwhm) {
  const double u = 2.0 * dtc / fwhm;
  return std::exp2(-u * u);
}

struct TimeGrid {
  double dt;
  int n;
  double window() const { return dt * n; }
};

TimeGrid dual_grid(const AbsorptionSpectrum& spectrum) {
  const int n = spectrum.grid.n;
  if (!is_power_of_two(static_cast<std::size_t>(n)))
    throw ValidationError("propagate: spectrum grid length must be a power of two");
  return {units::two_pi / spectrum.grid.span, n};
}

// Spectrum sampled at an arbitrary frequency by linear interpolation,
// clamped to the (settled) edges.
void sample_spectrum(const AbsorptionSpectrum& s, double w, double* alphaL,
                     double* phase) {
  const int n = s.grid.n;
  double x = w / s.grid.step() + n / 2;
  x = std::clamp(x, 0.0, static_cast<double>(n - 1));
  const int i = std::min(static_cast<int>(x), n - 2);
  const double f = x - i;
  *alphaL = s.alphaL[i] * (1.0 - f) + s.alphaL[i + 1] * f;
  if (s.phase_filled)
    *phase = s.phase[i] * (1.0 - f) + s.phase[i + 1] * f;
  else
    *phase = 0.0;
}

}  // namespace

std::vector<double> OpticalPulseTrace::intensity() const {
  std::vector<double> out(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) out[i] = std::norm(field[i]);
  return out;
}

double OpticalPulseTrace::energy() const {
  double e = 0.0;
  for (const auto& f : field) e += std::norm(f);
  return e * dt;
}

void ProbePulseSpec::validate() const {
  if (fwhm_us <= 0.0) throw ValidationError("probe: FWHM must be positive");
  if (peak_intensity < 0.0)
    throw ValidationError("probe: intensity must be non-negative");
}

OpticalPulseTrace probe_input_trace(const ProbePulseSpec& probe,
                                    const AbsorptionSpectrum& spectrum) {
  probe.validate();
  const TimeGrid g = dual_grid(spectrum);
  if (g.window() < 8.0 * probe.fwhm_us)
    throw ValidationError("propagate: time window shorter than 8x the probe FWHM");
  // fwhm_us is the intensity-profile FWHM (the measured pulse length); the
  // field envelope is sqrt(2) wider.
  const double field_fwhm = std::numbers::sqrt2 * probe.fwhm_us;
  // Field-Gaussian spectral sigma; require comfortable margin inside a
  // quarter of the grid span.
  const double sigma_t = field_fwhm / (2.0 * std::sqrt(2.0 * std::numbers::ln2));
  const double sigma_w = 1.0 / sigma_t;
  if (6.0 * sigma_w + std::abs(probe.carrier_detuning) > 0.25 * spectrum.grid.span)
    throw ValidationError("propagate: probe bandwidth exceeds a quarter of the grid span");

  OpticalPulseTrace trace;
  trace.t0 = 0.0;
  trace.dt = g.dt;
  trace.label = "P_in";
  trace.field.resize(g.n);
  // A third of the window keeps both Gaussian tails well clear of the ends
  // while leaving room for the delayed output.
  const double center = g.window() / 3.0;
  const double amp = std::sqrt(probe.peak_intensity);
  for (int m = 0; m < g.n; ++m)
    trace.field[m] = amp * gaussian_field(trace.t(m) - center, field_fwhm);
  return trace;
}

OpticalPulseTrace propagate_pulse(const ProbePulseSpec& probe,
                                  const AbsorptionSpectrum& spectrum) {
  OpticalPulseTrace in = probe_input_trace(probe, spectrum);
  const int n = spectrum.grid.n;
  const double dw = spectrum.grid.step();

  // Analysis with e^{+i w t}, synthesis with e^{-i w t}: a positive phase
  // slope then delays the pulse.
  std::vector<complex<double>> buf = in.field;
  fft(buf, true);
  for (int k = 0; k < n; ++k) {
    const double w = dw * (k <= n / 2 ? k : k - n);
    double alphaL = 0.0, phase = 0.0;
    sample_spectrum(spectrum, w + probe.carrier_detuning, &alphaL, &phase);
    buf[k] *= std::exp(complex<double>(-0.5 * alphaL, phase));
  }
  fft(buf, false);

  OpticalPulseTrace out;
  out.t0 = in.t0;
  out.dt = in.dt;
  out.label = "P_out";
  out.field = std::move(buf);

  double total = 0.0;
  for (const auto& f : out.field) total += std::norm(f);
  const int edge = std::max(2, n / 50);
  double edge_energy = 0.0;
  for (int m = 0; m < edge; ++m)
    edge_energy += std::norm(out.field[m]) + std::norm(out.field[n - 1 - m]);
  if (total > 0.0 && edge_energy > 1e-6 * total)
    throw NumericalError("propagate: output energy reaches the window edge");
  return out;
}

TransmitResult transmit_thin(const TimeSeries& series,
                             const CheckedPulse& probe_pulse, double od_eff,
                             double gamma_probe, double eps_rel) {
  auto env_it = series.envelopes.find(probe_pulse.label);
  if (env_it == series.envelopes.end())
    throw ValidationError("transmit_thin: probe label '" + probe_pulse.label +
                          "' not found in the series");
  const auto& omega_p = env_it->second;
  const int g = probe_pulse.ground, e = probe_pulse.excited;
  const auto& coh = series.coherence(std::min(g, e), std::max(g, e));
  const double sign = g < e ? 1.0 : -1.0;  // Im rho_ge from the stored rho_ij

  const double omega_max = *std::max_element(omega_p.begin(), omega_p.end());
  const double eps = eps_rel * omega_max;

  TransmitResult res;
  res.t = series.t;
  const std::size_t ns = series.t.size();
  res.intensity_in.resize(ns);
  res.intensity_out.resize(ns);
  res.absorption.resize(ns);

  std::size_t in_pulse = 0, undefined = 0;
  const complex<double> dephase = std::exp(-kI * probe_pulse.phase);
  for (std::size_t k = 0; k < ns; ++k) {
    const double om = omega_p[k];
    const double i_in = omega_max > 0.0 ? (om / omega_max) * (om / omega_max) : 0.0;
    double a = 0.0;
    if (om > eps) {
      const double im = sign * (dephase * coh[k]).imag();
      a = 2.0 * gamma_probe * im / om;
    }
    if (om >= omega_max / 16.0) {
      ++in_pulse;
      if (om <= eps) ++undefined;
    }
    res.intensity_in[k] = i_in;
    res.absorption[k] = a;
    res.intensity_out[k] = i_in * std::exp(-od_eff * a);
  }
  if (in_pulse > 0 && undefined > in_pulse / 5)
    throw NumericalError(
        "transmit_thin: envelope threshold leaves more than 20% of in-pulse "
        "samples undefined");
  return res;
}

SwitchingResult run_switching_scenario(const ProbePulseSpec& probe,
                                       const AbsorptionSpectrum& spectrum,
                                       const SwitchingScenarioParams& params) {
  SwitchingResult result;
  result.slow_trace = propagate_pulse(probe, spectrum);
  const auto& slow = result.slow_trace;

  const double omega_peak =
      probe.peak_intensity > 0.0
          ? rabi_from_intensity(probe.peak_intensity, params.probe_calibration)
          : 0.0;
  const double field_peak = std::sqrt(std::max(probe.peak_intensity, 1e-300));

  auto envelope = std::make_shared<SampledEnvelope>();
  envelope->t0 = slow.t0;
  envelope->dt = slow.dt;
  envelope->values.resize(slow.field.size());
  for (std::size_t m = 0; m < slow.field.size(); ++m)
    envelope->values[m] = omega_peak * std::abs(slow.field[m]) / field_peak;

  // Evolve over the union of the control window and the slow pulse support.
  const double env_max =
      *std::max_element(envelope->values.begin(), envelope->values.end());
  double t_lo = slow.t0 + slow.dt * static_cast<double>(slow.field.size() - 1);
  double t_hi = slow.t0;
  for (std::size_t m = 0; m < envelope->values.size(); ++m) {
    if (envelope->values[m] >= 1e-4 * env_max) {
      t_lo = std::min(t_lo, slow.t(m));
      t_hi = std::max(t_hi, slow.t(m));
    }
  }

  PulseSequence raw{params.control};
  auto control_checked = validate_pulse_sequence(raw, params.scheme);
  if (params.control.rabi_peak != 0.0) {
    const auto [c0, c1] = control_checked.pulses.front().window();
    result.control_t0 = c0;
    result.control_t1 = c1;
    t_lo = std::min(t_lo, c0);
    t_hi = std::max(t_hi, c1);
  }
  t_lo = std::max(t_lo - params.margin_us, slow.t0);
  t_hi = std::min(t_hi + params.margin_us,
                  slow.t0 + slow.dt * static_cast<double>(slow.field.size() - 1));

  CheckedPulse probe_pulse;
  probe_pulse.ground = params.scheme.index_of(params.probe_lower);
  probe_pulse.excited = params.scheme.index_of(params.probe_upper);
  if (params.scheme.roles[probe_pulse.ground] != LevelRole::Ground)
    std::swap(probe_pulse.ground, probe_pulse.excited);
  probe_pulse.detuning = probe.carrier_detuning;
  probe_pulse.label = params.probe_label;
  probe_pulse.sampled = envelope;

  const double od_eff =
      params.od_eff >= 0.0
          ? params.od_eff
          : spectrum.alphaL[static_cast<std::size_t>(spectrum.grid.n) / 2];
  const double gamma_probe =
      params.relaxation.coherence_rate(probe_pulse.ground, probe_pulse.excited);

  auto run = [&](bool with_control) {
    ScenarioConfig cfg;
    cfg.scheme = params.scheme;
    cfg.relaxation = params.relaxation;
    cfg.pulses.pulses.push_back(probe_pulse);
    if (with_control && params.control.rabi_peak != 0.0)
      cfg.pulses.pulses.push_back(control_checked.pulses.front());
    cfg.initial_populations = params.initial_populations;
    cfg.sample_step_us = params.sample_step_us;
    cfg.rtol = params.rtol;
    cfg.atol = params.atol;
    return evolve(cfg, t_lo, t_hi);
  };

  // A strict envelope threshold: outside it the coherence outlives the dying
  // envelope and the normalized absorption diverges.
  const double eps_rel = 1.0 / 16.0;
  result.series = run(true);
  result.switched =
      transmit_thin(result.series, probe_pulse, od_eff, gamma_probe, eps_rel);
  TimeSeries baseline = run(false);
  result.unswitched =
      transmit_thin(baseline, probe_pulse, od_eff, gamma_probe, eps_rel);
  return result;
}

double switching_contrast(const TransmitResult& switched,
                          const TransmitResult& unswitched, double t_lo,
                          double t_hi, double floor_rel) {
  if (switched.t.size() != unswitched.t.size())
    throw ValidationError("switching_contrast: trace grids differ");
  const double peak =
      *std::max_element(unswitched.intensity_out.begin(), unswitched.intensity_out.end());
  double min_ratio = 1.0;
  for (std::size_t k = 0; k < switched.t.size(); ++k) {
    if (switched.t[k] < t_lo || switched.t[k] > t_hi) continue;
    if (unswitched.intensity_out[k] < floor_rel * peak) continue;
    min_ratio = std::min(min_ratio,
                         switched.intensity_out[k] / unswitched.intensity_out[k]);
  }
  return 1.0 - min_ratio;
}

}  // namespace slowlight
