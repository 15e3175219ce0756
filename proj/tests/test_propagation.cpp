#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "slowlight/analysis.hpp"
#include "slowlight/errors.hpp"
#include "slowlight/propagation.hpp"
#include "slowlight/spectra.hpp"
#include "slowlight/units.hpp"

using namespace slowlight;

namespace {

AbsorptionSpectrum flat_spectrum(double alphaL, double hole_fwhm_kHz = 600.0) {
  const double fwhm = units::angular_from_kHz(hole_fwhm_kHz);
  const FrequencyGrid grid = make_grid(fwhm, 40.0, 50.0);
  AbsorptionSpectrum s;
  s.grid = grid;
  s.alphaL.assign(grid.n, alphaL);
  s.phase.assign(grid.n, 0.0);
  s.phase_filled = true;
  return s;
}

AbsorptionSpectrum default_hole_spectrum(double fwhm_kHz = 600.0) {
  HoleBurnConfig cfg;
  cfg.background_depth = 10.0;
  cfg.hole_depth = 0.8;
  cfg.fwhm = units::angular_from_kHz(fwhm_kHz);
  AbsorptionSpectrum s = hole_spectrum(cfg, make_grid(cfg.fwhm, 40.0, 50.0));
  kramers_kronig(s);
  return s;
}

ProbePulseSpec default_probe() {
  ProbePulseSpec p;
  p.fwhm_us = 10.0;
  p.carrier_detuning = 0.0;
  p.peak_intensity = 3.0;
  return p;
}

}  // namespace

TEST_CASE("probe input trace") {
  const AbsorptionSpectrum s = flat_spectrum(0.0);
  const ProbePulseSpec p = default_probe();
  const OpticalPulseTrace in = probe_input_trace(p, s);

  SUBCASE("Gaussian with the configured peak and FWHM") {
    double peak = 0.0;
    std::size_t peak_idx = 0;
    for (std::size_t m = 0; m < in.field.size(); ++m) {
      if (std::norm(in.field[m]) > peak) {
        peak = std::norm(in.field[m]);
        peak_idx = m;
      }
    }
    // The envelope center falls between grid samples, so the sampled peak
    // sits a hair below the configured value.
    CHECK(peak == doctest::Approx(3.0).epsilon(1e-4));
    // fwhm_us is the intensity-profile FWHM: half intensity at +/- 5 us.
    const double t_half = in.t(peak_idx) + 5.0;
    const std::size_t k = static_cast<std::size_t>((t_half - in.t0) / in.dt);
    CHECK(std::norm(in.field[k]) == doctest::Approx(1.5).epsilon(1e-2));
  }

  SUBCASE("window too short for the FWHM is rejected") {
    ProbePulseSpec wide = p;
    wide.fwhm_us = 12.0;  // window is ~85 us < 8 x 12
    CHECK_THROWS_AS(probe_input_trace(wide, s), ValidationError);
  }

  SUBCASE("probe bandwidth beyond a quarter of the span is rejected") {
    ProbePulseSpec sharp = p;
    sharp.fwhm_us = 0.05;
    CHECK_THROWS_AS(probe_input_trace(sharp, s), ValidationError);
  }
}

TEST_CASE("pulse propagation") {
  const ProbePulseSpec p = default_probe();

  SUBCASE("transparent medium is the identity") {
    const AbsorptionSpectrum s = flat_spectrum(0.0);
    const OpticalPulseTrace in = probe_input_trace(p, s);
    const OpticalPulseTrace out = propagate_pulse(p, s);
    double max_diff = 0.0;
    for (std::size_t m = 0; m < in.field.size(); ++m)
      max_diff = std::max(max_diff, std::abs(out.field[m] - in.field[m]));
    CHECK(max_diff < 1e-9);
    CHECK(std::abs(out.energy() / in.energy() - 1.0) <= 1e-9);
  }

  SUBCASE("constant absorption obeys Beer's law with zero delay") {
    const double d = 3.0;
    const AbsorptionSpectrum s = flat_spectrum(d);
    const OpticalPulseTrace in = probe_input_trace(p, s);
    const OpticalPulseTrace out = propagate_pulse(p, s);
    double peak_in = 0.0, peak_out = 0.0;
    for (std::size_t m = 0; m < in.field.size(); ++m) {
      peak_in = std::max(peak_in, std::norm(in.field[m]));
      peak_out = std::max(peak_out, std::norm(out.field[m]));
    }
    CHECK(peak_out == doctest::Approx(peak_in * std::exp(-d)).epsilon(1e-9));
    const DelayEstimate delay = measure_delay(in, out);
    CHECK(std::abs(delay.centroid_us) < 1e-9);
  }

  SUBCASE("pure linear phase is an exact time shift") {
    const double tau = 3.0;
    AbsorptionSpectrum s = flat_spectrum(0.0);
    for (int i = 0; i < s.grid.n; ++i) s.phase[i] = tau * s.omega(i);
    const OpticalPulseTrace in = probe_input_trace(p, s);
    const OpticalPulseTrace out = propagate_pulse(p, s);
    CHECK(std::abs(out.energy() / in.energy() - 1.0) <= 1e-9);
    const DelayEstimate delay = measure_delay(in, out);
    CHECK(delay.centroid_us == doctest::Approx(tau).epsilon(1e-9));
    CHECK(delay.peak_us ==
          doctest::Approx(tau).epsilon(in.dt / 100.0 / tau));
  }

  SUBCASE("hole-delayed pulse matches the group delay") {
    const AbsorptionSpectrum s = default_hole_spectrum();
    const OpticalPulseTrace in = probe_input_trace(p, s);
    const OpticalPulseTrace out = propagate_pulse(p, s);
    const DelayEstimate delay = measure_delay(in, out);
    const double tau_g = group_delay(s, 0.0);
    CHECK(delay.centroid_us == doctest::Approx(tau_g).epsilon(0.05));
    CHECK(out.energy() < in.energy());  // attenuated
  }
}

namespace {

// A hand-built series with a constant probe envelope and a fixed coherence.
TimeSeries constant_series(double omega_p, double im_rho, std::size_t n) {
  TimeSeries ts;
  ts.n_levels = 2;
  ts.t.resize(n);
  std::vector<std::complex<double>> coh(n, {0.0, im_rho});
  std::vector<double> env(n, omega_p);
  for (std::size_t k = 0; k < n; ++k) ts.t[k] = 0.1 * static_cast<double>(k);
  ts.coherences[{0, 1}] = coh;
  ts.envelopes["P"] = env;
  return ts;
}

CheckedPulse probe_handle() {
  CheckedPulse p;
  p.ground = 0;
  p.excited = 1;
  p.label = "P";
  return p;
}

}  // namespace

TEST_CASE("thin-medium transmission") {
  const double gamma = 0.05;
  const double omega = 0.01;

  SUBCASE("zero coherence transmits everything") {
    const TimeSeries ts = constant_series(omega, 0.0, 64);
    const TransmitResult r = transmit_thin(ts, probe_handle(), 2.0, gamma);
    for (std::size_t k = 0; k < ts.t.size(); ++k) {
      CHECK(r.absorption[k] == 0.0);
      CHECK(r.intensity_out[k] == doctest::Approx(r.intensity_in[k]));
    }
  }

  SUBCASE("weak-probe steady state gives a = 1 and Beer's law") {
    const TimeSeries ts = constant_series(omega, omega / (2.0 * gamma), 64);
    const double od = 2.0;
    const TransmitResult r = transmit_thin(ts, probe_handle(), od, gamma);
    for (std::size_t k = 0; k < ts.t.size(); ++k) {
      CHECK(r.absorption[k] == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(r.intensity_out[k] ==
            doctest::Approx(std::exp(-od)).epsilon(1e-12));
    }
  }

  SUBCASE("zero effective depth is the identity on intensity") {
    const TimeSeries ts = constant_series(omega, 0.7 * omega, 64);
    const TransmitResult r = transmit_thin(ts, probe_handle(), 0.0, gamma);
    for (std::size_t k = 0; k < ts.t.size(); ++k)
      CHECK(r.intensity_out[k] == doctest::Approx(r.intensity_in[k]));
  }

  SUBCASE("unknown probe label is rejected") {
    const TimeSeries ts = constant_series(omega, 0.0, 64);
    CheckedPulse wrong = probe_handle();
    wrong.label = "Q";
    CHECK_THROWS_AS(transmit_thin(ts, wrong, 2.0, gamma), ValidationError);
  }

  SUBCASE("mostly sub-threshold envelope is reported") {
    TimeSeries ts = constant_series(omega, 0.0, 64);
    auto& env = ts.envelopes["P"];
    // Most in-pulse samples (>= peak/16) fall below a 0.5*peak threshold.
    for (std::size_t k = 8; k < env.size(); ++k) env[k] = omega / 10.0;
    CHECK_THROWS_AS(transmit_thin(ts, probe_handle(), 2.0, gamma, 0.5),
                    NumericalError);
  }
}

TEST_CASE("switching scenario composition") {
  const AbsorptionSpectrum spectrum = default_hole_spectrum();
  const ProbePulseSpec probe = default_probe();

  SwitchingScenarioParams params;
  params.scheme = build_pr_yso_scheme();
  params.relaxation.channels.push_back(
      {params.scheme.index_of("5"), params.scheme.index_of("2"), 0.001});
  params.relaxation.channels.push_back(
      {params.scheme.index_of("5"), params.scheme.index_of("3"), 0.001});
  params.relaxation.coherence_total[{1, 3}] = 0.05;
  params.relaxation.coherence_total[{2, 3}] = 0.05;
  params.relaxation.coherence_total[{1, 2}] = 0.098;
  params.relaxation.check(params.scheme.size());
  params.probe_calibration = {10.0 / std::sqrt(3.0)};
  params.initial_populations = {0.0, 1.0, 0.0, 0.0};

  Pulse control;
  control.lower = "3";
  control.upper = "5";
  control.start_us = 25.0;
  control.duration_us = 50.0;
  control.label = "A";

  SUBCASE("zero control leaves the transmission unchanged") {
    params.control = control;  // rabi_peak = 0
    const SwitchingResult r = run_switching_scenario(probe, spectrum, params);
    REQUIRE(r.switched.t.size() == r.unswitched.t.size());
    for (std::size_t k = 0; k < r.switched.t.size(); ++k)
      CHECK(r.switched.intensity_out[k] ==
            doctest::Approx(r.unswitched.intensity_out[k]).epsilon(1e-12));
    CHECK(switching_contrast(r.switched, r.unswitched, r.switched.t.front(),
                             r.switched.t.back()) ==
          doctest::Approx(0.0).epsilon(1e-9));
  }

  SUBCASE("active control changes the transmission during its window") {
    control.rabi_peak = units::angular_from_kHz(100.0);
    params.control = control;
    const SwitchingResult r = run_switching_scenario(probe, spectrum, params);
    CHECK(r.control_t0 == doctest::Approx(25.0));
    CHECK(r.control_t1 == doctest::Approx(75.0));
    double max_rel = 0.0;
    for (std::size_t k = 0; k < r.switched.t.size(); ++k) {
      if (r.switched.t[k] < r.control_t0 || r.switched.t[k] > r.control_t1)
        continue;
      if (r.unswitched.intensity_out[k] < 1e-3) continue;
      max_rel = std::max(max_rel,
                         std::abs(r.switched.intensity_out[k] /
                                      r.unswitched.intensity_out[k] -
                                  1.0));
    }
    CHECK(max_rel > 0.01);
  }
}

TEST_CASE("switching contrast") {
  TransmitResult a, b;
  for (int k = 0; k < 100; ++k) {
    const double t = 0.5 * k;
    a.t.push_back(t);
    b.t.push_back(t);
    const double base = std::exp(-0.002 * (t - 25.0) * (t - 25.0));
    b.intensity_out.push_back(base);
    // A 60% dip between t = 20 and t = 30.
    a.intensity_out.push_back((t >= 20.0 && t <= 30.0) ? 0.4 * base : base);
  }
  a.intensity_in = b.intensity_in = b.intensity_out;

  CHECK(switching_contrast(a, b, 0.0, 50.0) ==
        doctest::Approx(0.6).epsilon(1e-12));
  // A window that misses the dip sees no contrast.
  CHECK(switching_contrast(a, b, 35.0, 50.0) ==
        doctest::Approx(0.0).epsilon(1e-12));
  // The floor ignores samples where the baseline is negligible.
  CHECK(switching_contrast(a, b, 0.0, 50.0, 0.9) ==
        doctest::Approx(0.6).epsilon(1e-12));
}
