#include <cmath>
#include <numbers>

#include "doctest.h"
#include "slowlight/errors.hpp"
#include "slowlight/model.hpp"
#include "slowlight/units.hpp"

using namespace slowlight;

TEST_CASE("four-level shelving scheme") {
  const LevelScheme s = build_pr_yso_scheme();
  CHECK(s.size() == 4);
  CHECK(s.roles[s.index_of("1")] == LevelRole::Ground);
  CHECK(s.roles[s.index_of("2")] == LevelRole::Ground);
  CHECK(s.roles[s.index_of("3")] == LevelRole::Ground);
  CHECK(s.roles[s.index_of("5")] == LevelRole::Excited);
  CHECK(s.transitions.size() == 3);
  CHECK(s.allowed(s.index_of("2"), s.index_of("5")));
  CHECK(s.allowed(s.index_of("3"), s.index_of("5")));
  CHECK(s.allowed(s.index_of("1"), s.index_of("5")));
  CHECK_FALSE(s.allowed(s.index_of("1"), s.index_of("2")));
  CHECK_THROWS_AS((void)s.index_of("4"), ValidationError);
}

TEST_CASE("pulse sequence validation") {
  const LevelScheme s = build_pr_yso_scheme();

  SUBCASE("empty sequence is valid") {
    CHECK(validate_pulse_sequence({}, s).pulses.empty());
  }

  SUBCASE("probe + control sorted by start time") {
    Pulse a;
    a.lower = "3";
    a.upper = "5";
    a.start_us = 25.0;
    a.duration_us = 50.0;
    a.rabi_peak = 0.628;
    a.label = "A";
    Pulse p;
    p.lower = "2";
    p.upper = "5";
    p.shape = PulseShape::Gaussian;
    p.start_us = 25.0 - 10.0;
    p.duration_us = 10.0;
    p.rabi_peak = 0.0628;
    p.label = "P";
    const auto checked = validate_pulse_sequence({a, p}, s);
    REQUIRE(checked.pulses.size() == 2);
    CHECK(checked.pulses[0].label == "P");
    CHECK(checked.pulses[1].label == "A");
  }

  SUBCASE("ground-ground transition rejected") {
    Pulse p;
    p.lower = "2";
    p.upper = "3";
    p.duration_us = 1.0;
    p.rabi_peak = 1.0;
    CHECK_THROWS_AS(validate_pulse_sequence({p}, s), ValidationError);
  }

  SUBCASE("unknown label rejected") {
    Pulse p;
    p.lower = "2";
    p.upper = "7";
    p.duration_us = 1.0;
    p.rabi_peak = 1.0;
    CHECK_THROWS_AS(validate_pulse_sequence({p}, s), ValidationError);
  }

  SUBCASE("negative duration rejected") {
    Pulse p;
    p.lower = "2";
    p.upper = "5";
    p.duration_us = -1.0;
    p.rabi_peak = 1.0;
    CHECK_THROWS_AS(validate_pulse_sequence({p}, s), ValidationError);
  }

  SUBCASE("zero pulse is a valid no-op") {
    Pulse p;
    p.lower = "2";
    p.upper = "5";
    p.duration_us = 0.0;
    p.rabi_peak = 0.0;
    CHECK_NOTHROW(validate_pulse_sequence({p}, s));
  }
}

TEST_CASE("pulse envelopes") {
  const LevelScheme s = build_pr_yso_scheme();

  SUBCASE("rectangular") {
    Pulse p;
    p.lower = "3";
    p.upper = "5";
    p.start_us = 10.0;
    p.duration_us = 50.0;
    p.rabi_peak = 0.628;
    const auto c = validate_pulse_sequence({p}, s).pulses.front();
    CHECK(c.envelope(30.0) == doctest::Approx(0.628));
    CHECK(c.envelope(9.99) == 0.0);
    CHECK(c.envelope(60.01) == 0.0);
    CHECK(c.active(10.5));
    CHECK_FALSE(c.active(61.0));
  }

  SUBCASE("gaussian: half maximum at +/- FWHM/2 of the peak") {
    Pulse p;
    p.lower = "2";
    p.upper = "5";
    p.shape = PulseShape::Gaussian;
    p.start_us = 20.0;  // peak time
    p.duration_us = 10.0;
    p.rabi_peak = 1.0;
    const auto c = validate_pulse_sequence({p}, s).pulses.front();
    CHECK(c.envelope(20.0) == doctest::Approx(1.0));
    CHECK(c.envelope(25.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(c.envelope(15.0) == doctest::Approx(0.5).epsilon(1e-12));
    // Closed form at a FWHM/2 offset from an arbitrary reference point.
    const double dt = 7.3 - 20.0;
    CHECK(c.envelope(7.3) ==
          doctest::Approx(std::exp2(-4.0 * dt * dt / 100.0)).epsilon(1e-12));
  }
}

TEST_CASE("validate_pulse_sequence is idempotent") {
  const LevelScheme s = build_pr_yso_scheme();
  Pulse p;
  p.lower = "2";
  p.upper = "5";
  p.shape = PulseShape::Gaussian;
  p.start_us = 5.0;
  p.duration_us = 10.0;
  p.rabi_peak = 0.0628;
  p.detuning = 0.01;
  p.label = "P";
  const auto once = validate_pulse_sequence({p}, s);
  PulseSequence again;
  for (const auto& c : once.pulses) {
    Pulse q;
    q.lower = s.labels[c.ground];
    q.upper = s.labels[c.excited];
    q.shape = c.shape;
    q.start_us = c.start_us;
    q.duration_us = c.duration_us;
    q.rabi_peak = c.rabi_peak;
    q.detuning = c.detuning;
    q.phase = c.phase;
    q.label = c.label;
    again.push_back(q);
  }
  const auto twice = validate_pulse_sequence(again, s);
  REQUIRE(twice.pulses.size() == once.pulses.size());
  CHECK(twice.pulses[0].ground == once.pulses[0].ground);
  CHECK(twice.pulses[0].excited == once.pulses[0].excited);
  CHECK(twice.pulses[0].start_us == once.pulses[0].start_us);
  CHECK(twice.pulses[0].rabi_peak == once.pulses[0].rabi_peak);
}

TEST_CASE("intensity -> Rabi calibration") {
  const IntensityCalibration cal{31.6227766016838};  // 100 kHz at 10 W/cm^2

  SUBCASE("caption pairing: 10 W/cm^2 -> 100 kHz") {
    CHECK(units::kHz_from_angular(rabi_from_intensity(10.0, cal)) ==
          doctest::Approx(100.0).epsilon(1e-9));
  }

  SUBCASE("zero intensity") { CHECK(rabi_from_intensity(0.0, cal) == 0.0); }

  SUBCASE("square-root law: 4x intensity doubles the Rabi frequency") {
    for (double i : {0.5, 2.0, 10.0, 40.0})
      CHECK(rabi_from_intensity(4.0 * i, cal) ==
            doctest::Approx(2.0 * rabi_from_intensity(i, cal)).epsilon(1e-12));
  }

  SUBCASE("negative intensity rejected") {
    CHECK_THROWS_AS(rabi_from_intensity(-1.0, cal), ValidationError);
  }
}

TEST_CASE("relaxation spec") {
  RelaxationSpec r;
  r.channels.push_back({3, 1, 0.001});
  r.channels.push_back({3, 2, 0.001});

  SUBCASE("total decay out of a level") {
    CHECK(r.decay_out_of(3) == doctest::Approx(0.002));
    CHECK(r.decay_out_of(1) == 0.0);
  }

  SUBCASE("unlisted pairs default to the Lindblad minimum") {
    r.check(4);
    CHECK(r.coherence_rate(1, 3) == doctest::Approx(0.001));  // (0 + 0.002)/2
    CHECK(r.coherence_rate(1, 2) == doctest::Approx(0.0));
  }

  SUBCASE("configured totals are used verbatim, sub-minimum ones warn") {
    r.coherence_total[{1, 3}] = 0.05;
    r.coherence_total[{2, 3}] = 1e-5;  // below (0 + 0.002)/2
    r.check(4);
    CHECK(r.coherence_rate(1, 3) == doctest::Approx(0.05));
    CHECK(!r.warnings.empty());
  }

  SUBCASE("negative rates rejected") {
    r.channels.push_back({3, 0, -0.1});
    CHECK_THROWS_AS(r.check(4), ValidationError);
  }
}

TEST_CASE("frequency unit conversions round-trip") {
  for (double nu : {0.3, 10.0, 100.0, 2000.0}) {
    CHECK(units::angular_from_kHz(nu) ==
          doctest::Approx(2.0 * std::numbers::pi * nu * 1e-3).epsilon(1e-15));
    CHECK(units::kHz_from_angular(units::angular_from_kHz(nu)) ==
          doctest::Approx(nu).epsilon(1e-12));
  }
  CHECK(units::angular_from_MHz(1.0) ==
        doctest::Approx(units::angular_from_kHz(1000.0)).epsilon(1e-15));
}
