#include <cmath>
#include <vector>

#include "doctest.h"
#include "slowlight/errors.hpp"
#include "slowlight/spectra.hpp"
#include "slowlight/units.hpp"

using namespace slowlight;

namespace {

HoleBurnConfig default_hole(double fwhm_kHz = 300.0) {
  HoleBurnConfig cfg;
  cfg.background_depth = 10.0;
  cfg.hole_depth = 0.8;
  cfg.fwhm = units::angular_from_kHz(fwhm_kHz);
  return cfg;
}

}  // namespace

TEST_CASE("grid policy") {
  const double fwhm = units::angular_from_kHz(300.0);
  const FrequencyGrid g = make_grid(fwhm, 40.0, 50.0);
  CHECK(g.span >= 40.0 * fwhm);
  CHECK(g.step() <= fwhm / 50.0);
  CHECK((g.n & (g.n - 1)) == 0);  // power of two
  CHECK(g.omega(g.n / 2) == 0.0);
}

TEST_CASE("hole spectrum") {
  const HoleBurnConfig cfg = default_hole();
  const FrequencyGrid grid = make_grid(cfg.fwhm, 40.0, 50.0);

  SUBCASE("zero depth leaves the background") {
    HoleBurnConfig flat = cfg;
    flat.hole_depth = 0.0;
    const AbsorptionSpectrum s = hole_spectrum(flat, grid);
    for (int i = 0; i < s.grid.n; i += 97)
      CHECK(s.alphaL[i] == doctest::Approx(10.0).epsilon(1e-12));
  }

  SUBCASE("center depth D (1 - d)") {
    const AbsorptionSpectrum s = hole_spectrum(cfg, grid);
    CHECK(s.alphaL[s.grid.n / 2] == doctest::Approx(2.0).epsilon(1e-12));
    // Half depth at +/- FWHM/2 (evaluated at the nearest grid point).
    const int off = static_cast<int>(std::lround(0.5 * cfg.fwhm / grid.step()));
    const double w = s.omega(s.grid.n / 2 + off);
    const double hw = 0.5 * cfg.fwhm;
    const double expected =
        10.0 * (1.0 - 0.8 * hw * hw / (w * w + hw * hw));
    CHECK(s.alphaL[s.grid.n / 2 + off] ==
          doctest::Approx(expected).epsilon(1e-12));
    CHECK(expected == doctest::Approx(10.0 - 0.5 * 8.0).epsilon(0.05));
  }

  SUBCASE("too-coarse grid is rejected") {
    FrequencyGrid coarse;
    coarse.span = 40.0 * cfg.fwhm;
    coarse.n = 64;
    CHECK_THROWS_AS(hole_spectrum(cfg, coarse), ValidationError);
  }

  SUBCASE("too-narrow grid is rejected") {
    FrequencyGrid narrow;
    narrow.span = 4.0 * cfg.fwhm;
    narrow.n = 4096;
    CHECK_THROWS_AS(hole_spectrum(cfg, narrow), ValidationError);
  }

  SUBCASE("negative absorption after anti-holes is rejected") {
    HoleBurnConfig deep = cfg;
    deep.anti_holes.push_back({0.0, 0.5, cfg.fwhm});  // total depth 1.3 > 1
    CHECK_THROWS_AS(hole_spectrum(deep, grid), ValidationError);
  }
}

TEST_CASE("dispersion from the absorption profile") {
  const HoleBurnConfig cfg = default_hole();
  const FrequencyGrid grid = make_grid(cfg.fwhm, 40.0, 50.0);

  SUBCASE("constant absorption gives zero phase") {
    HoleBurnConfig flat = cfg;
    flat.hole_depth = 0.0;
    AbsorptionSpectrum s = hole_spectrum(flat, grid);
    kramers_kronig(s);
    for (int i = 0; i < s.grid.n; i += 53) CHECK(std::abs(s.phase[i]) < 1e-9);
  }

  SUBCASE("Lorentzian hole matches the analytic dispersive conjugate") {
    // A wide grid keeps the slowly decaying dispersive tails well inside the
    // span; truncation error dominates on narrower grids.
    const FrequencyGrid wide = make_grid(cfg.fwhm, 400.0, 50.0);
    AbsorptionSpectrum s = hole_spectrum(cfg, wide);
    kramers_kronig(s);
    const double gamma = 0.5 * cfg.fwhm;  // HWHM
    const double amp = 0.5 * cfg.background_depth * cfg.hole_depth;
    double num = 0.0, den = 0.0;
    for (int i = s.grid.n / 4; i < 3 * s.grid.n / 4; ++i) {
      const double w = s.omega(i);
      const double analytic = amp * gamma * w / (gamma * gamma + w * w);
      num += (s.phase[i] - analytic) * (s.phase[i] - analytic);
      den += analytic * analytic;
    }
    CHECK(std::sqrt(num / den) < 0.01);
  }

  SUBCASE("phase of a symmetric hole is antisymmetric") {
    AbsorptionSpectrum s = hole_spectrum(cfg, grid);
    kramers_kronig(s);
    for (int i = 1; i < s.grid.n / 2; i += 31)
      CHECK(std::abs(s.phase[s.grid.n / 2 + i] + s.phase[s.grid.n / 2 - i]) <
            1e-6);
  }

  SUBCASE("background level does not change the phase") {
    AbsorptionSpectrum s1 = hole_spectrum(cfg, grid);
    HoleBurnConfig richer = cfg;
    richer.background_depth = 20.0;
    richer.hole_depth = 0.4;  // same absolute hole depth D*d = 8
    AbsorptionSpectrum s2 = hole_spectrum(richer, grid);
    kramers_kronig(s1);
    kramers_kronig(s2);
    for (int i = 0; i < s1.grid.n; i += 101)
      CHECK(s1.phase[i] == doctest::Approx(s2.phase[i]).epsilon(1e-9));
  }

  SUBCASE("doubling the hole area doubles phase and group delay") {
    AbsorptionSpectrum s1 = hole_spectrum(cfg, grid);
    HoleBurnConfig doubled = cfg;
    doubled.background_depth = 20.0;  // D*d doubles
    AbsorptionSpectrum s2 = hole_spectrum(doubled, grid);
    kramers_kronig(s1);
    kramers_kronig(s2);
    for (int i = 0; i < s1.grid.n; i += 101)
      CHECK(s2.phase[i] == doctest::Approx(2.0 * s1.phase[i]).epsilon(1e-9));
    CHECK(group_delay(s2, 0.0) ==
          doctest::Approx(2.0 * group_delay(s1, 0.0)).epsilon(1e-9));
  }

  SUBCASE("unsettled edges are rejected") {
    const FrequencyGrid tight = make_grid(cfg.fwhm, 10.0, 50.0);
    AbsorptionSpectrum s = hole_spectrum(cfg, tight);
    CHECK_THROWS_AS(kramers_kronig(s), ValidationError);
  }
}

TEST_CASE("group delay") {
  const HoleBurnConfig cfg = default_hole();
  const FrequencyGrid grid = make_grid(cfg.fwhm, 40.0, 50.0);

  SUBCASE("zero phase gives zero delay") {
    AbsorptionSpectrum s = hole_spectrum(cfg, grid);
    s.phase.assign(s.grid.n, 0.0);
    s.phase_filled = true;
    CHECK(group_delay(s, 0.0) == doctest::Approx(0.0));
  }

  SUBCASE("linear phase is recovered exactly") {
    AbsorptionSpectrum s = hole_spectrum(cfg, grid);
    s.phase.resize(s.grid.n);
    for (int i = 0; i < s.grid.n; ++i) s.phase[i] = 3.7 * s.omega(i);
    s.phase_filled = true;
    CHECK(group_delay(s, 0.0) == doctest::Approx(3.7).epsilon(1e-10));
    CHECK(group_delay(s, 0.1 * s.grid.span) ==
          doctest::Approx(3.7).epsilon(1e-10));
  }

  SUBCASE("hole-center delay matches the analytic D d / Gamma_h") {
    AbsorptionSpectrum s = hole_spectrum(cfg, grid);
    kramers_kronig(s);
    const double analytic =
        cfg.background_depth * cfg.hole_depth / cfg.fwhm;
    CHECK(group_delay(s, 0.0) == doctest::Approx(analytic).epsilon(0.005));
  }

  SUBCASE("refining the grid changes the center delay by < 0.5%") {
    AbsorptionSpectrum s1 = hole_spectrum(cfg, grid);
    kramers_kronig(s1);
    const FrequencyGrid fine = make_grid(cfg.fwhm, 40.0, 100.0);
    AbsorptionSpectrum s2 = hole_spectrum(cfg, fine);
    kramers_kronig(s2);
    CHECK(std::abs(group_delay(s2, 0.0) - group_delay(s1, 0.0)) <
          0.005 * group_delay(s1, 0.0));
  }

  SUBCASE("narrower hole means longer delay at fixed D d") {
    double prev = 0.0;
    for (double fwhm_kHz : {800.0, 400.0, 200.0, 100.0}) {
      const HoleBurnConfig c = default_hole(fwhm_kHz);
      const FrequencyGrid g = make_grid(c.fwhm, 40.0, 50.0);
      AbsorptionSpectrum s = hole_spectrum(c, g);
      kramers_kronig(s);
      const double tau = group_delay(s, 0.0);
      CHECK(tau > prev);
      prev = tau;
    }
  }

  SUBCASE("evaluation near the grid edge is rejected") {
    AbsorptionSpectrum s = hole_spectrum(cfg, grid);
    kramers_kronig(s);
    CHECK_THROWS_AS(group_delay(s, 0.45 * s.grid.span), ValidationError);
  }
}
