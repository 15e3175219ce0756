#include "slowlight/spectra.hpp"

#include <algorithm>
#include <cmath>

#include "slowlight/errors.hpp"
#include "slowlight/fft.hpp"

namespace slowlight {

namespace {

double lorentzian(double x, double fwhm) {
  const double hw = 0.5 * fwhm;
  return hw * hw / (x * x + hw * hw);
}

}  // namespace

void HoleBurnConfig::validate() const {
  if (background_depth < 0.0)
    throw ValidationError("hole: background optical depth must be >= 0");
  if (hole_depth < 0.0 || hole_depth > 1.0)
    throw ValidationError("hole: depth d must lie in [0,1]");
  if (fwhm <= 0.0) throw ValidationError("hole: FWHM must be positive");
  for (const auto& ah : anti_holes)
    if (ah.fwhm <= 0.0)
      throw ValidationError("hole: anti-hole FWHM must be positive");
}

FrequencyGrid make_grid(double fwhm, double span_factor, double points_per_fwhm) {
  if (fwhm <= 0.0) throw ValidationError("grid: FWHM must be positive");
  if (span_factor < 10.0)
    throw ValidationError("grid: span must be at least 10x the hole FWHM");
  if (points_per_fwhm < 50.0)
    throw ValidationError("grid: need at least 50 points per hole FWHM");
  FrequencyGrid g;
  g.span = span_factor * fwhm;
  const double min_points = span_factor * points_per_fwhm;
  g.n = static_cast<int>(next_power_of_two(static_cast<std::size_t>(std::ceil(min_points))));
  return g;
}

AbsorptionSpectrum hole_spectrum(const HoleBurnConfig& cfg,
                                 const FrequencyGrid& grid) {
  cfg.validate();
  if (grid.n < 2 || grid.span <= 0.0)
    throw ValidationError("hole_spectrum: empty grid");
  if (grid.span < 10.0 * cfg.fwhm)
    throw ValidationError("hole_spectrum: grid span below 10x the hole FWHM");
  if (cfg.fwhm / grid.step() < 50.0)
    throw ValidationError("hole_spectrum: fewer than 50 grid points per hole FWHM");

  AbsorptionSpectrum s;
  s.grid = grid;
  s.alphaL.resize(grid.n);
  for (int i = 0; i < grid.n; ++i) {
    const double w = grid.omega(i);
    double depth = 1.0 - cfg.hole_depth * lorentzian(w - cfg.center, cfg.fwhm);
    for (const auto& ah : cfg.anti_holes)
      depth -= ah.depth * lorentzian(w - ah.center, ah.fwhm);
    s.alphaL[i] = cfg.background_depth * depth;
    if (s.alphaL[i] < 0.0)
      throw ValidationError("hole_spectrum: negative absorption at grid point " +
                            std::to_string(i));
  }
  return s;
}

void kramers_kronig(AbsorptionSpectrum& spectrum) {
  const int n = spectrum.grid.n;
  if (static_cast<int>(spectrum.alphaL.size()) != n || n < 4)
    throw ValidationError("kramers_kronig: absorption not defined on the grid");
  if (!is_power_of_two(static_cast<std::size_t>(n)))
    throw ValidationError("kramers_kronig: grid length must be a power of two");

  const double background = 0.5 * (spectrum.alphaL.front() + spectrum.alphaL.back());
  const double scale = std::max(
      background, *std::max_element(spectrum.alphaL.begin(), spectrum.alphaL.end()));
  if (scale > 0.0) {
    // Settled edges: the outer 1/16 of the grid on both sides must be flat
    // at the background level, or the circular evaluation wraps real
    // structure around the ends.
    double edge_dev = 0.0;
    const int margin = std::max(1, n / 16);
    for (int i = 0; i < margin; ++i) {
      edge_dev = std::max(edge_dev, std::abs(spectrum.alphaL[i] - background));
      edge_dev = std::max(edge_dev,
                          std::abs(spectrum.alphaL[n - 1 - i] - background));
    }
    if (edge_dev / scale > 1e-3)
      throw ValidationError(
          "kramers_kronig: absorption not settled at the grid edges");
  }

  // Analytic-signal Hilbert transform of the background-subtracted log
  // magnitude -(alphaL - background)/2, evaluated circularly on the grid.
  // The settled-edge requirement plays the role of windowing: the signal is
  // ~0 at both ends, so the periodic closure is smooth, and a symmetric hole
  // yields an exactly antisymmetric phase.
  std::vector<double> signal(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    signal[i] = -0.5 * (spectrum.alphaL[i] - background);
  spectrum.phase = hilbert_transform(signal);
  spectrum.phase_filled = true;
}

double group_delay(const AbsorptionSpectrum& spectrum, double omega0) {
  if (!spectrum.phase_filled)
    throw ValidationError("group_delay: phase has not been computed");
  const int n = spectrum.grid.n;
  const double dw = spectrum.grid.step();
  if (std::abs(omega0) > 0.25 * spectrum.grid.span)
    throw ValidationError("group_delay: frequency outside the central half grid");
  const int i = static_cast<int>(std::lround(omega0 / dw)) + n / 2;
  if (i < 2 || i > n - 3)
    throw ValidationError("group_delay: frequency too close to the grid edge");
  const auto& p = spectrum.phase;
  return (-p[i + 2] + 8.0 * p[i + 1] - 8.0 * p[i - 1] + p[i - 2]) / (12.0 * dw);
}

}  // namespace slowlight
