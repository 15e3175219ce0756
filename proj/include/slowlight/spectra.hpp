// Parametric hole-burnt absorption spectra, minimum-phase dispersion via a
// discrete Hilbert transform, and group delay.

#pragma once

#include <vector>

namespace slowlight {

struct AntiHole {
  double center = 0.0;  // rad/us, relative to the grid center
  double depth = 0.0;   // fractional; negative values add absorption
  double fwhm = 0.0;    // rad/us
};

struct HoleBurnConfig {
  double background_depth = 10.0;  // D = alpha0 * L
  double center = 0.0;             // rad/us
  double hole_depth = 0.8;         // d in [0,1]
  double fwhm = 0.0;               // Gamma_h, rad/us
  std::vector<AntiHole> anti_holes;

  void validate() const;
};

// Uniform angular-frequency grid centered on the probe carrier. The point
// count must be a power of two for the Hilbert transform.
struct FrequencyGrid {
  double span = 0.0;  // rad/us, full width
  int n = 0;

  double step() const { return span / n; }
  double omega(int i) const { return (i - n / 2) * step(); }
};

// Grid policy: span >= span_factor * fwhm, >= points_per_fwhm points per
// fwhm, power-of-two length.
FrequencyGrid make_grid(double fwhm, double span_factor = 40.0,
                        double points_per_fwhm = 50.0);

struct AbsorptionSpectrum {
  FrequencyGrid grid;
  std::vector<double> alphaL;  // optical depth per point, >= 0
  std::vector<double> phase;   // rad; empty until kramers_kronig fills it
  bool phase_filled = false;

  double omega(int i) const { return grid.omega(i); }
};

// alphaL(w) = D * (1 - d * L(w)) + anti-hole terms, L a unit-peak Lorentzian
// of the configured FWHM. Errors on too-coarse/narrow grids and on negative
// absorption after anti-holes.
AbsorptionSpectrum hole_spectrum(const HoleBurnConfig& cfg,
                                 const FrequencyGrid& grid);

// Fills phase(w) with the Hilbert transform of -alphaL/2 (minimum-phase
// relation between the amplitude and phase of the transfer function). The
// background is subtracted first, so adding a constant to alphaL leaves the
// phase unchanged; the transform is evaluated circularly on the grid, which
// requires the edges to be settled (relative deviation from the background
// <= 1e-3) and makes the phase of a symmetric hole exactly antisymmetric.
void kramers_kronig(AbsorptionSpectrum& spectrum);

// d(phase)/d(omega) at omega0 via a 4th-order central stencil. omega0 must
// lie in the central half of the grid.
double group_delay(const AbsorptionSpectrum& spectrum, double omega0);

}  // namespace slowlight
