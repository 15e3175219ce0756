// Signal analysis: oscillation-frequency extraction, sqrt-intensity fits,
// pulse areas, and delay measurement.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "slowlight/model.hpp"
#include "slowlight/propagation.hpp"

namespace slowlight {

struct OscillationEstimate {
  double frequency_kHz = 0.0;
  double amplitude = 0.0;
  std::optional<double> damping_rate;  // 1/us
  std::string method = "fft";
  std::string confidence;  // empty, or a note on estimator disagreement
};

struct SqrtLawFit {
  double slope = 0.0;      // kHz per sqrt(W/cm^2)
  double intercept = 0.0;  // kHz
  double r_squared = 0.0;
  std::vector<double> residuals;  // kHz, per point
};

// Detrends (low-order polynomial), tapers, zero-pads >= 8x, locates the FFT
// magnitude peak with parabolic interpolation, and cross-checks against the
// mean extrema spacing (disagreement > 5% is flagged in the confidence note).
// Throws NumericalError("no oscillation detected") when no peak rises above
// 3x the median spectral floor.
OscillationEstimate extract_oscillation_frequency(
    const std::vector<double>& t, const std::vector<double>& values,
    double window_lo, double window_hi, int detrend_order = 2);

// Counts oscillation cycles of the detrended signal inside the window
// (sign changes / 2).
double count_oscillation_cycles(const std::vector<double>& t,
                                const std::vector<double>& values,
                                double window_lo, double window_hi,
                                int detrend_order = 2);

// Ordinary least squares of frequency against sqrt(intensity).
SqrtLawFit fit_sqrt_law(const std::vector<std::pair<double, double>>&
                            intensity_frequency_points);

// Integral of the Rabi envelope over the pulse, in radians.
double pulse_area(const Pulse& pulse);
double pulse_area(const CheckedPulse& pulse);

struct DelayEstimate {
  double centroid_us = 0.0;  // primary result
  double peak_us = 0.0;      // parabolic sub-sample peak difference
};

// Intensity-centroid delay of `output` relative to `input` (same grid).
DelayEstimate measure_delay(const OpticalPulseTrace& input,
                            const OpticalPulseTrace& output);

}  // namespace slowlight
