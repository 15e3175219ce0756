#include "slowlight/analysis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "slowlight/errors.hpp"
#include "slowlight/fft.hpp"

namespace slowlight {

namespace {

struct WindowedSignal {
  std::vector<double> t;
  std::vector<double> y;
  double dt;
};

WindowedSignal slice_window(const std::vector<double>& t,
                            const std::vector<double>& values,
                            double lo, double hi, std::size_t min_samples) {
  if (t.size() != values.size())
    throw ValidationError("signal and time grids differ in length");
  WindowedSignal w;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] >= lo && t[i] <= hi) {
      w.t.push_back(t[i]);
      w.y.push_back(values[i]);
    }
  }
  if (w.t.size() < min_samples)
    throw ValidationError("analysis window holds fewer than " +
                          std::to_string(min_samples) + " samples");
  w.dt = (w.t.back() - w.t.front()) / static_cast<double>(w.t.size() - 1);
  return w;
}

// Subtracts a least-squares polynomial fit (time mapped to [-1, 1]).
std::vector<double> detrend(const WindowedSignal& w, int order) {
  const auto m = static_cast<Eigen::Index>(w.t.size());
  const int terms = order + 1;
  Eigen::MatrixXd design(m, terms);
  const double t0 = w.t.front(), t1 = w.t.back();
  for (Eigen::Index i = 0; i < m; ++i) {
    const double x = 2.0 * (w.t[i] - t0) / (t1 - t0) - 1.0;
    double p = 1.0;
    for (int j = 0; j < terms; ++j) {
      design(i, j) = p;
      p *= x;
    }
  }
  Eigen::VectorXd rhs(m);
  for (Eigen::Index i = 0; i < m; ++i) rhs(i) = w.y[i];
  const Eigen::VectorXd coef = design.colPivHouseholderQr().solve(rhs);
  const Eigen::VectorXd fit = design * coef;
  std::vector<double> out(w.y.size());
  for (Eigen::Index i = 0; i < m; ++i) out[i] = w.y[i] - fit(i);
  return out;
}

struct Extremum {
  double t;
  double value;
};

std::vector<Extremum> local_extrema(const std::vector<double>& t,
                                    const std::vector<double>& d,
                                    double threshold) {
  std::vector<Extremum> ext;
  for (std::size_t i = 1; i + 1 < d.size(); ++i) {
    const bool is_max = d[i] > d[i - 1] && d[i] >= d[i + 1];
    const bool is_min = d[i] < d[i - 1] && d[i] <= d[i + 1];
    if ((is_max || is_min) && std::abs(d[i]) > threshold)
      ext.push_back({t[i], d[i]});
  }
  return ext;
}

}  // namespace

OscillationEstimate extract_oscillation_frequency(
    const std::vector<double>& t, const std::vector<double>& values,
    double window_lo, double window_hi, int detrend_order) {
  const WindowedSignal w = slice_window(t, values, window_lo, window_hi, 32);
  const std::vector<double> d = detrend(w, detrend_order);
  const std::size_t m = d.size();

  // A residual at roundoff level relative to the raw signal is not an
  // oscillation, however its spectrum happens to look.
  double residual_max = 0.0, signal_scale = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    residual_max = std::max(residual_max, std::abs(d[i]));
    signal_scale = std::max(signal_scale, std::abs(w.y[i]));
  }
  if (residual_max <= 1e-9 * std::max(signal_scale, 1e-300))
    throw NumericalError("no oscillation detected");

  // Hann taper, >= 8x zero padding.
  const std::size_t n_pad = next_power_of_two(8 * m);
  std::vector<Complex> buf(n_pad, Complex(0.0, 0.0));
  double window_sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double win =
        0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                              static_cast<double>(m - 1)));
    buf[i] = d[i] * win;
    window_sum += win;
  }
  fft(buf, false);

  std::vector<double> mag(n_pad / 2);
  for (std::size_t k = 1; k < n_pad / 2; ++k) mag[k] = std::abs(buf[k]);
  std::vector<double> sorted(mag.begin() + 1, mag.end());
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  const double floor = sorted[sorted.size() / 2];

  std::size_t peak = 1;
  for (std::size_t k = 2; k < n_pad / 2; ++k)
    if (mag[k] > mag[peak]) peak = k;
  if (!(mag[peak] > 3.0 * floor))
    throw NumericalError("no oscillation detected");

  double delta = 0.0;
  if (peak > 1 && peak + 1 < n_pad / 2) {
    const double ym = mag[peak - 1], y0 = mag[peak], yp = mag[peak + 1];
    const double denom = ym - 2.0 * y0 + yp;
    if (denom != 0.0) delta = 0.5 * (ym - yp) / denom;
  }
  const double freq_per_us =
      (static_cast<double>(peak) + delta) / (static_cast<double>(n_pad) * w.dt);

  OscillationEstimate est;
  est.frequency_kHz = freq_per_us * 1e3;
  est.amplitude = window_sum > 0.0 ? 2.0 * mag[peak] / window_sum : 0.0;
  est.method = "fft";

  // Cross-check: mean extrema spacing is half a period.
  double dmax = 0.0;
  for (double v : d) dmax = std::max(dmax, std::abs(v));
  const auto ext = local_extrema(w.t, d, 0.05 * dmax);
  if (ext.size() >= 3) {
    double spacing = 0.0;
    for (std::size_t i = 1; i < ext.size(); ++i)
      spacing += ext[i].t - ext[i - 1].t;
    spacing /= static_cast<double>(ext.size() - 1);
    const double f_ext_kHz = 1e3 / (2.0 * spacing);
    if (std::abs(f_ext_kHz - est.frequency_kHz) >
        0.05 * std::max(est.frequency_kHz, 1e-12)) {
      est.confidence = "extrema cross-check disagrees: " +
                       std::to_string(f_ext_kHz) + " kHz vs FFT " +
                       std::to_string(est.frequency_kHz) + " kHz";
    }
    // Damping from the decay of extrema magnitudes.
    Eigen::MatrixXd a(ext.size(), 2);
    Eigen::VectorXd b(ext.size());
    bool ok = true;
    for (std::size_t i = 0; i < ext.size(); ++i) {
      if (std::abs(ext[i].value) <= 0.0) {
        ok = false;
        break;
      }
      a(static_cast<Eigen::Index>(i), 0) = 1.0;
      a(static_cast<Eigen::Index>(i), 1) = ext[i].t;
      b(static_cast<Eigen::Index>(i)) = std::log(std::abs(ext[i].value));
    }
    if (ok) {
      const Eigen::VectorXd c = a.colPivHouseholderQr().solve(b);
      if (c(1) < 0.0) est.damping_rate = -c(1);
    }
  }

  const double nyquist_kHz = 0.5 / w.dt * 1e3;
  if (est.frequency_kHz >= nyquist_kHz)
    throw NumericalError("extracted frequency at or above Nyquist");
  return est;
}

double count_oscillation_cycles(const std::vector<double>& t,
                                const std::vector<double>& values,
                                double window_lo, double window_hi,
                                int detrend_order) {
  const WindowedSignal w = slice_window(t, values, window_lo, window_hi, 8);
  const std::vector<double> d = detrend(w, detrend_order);
  double dmax = 0.0;
  for (double v : d) dmax = std::max(dmax, std::abs(v));
  if (dmax == 0.0) return 0.0;
  const double thr = 1e-3 * dmax;
  int last_sign = 0;
  int changes = 0;
  for (double v : d) {
    if (std::abs(v) <= thr) continue;
    const int s = v > 0.0 ? 1 : -1;
    if (last_sign != 0 && s != last_sign) ++changes;
    last_sign = s;
  }
  return changes / 2.0;
}

SqrtLawFit fit_sqrt_law(
    const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3)
    throw ValidationError("fit_sqrt_law: need at least 3 points");
  double x_min = points.front().first, x_max = points.front().first;
  for (const auto& [intensity, f] : points) {
    if (intensity < 0.0)
      throw ValidationError("fit_sqrt_law: negative intensity");
    x_min = std::min(x_min, intensity);
    x_max = std::max(x_max, intensity);
  }
  if (x_min == x_max)
    throw ValidationError("fit_sqrt_law: all intensities equal");

  const auto n = static_cast<double>(points.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [intensity, f] : points) {
    const double x = std::sqrt(intensity);
    sx += x;
    sy += f;
    sxx += x * x;
    sxy += x * f;
  }
  const double denom = n * sxx - sx * sx;
  SqrtLawFit fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;

  const double mean_f = sy / n;
  double ss_res = 0.0, ss_tot = 0.0;
  fit.residuals.reserve(points.size());
  for (const auto& [intensity, f] : points) {
    const double r = f - (fit.slope * std::sqrt(intensity) + fit.intercept);
    fit.residuals.push_back(r);
    ss_res += r * r;
    ss_tot += (f - mean_f) * (f - mean_f);
  }
  fit.r_squared = ss_tot > 0.0 ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0)
                               : (ss_res < 1e-30 ? 1.0 : 0.0);
  return fit;
}

namespace {
double area_of(PulseShape shape, double rabi_peak, double duration) {
  switch (shape) {
    case PulseShape::Rectangular:
      return rabi_peak * duration;
    case PulseShape::Gaussian:
      return rabi_peak * duration *
             std::sqrt(std::numbers::pi / (4.0 * std::numbers::ln2));
  }
  return 0.0;
}
}  // namespace

double pulse_area(const Pulse& pulse) {
  return area_of(pulse.shape, pulse.rabi_peak, pulse.duration_us);
}

double pulse_area(const CheckedPulse& pulse) {
  if (pulse.sampled) {
    const auto& env = *pulse.sampled;
    double area = 0.0;
    for (std::size_t i = 1; i < env.values.size(); ++i)
      area += 0.5 * (env.values[i] + env.values[i - 1]) * env.dt;
    return area;
  }
  return area_of(pulse.shape, pulse.rabi_peak, pulse.duration_us);
}

DelayEstimate measure_delay(const OpticalPulseTrace& input,
                            const OpticalPulseTrace& output) {
  if (input.field.size() != output.field.size() || input.dt != output.dt ||
      input.t0 != output.t0)
    throw ValidationError("measure_delay: traces are on different grids");

  auto centroid_and_peak = [](const OpticalPulseTrace& tr) {
    const auto intensity = tr.intensity();
    double total = 0.0, weighted = 0.0;
    std::size_t peak = 0;
    for (std::size_t i = 0; i < intensity.size(); ++i) {
      total += intensity[i];
      weighted += intensity[i] * tr.t(i);
      if (intensity[i] > intensity[peak]) peak = i;
    }
    if (total <= 0.0) throw ValidationError("measure_delay: zero-energy trace");
    double refined = tr.t(peak);
    if (peak > 0 && peak + 1 < intensity.size()) {
      const double ym = intensity[peak - 1], y0 = intensity[peak],
                   yp = intensity[peak + 1];
      const double denom = ym - 2.0 * y0 + yp;
      if (denom != 0.0) refined += tr.dt * 0.5 * (ym - yp) / denom;
    }
    return std::pair<double, double>{weighted / total, refined};
  };

  const auto [c_in, p_in] = centroid_and_peak(input);
  const auto [c_out, p_out] = centroid_and_peak(output);
  return {c_out - c_in, p_out - p_in};
}

}  // namespace slowlight
