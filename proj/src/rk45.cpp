#include "slowlight/rk45.hpp"

#include <algorithm>
#include <cmath>

#include "slowlight/errors.hpp"

namespace slowlight {

namespace {

// Dormand-Prince RK5(4)7M coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// 4th-order embedded weights.
constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695, e4 = 393.0 / 640,
                 e5 = -92097.0 / 339200, e6 = 187.0 / 2100, e7 = 1.0 / 40;

double error_norm(const StateMatrix& err, const StateMatrix& y0,
                  const StateMatrix& y1, double rtol, double atol) {
  double acc = 0.0;
  const auto n = err.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double scale =
        atol + rtol * std::max(std::abs(y0(i)), std::abs(y1(i)));
    const double e = std::abs(err(i)) / scale;
    acc += e * e;
  }
  return std::sqrt(acc / static_cast<double>(n));
}

}  // namespace

std::vector<StateMatrix> integrate_rk45(const RhsFn& f, StateMatrix y,
                                        double t0, double t1,
                                        const std::vector<double>& sample_times,
                                        const Rk45Options& opts) {
  std::vector<StateMatrix> samples;
  samples.reserve(sample_times.size());
  std::size_t next_sample = 0;

  const double span = t1 - t0;
  if (span <= 0.0) throw NumericalError("rk45: empty integration span");
  for (std::size_t i = 0; i < sample_times.size(); ++i) {
    if (sample_times[i] < t0 - 1e-12 || sample_times[i] > t1 + 1e-12)
      throw NumericalError("rk45: sample time outside integration span");
  }

  double t = t0;
  StateMatrix k1 = f(t, y);
  double h = opts.initial_step > 0.0 ? opts.initial_step : span * 1e-4;
  if (opts.max_step > 0.0) h = std::min(h, opts.max_step);
  const double h_min = span * 1e-14;

  // Emit any samples coinciding with t0.
  while (next_sample < sample_times.size() &&
         sample_times[next_sample] <= t + h_min) {
    samples.push_back(y);
    ++next_sample;
  }

  while (t < t1) {
    h = std::min(h, t1 - t);
    const StateMatrix k2 = f(t + c2 * h, y + h * (a21 * k1));
    const StateMatrix k3 = f(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
    const StateMatrix k4 = f(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const StateMatrix k5 =
        f(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const StateMatrix k6 =
        f(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const StateMatrix y_new =
        y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const StateMatrix k7 = f(t + h, y_new);
    const StateMatrix y_low =
        y + h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const StateMatrix err = y_new - y_low;

    const double norm = error_norm(err, y, y_new, opts.rtol, opts.atol);
    if (norm <= 1.0) {
      // Accepted step; interpolate pending samples with cubic Hermite using
      // the endpoint derivatives (FSAL: k7 = f(t+h, y_new)).
      const double t_new = t + h;
      while (next_sample < sample_times.size() &&
             sample_times[next_sample] <= t_new + h_min) {
        const double theta = std::clamp((sample_times[next_sample] - t) / h, 0.0, 1.0);
        const double h00 = (1 + 2 * theta) * (1 - theta) * (1 - theta);
        const double h10 = theta * (1 - theta) * (1 - theta);
        const double h01 = theta * theta * (3 - 2 * theta);
        const double h11 = theta * theta * (theta - 1);
        samples.push_back(h00 * y + (h10 * h) * k1 + h01 * y_new + (h11 * h) * k7);
        ++next_sample;
      }
      t = t_new;
      y = y_new;
      k1 = k7;
    }

    double factor = 0.9 * std::pow(std::max(norm, 1e-16), -0.2);
    factor = std::clamp(factor, 0.2, 5.0);
    h *= factor;
    if (opts.max_step > 0.0) h = std::min(h, opts.max_step);
    if (h < h_min && t < t1)
      throw NumericalError("rk45: step size underflow at t = " + std::to_string(t));
  }

  while (next_sample < sample_times.size()) {
    samples.push_back(y);
    ++next_sample;
  }
  return samples;
}

}  // namespace slowlight
