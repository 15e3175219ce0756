#include "slowlight/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "slowlight/errors.hpp"
#include "slowlight/units.hpp"

namespace slowlight {

int LevelScheme::index_of(const std::string& label) const {
  for (int i = 0; i < size(); ++i)
    if (labels[i] == label) return i;
  throw ValidationError("unknown level label '" + label + "'");
}

bool LevelScheme::allowed(int a, int b) const {
  if (a > b) std::swap(a, b);
  for (const auto& [g, e] : transitions) {
    int lo = std::min(g, e), hi = std::max(g, e);
    if (lo == a && hi == b) return true;
  }
  return false;
}

void LevelScheme::validate() const {
  if (size() < 2) throw ValidationError("level scheme needs at least 2 levels");
  if (roles.size() != labels.size())
    throw ValidationError("level scheme: one role per level required");
  std::set<std::string> seen(labels.begin(), labels.end());
  if (static_cast<int>(seen.size()) != size())
    throw ValidationError("level labels must be unique");
  for (const auto& [g, e] : transitions) {
    if (g < 0 || g >= size() || e < 0 || e >= size())
      throw ValidationError("transition references a level out of range");
    if (roles[g] != LevelRole::Ground || roles[e] != LevelRole::Excited)
      throw ValidationError("transition (" + labels[g] + "," + labels[e] +
                            ") must connect a ground and an excited level");
  }
}

LevelScheme build_pr_yso_scheme() {
  LevelScheme s;
  s.labels = {"1", "2", "3", "5"};
  s.roles = {LevelRole::Ground, LevelRole::Ground, LevelRole::Ground,
             LevelRole::Excited};
  s.transitions = {{0, 3}, {1, 3}, {2, 3}};
  s.validate();
  return s;
}

double SampledEnvelope::at(double t) const {
  if (values.empty() || dt <= 0.0) return 0.0;
  const double x = (t - t0) / dt;
  if (x < 0.0 || x > static_cast<double>(values.size() - 1)) return 0.0;
  const auto i = static_cast<std::size_t>(x);
  if (i + 1 >= values.size()) return values.back();
  const double f = x - static_cast<double>(i);
  return values[i] * (1.0 - f) + values[i + 1] * f;
}

namespace {
constexpr double kGaussianTruncationFwhm = 4.0;
}

double CheckedPulse::envelope(double t) const {
  if (sampled) return sampled->at(t);
  if (rabi_peak == 0.0) return 0.0;
  switch (shape) {
    case PulseShape::Rectangular:
      return (t >= start_us && t <= start_us + duration_us) ? rabi_peak : 0.0;
    case PulseShape::Gaussian: {
      const double dtc = t - start_us;
      if (std::abs(dtc) > kGaussianTruncationFwhm * duration_us) return 0.0;
      const double u = 2.0 * dtc / duration_us;
      return rabi_peak * std::exp2(-u * u);
    }
  }
  return 0.0;
}

bool CheckedPulse::active(double t) const { return envelope(t) != 0.0; }

std::pair<double, double> CheckedPulse::window() const {
  if (sampled) {
    return {sampled->t0,
            sampled->t0 + sampled->dt * static_cast<double>(sampled->values.size() - 1)};
  }
  if (shape == PulseShape::Gaussian) {
    return {start_us - kGaussianTruncationFwhm * duration_us,
            start_us + kGaussianTruncationFwhm * duration_us};
  }
  return {start_us, start_us + duration_us};
}

CheckedPulseSequence validate_pulse_sequence(const PulseSequence& seq,
                                             const LevelScheme& scheme) {
  scheme.validate();
  CheckedPulseSequence out;
  out.pulses.reserve(seq.size());
  for (const auto& p : seq) {
    if (p.duration_us < 0.0)
      throw ValidationError("pulse '" + p.label + "': negative duration");
    if (p.duration_us == 0.0 && p.rabi_peak != 0.0)
      throw ValidationError("pulse '" + p.label +
                            "': zero duration with non-zero amplitude");
    const int a = scheme.index_of(p.lower);
    const int b = scheme.index_of(p.upper);
    if (scheme.roles[a] == scheme.roles[b])
      throw ValidationError("pulse '" + p.label + "': transition (" + p.lower +
                            "," + p.upper + ") does not connect ground and excited");
    const int g = scheme.roles[a] == LevelRole::Ground ? a : b;
    const int e = g == a ? b : a;
    if (!scheme.allowed(g, e))
      throw ValidationError("pulse '" + p.label + "': transition (" + p.lower +
                            "," + p.upper + ") is not optically allowed");
    CheckedPulse cp;
    cp.ground = g;
    cp.excited = e;
    cp.shape = p.shape;
    cp.start_us = p.start_us;
    cp.duration_us = p.duration_us;
    cp.rabi_peak = p.rabi_peak;
    cp.detuning = p.detuning;
    cp.phase = p.phase;
    cp.label = p.label;
    out.pulses.push_back(std::move(cp));
  }
  std::stable_sort(out.pulses.begin(), out.pulses.end(),
                   [](const CheckedPulse& x, const CheckedPulse& y) {
                     return x.start_us < y.start_us;
                   });
  return out;
}

double RelaxationSpec::decay_out_of(int level) const {
  double total = 0.0;
  for (const auto& ch : channels)
    if (ch.from == level) total += ch.rate;
  return total;
}

double RelaxationSpec::coherence_rate(int i, int j) const {
  if (i > j) std::swap(i, j);
  if (auto it = coherence_total.find({i, j}); it != coherence_total.end())
    return it->second;
  return 0.5 * (decay_out_of(i) + decay_out_of(j));
}

void RelaxationSpec::check(int n_levels) {
  warnings.clear();
  for (const auto& ch : channels) {
    if (ch.rate < 0.0) throw ValidationError("negative population decay rate");
    if (ch.from < 0 || ch.from >= n_levels || ch.to < 0 || ch.to >= n_levels)
      throw ValidationError("decay channel references a level out of range");
    if (ch.from == ch.to)
      throw ValidationError("decay channel must connect distinct levels");
  }
  for (const auto& [pair, rate] : coherence_total) {
    if (rate < 0.0) throw ValidationError("negative coherence decay rate");
    const double lindblad_min =
        0.5 * (decay_out_of(pair.first) + decay_out_of(pair.second));
    if (rate < lindblad_min - 1e-15) {
      warnings.push_back("coherence decay for pair (" +
                         std::to_string(pair.first) + "," +
                         std::to_string(pair.second) +
                         ") is below the population-decay minimum");
    }
  }
}

double rabi_from_intensity(double intensity_W_cm2,
                           const IntensityCalibration& cal) {
  if (intensity_W_cm2 < 0.0)
    throw ValidationError("intensity must be non-negative");
  if (cal.k_kHz_per_sqrt_intensity <= 0.0)
    throw ValidationError("calibration constant k must be positive");
  return units::angular_from_kHz(cal.k_kHz_per_sqrt_intensity *
                                 std::sqrt(intensity_W_cm2));
}

void ScenarioConfig::validate() const {
  scheme.validate();
  if (static_cast<int>(initial_populations.size()) != scheme.size())
    throw ValidationError("initial populations: one entry per level required");
  double sum = 0.0;
  for (double p : initial_populations) {
    if (p < 0.0 || p > 1.0)
      throw ValidationError("initial populations must lie in [0,1]");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw ValidationError("initial populations must sum to 1");
  if (sample_step_us <= 0.0) throw ValidationError("sample step must be positive");
  if (rtol <= 0.0 || atol <= 0.0)
    throw ValidationError("integrator tolerances must be positive");
}

}  // namespace slowlight
