// Domain types: level schemes, driving pulses, relaxation, and the
// intensity -> Rabi-frequency calibration. All types are immutable values
// after construction and safe to share across threads.

#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace slowlight {

enum class LevelRole { Ground, Excited };

struct LevelScheme {
  std::vector<std::string> labels;
  std::vector<LevelRole> roles;
  // Optically allowed transitions as (ground index, excited index) pairs.
  std::vector<std::pair<int, int>> transitions;

  int size() const { return static_cast<int>(labels.size()); }
  int index_of(const std::string& label) const;  // throws ValidationError
  bool allowed(int a, int b) const;
  void validate() const;
};

// Four-level shelving scheme: ground hyperfine levels 1, 2, 3 and excited
// level 5, with optical transitions (1,5), (2,5), (3,5).
LevelScheme build_pr_yso_scheme();

enum class PulseShape { Rectangular, Gaussian };

struct Pulse {
  std::string lower;  // level labels; order does not matter
  std::string upper;
  PulseShape shape = PulseShape::Rectangular;
  // Rectangular: start_us is the leading edge, duration_us the full length.
  // Gaussian: start_us is the peak time, duration_us the FWHM of the Rabi
  // envelope itself; the envelope is truncated at +/- 4 FWHM.
  double start_us = 0.0;
  double duration_us = 0.0;
  double rabi_peak = 0.0;  // rad/us
  double detuning = 0.0;   // rad/us
  double phase = 0.0;      // rad
  std::string label;
};

using PulseSequence = std::vector<Pulse>;

// Tabulated envelope (rad/us) on a uniform grid; zero outside, linear
// interpolation inside. Used to drive the master equation with a propagated
// slow-light envelope.
struct SampledEnvelope {
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<double> values;
  double at(double t) const;
};

struct CheckedPulse {
  int ground = -1;
  int excited = -1;
  PulseShape shape = PulseShape::Rectangular;
  double start_us = 0.0;
  double duration_us = 0.0;
  double rabi_peak = 0.0;
  double detuning = 0.0;
  double phase = 0.0;
  std::string label;
  std::shared_ptr<const SampledEnvelope> sampled;  // overrides the shape when set

  double envelope(double t) const;  // rad/us
  bool active(double t) const;
  // [earliest, latest] time the pulse can be non-zero.
  std::pair<double, double> window() const;
};

struct CheckedPulseSequence {
  std::vector<CheckedPulse> pulses;
};

// Resolves labels against the scheme, rejects ground-ground and
// excited-excited transitions and negative durations, and returns the pulses
// sorted by start time. Overlapping pulses are allowed; their Hamiltonians
// add. Idempotent.
CheckedPulseSequence validate_pulse_sequence(const PulseSequence& seq,
                                             const LevelScheme& scheme);

struct RelaxationSpec {
  struct Channel {
    int from = -1;  // excited
    int to = -1;    // ground
    double rate = 0.0;  // 1/us
  };
  std::vector<Channel> channels;
  // Total transverse decay per level pair (1/us). Pairs not listed default to
  // the Lindblad-implied minimum (half the total population decay out of the
  // two members, i.e. no extra pure dephasing).
  std::map<std::pair<int, int>, double> coherence_total;
  std::vector<std::string> warnings;

  double decay_out_of(int level) const;
  double coherence_rate(int i, int j) const;
  // Validates rates and records a warning for every configured pair whose
  // total transverse rate is below the Lindblad-implied minimum.
  void check(int n_levels);
};

struct IntensityCalibration {
  double k_kHz_per_sqrt_intensity = 0.0;  // kHz per sqrt(W/cm^2)
};

// nu_Rabi = k * sqrt(I), returned as an angular rate 2*pi*nu in rad/us.
double rabi_from_intensity(double intensity_W_cm2, const IntensityCalibration& cal);

struct ScenarioConfig {
  LevelScheme scheme;
  RelaxationSpec relaxation;
  CheckedPulseSequence pulses;
  std::vector<double> initial_populations;
  double sample_step_us = 0.05;
  double rtol = 1e-8;
  double atol = 1e-10;

  void validate() const;
};

}  // namespace slowlight
