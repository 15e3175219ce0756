// Scenario orchestration: builds domain objects from a Config, runs the
// figure-keyed scenarios, and emits CSV tables, optional SVG plots, and a
// text summary.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "slowlight/config.hpp"
#include "slowlight/liouville.hpp"
#include "slowlight/model.hpp"
#include "slowlight/propagation.hpp"
#include "slowlight/spectra.hpp"

namespace slowlight {

// Config -> domain object builders (shared by scenarios and tests).
RelaxationSpec build_relaxation(const Config& cfg, const LevelScheme& scheme);
HoleBurnConfig build_hole(const Config& cfg);
FrequencyGrid build_grid(const Config& cfg);
std::vector<double> build_initial_populations(const Config& cfg,
                                              const LevelScheme& scheme);
double probe_rabi(const Config& cfg);    // rad/us
double control_rabi(const Config& cfg);  // rad/us
double effective_od(const Config& cfg);

// Transient run (Gaussian slow-light envelope whose peak sits at the control
// turn-on, integrated directly): the core of the `transient` and
// `intensity-sweep` scenarios.
struct TransientResult {
  TimeSeries series;
  TransmitResult transmit;
  CheckedPulse probe;
  CheckedPulse control;
  double window_lo = 0.0;  // oscillation analysis window
  double window_hi = 0.0;
};

TransientResult run_transient(const Config& cfg, double control_rabi_override = -1.0);

struct ScenarioOutcome {
  std::string scenario;
  std::vector<std::filesystem::path> files;
  std::string summary;
};

// Runs the configured scenario; outputs are staged and moved into out_dir on
// success. Deterministic for a fixed config.
ScenarioOutcome run_scenario(const Config& cfg,
                             const std::filesystem::path& out_dir,
                             bool emit_plots);

}  // namespace slowlight
