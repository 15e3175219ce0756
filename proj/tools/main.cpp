// Command-line front end: simulate / sweep / analyze.
//
// Exit codes: 0 success, 1 validation error, 2 numerical error, 3 I/O error.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "slowlight/analysis.hpp"
#include "slowlight/config.hpp"
#include "slowlight/errors.hpp"
#include "slowlight/io.hpp"
#include "slowlight/scenario.hpp"

namespace {

using namespace slowlight;

int cmd_simulate(const std::string& config_path, const std::string& out_dir,
                 bool plots) {
  Config cfg = Config::load(config_path);
  const ScenarioOutcome outcome = run_scenario(cfg, out_dir, plots);
  std::cout << outcome.summary;
  std::cout << "wrote " << outcome.files.size() << " file(s) to " << out_dir
            << "\n";
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir,
              const std::string& param, const std::string& values,
              bool plots) {
  Config base = Config::load(config_path);
  std::vector<std::string> items;
  {
    std::stringstream ss(values);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto a = item.find_first_not_of(" \t");
      const auto b = item.find_last_not_of(" \t");
      if (a == std::string::npos)
        throw ValidationError("--values: empty list item");
      items.push_back(item.substr(a, b - a + 1));
    }
  }
  if (items.empty()) throw ValidationError("--values: empty list");

  std::vector<double> xs;
  std::ostringstream index;
  index << "param = " << param << "\n";
  for (std::size_t i = 0; i < items.size(); ++i) {
    Config cfg = base;
    cfg.override_value(param, items[i]);
    const std::string sub = out_dir + "/run_" + std::to_string(i);
    const ScenarioOutcome outcome = run_scenario(cfg, sub, plots);
    index << "run_" << i << ": " << param << " = " << items[i] << "\n";
    std::cout << "[" << param << " = " << items[i] << "]\n"
              << outcome.summary;
  }
  write_text(out_dir + "/sweep_index.txt", index.str());
  return 0;
}

int cmd_analyze(const std::string& trace_path, const std::string& window) {
  double t0 = 0.0, t1 = 0.0;
  if (std::sscanf(window.c_str(), "%lf,%lf", &t0, &t1) != 2 || t1 <= t0)
    throw ValidationError("--window expects 't0,t1' with t1 > t0");

  const CsvTable table = read_csv(trace_path);
  const auto& t = table.column("t_us");
  const auto& i_out = table.column("I_out");
  const auto est = extract_oscillation_frequency(t, i_out, t0, t1);
  const double cycles = count_oscillation_cycles(t, i_out, t0, t1);

  std::cout << "f_osc_kHz = " << format_number(est.frequency_kHz) << "\n"
            << "amplitude = " << format_number(est.amplitude) << "\n";
  if (est.damping_rate)
    std::cout << "damping_per_us = " << format_number(*est.damping_rate)
              << "\n";
  std::cout << "cycles = " << format_number(cycles) << "\n"
            << "method = " << est.method << "\n";
  if (!est.confidence.empty())
    std::cout << "note = " << est.confidence << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Slow-light and all-optical-switching simulator for a "
               "spectral-hole-burning medium"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", param, values, trace_path, window;
  bool plots = false;

  auto* sim = app.add_subcommand("simulate", "run one scenario from a config");
  sim->add_option("--config", config_path, "key = value config file")
      ->required();
  sim->add_option("--out", out_dir, "output directory");
  sim->add_flag("--plots", plots, "also write SVG plots");

  auto* sweep = app.add_subcommand("sweep", "re-run a scenario over a parameter");
  sweep->add_option("--config", config_path, "key = value config file")
      ->required();
  sweep->add_option("--param", param, "config key to vary")->required();
  sweep->add_option("--values", values, "comma-separated values")->required();
  sweep->add_option("--out", out_dir, "output directory");
  sweep->add_flag("--plots", plots, "also write SVG plots");

  auto* analyze = app.add_subcommand("analyze", "oscillation analysis of a trace CSV");
  analyze->add_option("--trace", trace_path, "trace.csv path")->required();
  analyze->add_option("--window", window, "analysis window 't0,t1' in us")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return cmd_simulate(config_path, out_dir, plots);
    if (sweep->parsed()) return cmd_sweep(config_path, out_dir, param, values, plots);
    if (analyze->parsed()) return cmd_analyze(trace_path, window);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
