#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pump/protocol.hpp"

namespace pump {

enum class OutputFormat { Csv, Json, Svg };

/// Flat run configuration, one field per config key. Defaults are the
/// reference setup (L = 9 cells, Delta0 = 20, delta0 = 1, J = 1) with the
/// schedule, start sites and disorder chosen per experiment kind. All
/// randomness flows from base_seed; there is no wall-clock entropy anywhere.
struct RunConfig {
  ExperimentKind experiment = ExperimentKind::FockPump;

  // model
  double J = 1.0;
  int L = 9;
  double Delta0 = 20.0;
  double delta0 = 1.0;
  double phi0 = 0.0;

  // schedule (both rates are kept so configs round-trip; `schedule` picks one)
  ScheduleKind schedule = ScheduleKind::Linear;
  double omega = 0.08;
  double epsilon = 0.03;

  // disorder
  DisorderKind disorder = DisorderKind::None;
  double eta = 0.0;
  double mu = 0.0;
  double sigma = 0.0;

  // run
  int samples = 100;
  int start = 7;
  int start2 = 7;
  int cycles = 1;
  int sample_times = 400;
  std::uint64_t base_seed = 12345;
  std::vector<double> amplitudes = {0.0, 0.5, 1.0, 2.0, 3.0, 4.0};
  int grid_k = 101;
  int grid_t = 101;

  // integrator
  int steps_per_cycle = 20000;
  PropagatorMethod method = PropagatorMethod::MidpointExponential;
  double tolerance = 1e-8;

  // output
  std::string output_dir = "out";
  std::vector<OutputFormat> formats = {OutputFormat::Csv, OutputFormat::Json, OutputFormat::Svg};
  int workers = 0;  // 0 = available parallelism

  /// Assembles (and validates) the experiment description.
  ExperimentSpec experiment_spec() const;

  bool operator==(const RunConfig&) const = default;
};

/// Per-experiment defaults: transport experiments use the linear omega = 0.08
/// sweep from two doubly occupied bosons at site 7; interference and the full
/// protocol use the gap-adaptive epsilon = 0.03 sweep (from |9,10> at
/// phi0 = pi/2 and |7,12> at phi0 = 0 respectively).
RunConfig default_config(ExperimentKind kind);

/// Key-value text: `key = value` lines, `#` comments, optional `[section]`
/// grouping headers (model, schedule, disorder, run, integrator, output).
/// Unknown keys and unknown sections are rejected.
RunConfig parse_config_text(const std::string& text, ExperimentKind kind);
RunConfig parse_config_file(const std::string& path, ExperimentKind kind);

/// Applies one `key = value` assignment. Throws config_error on unknown keys
/// or unparsable values.
void apply_config_key(RunConfig& config, const std::string& key, const std::string& value);

/// Canonical form: every effective key in fixed order under its section.
/// parse_config_text(serialize_config(c), c.experiment) == c.
std::string serialize_config(const RunConfig& config);

std::string experiment_kind_name(ExperimentKind kind);
ExperimentKind experiment_kind_from_name(const std::string& name);

}  // namespace pump
