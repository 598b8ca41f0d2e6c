#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "pump/bloch.hpp"
#include "pump/config.hpp"
#include "pump/errors.hpp"
#include "pump/output.hpp"
#include "pump/protocol.hpp"
#include "pump/version.hpp"

namespace {

using namespace pump;

struct Emitter {
  std::filesystem::path dir;
  std::vector<EmittedFile> files;

  void write(const std::string& name, const std::string& content) {
    write_text_file((dir / name).string(), content);
    files.push_back({name, content.size(), digest_hex(content)});
  }
};

bool wants(const RunConfig& config, OutputFormat format) {
  return std::find(config.formats.begin(), config.formats.end(), format) != config.formats.end();
}

int worker_count(const RunConfig& config) {
  if (config.workers > 0) return config.workers;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

std::vector<LineSeries> scalar_series(const TrajectoryStats& traj, ExperimentKind kind) {
  std::vector<LineSeries> series;
  series.push_back({"shift/d", traj.mean_shift});
  if (kind != ExperimentKind::SinglePump) {
    series.push_back({"gamma_max", traj.mean_gamma_max});
    series.push_back({"nity", traj.mean_nity});
  }
  return series;
}

void emit_trajectory(Emitter& emitter, const RunConfig& config, const EnsembleStats& stats) {
  const std::string name = experiment_kind_name(config.experiment);
  if (wants(config, OutputFormat::Csv)) {
    emitter.write("trajectory.csv", ensemble_csv(stats.traj));
  }
  if (wants(config, OutputFormat::Svg)) {
    emitter.write("density.svg",
                  heatmap_svg(stats.traj.t, stats.traj.mean_density, name + ": mean density"));
    emitter.write("observables.svg", lines_svg(stats.traj.t, scalar_series(stats.traj, config.experiment),
                                               name + ": ensemble means", "value"));
  }
}

void finish(Emitter& emitter, const RunConfig& config, const std::vector<std::uint64_t>& seeds,
            std::chrono::steady_clock::time_point start) {
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (wants(config, OutputFormat::Json)) {
    const std::string manifest =
        manifest_json(serialize_config(config), seeds, seconds, emitter.files);
    write_text_file((emitter.dir / "run_manifest.json").string(), manifest);
  }
}

int run_chern_cli(const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  RiceMeleParams params;
  params.J = config.J;
  params.L = config.L;
  params.Delta0 = config.Delta0;
  params.delta0 = config.delta0;
  params.phi0 = config.phi0;
  const ChernResult result = chern_numbers(params, config.grid_k, config.grid_t);
  std::printf("nu1=%+d nu2=%+d\n", result.nu1, result.nu2);
  std::printf("grid=%dx%d raw1=%.3e raw2=%.3e\n", result.n_k, result.n_t, result.raw1 - result.nu1,
              result.raw2 - result.nu2);

  Emitter emitter{config.output_dir, {}};
  std::filesystem::create_directories(emitter.dir);
  if (wants(config, OutputFormat::Csv)) {
    std::string csv = "nu1,nu2,raw1,raw2,grid_k,grid_t\n";
    csv += std::to_string(result.nu1) + "," + std::to_string(result.nu2) + "," +
           format_double(result.raw1) + "," + format_double(result.raw2) + "," +
           std::to_string(result.n_k) + "," + std::to_string(result.n_t) + "\n";
    emitter.write("chern.csv", csv);
  }
  finish(emitter, config, {}, start);
  return 0;
}

int run_experiment_cli(const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const ExperimentSpec spec = config.experiment_spec();
  const int workers = worker_count(config);

  Emitter emitter{config.output_dir, {}};
  std::filesystem::create_directories(emitter.dir);

  std::vector<std::uint64_t> seeds;
  switch (config.experiment) {
    case ExperimentKind::SinglePump: {
      const EnsembleStats stats = run_single_pump(spec, workers);
      seeds = stats.seeds;
      emit_trajectory(emitter, config, stats);
      std::printf("final mean shift/d = %.4f\n", stats.traj.mean_shift.back());
      break;
    }
    case ExperimentKind::FockPump: {
      const EnsembleStats stats = run_fock_pump(spec, workers);
      seeds = stats.seeds;
      emit_trajectory(emitter, config, stats);
      std::printf("final mean shift/d = %.4f  mean gamma_max = %.4f  mean fidelity = %.4f\n",
                  stats.traj.mean_shift.back(), stats.traj.mean_gamma_max.back(),
                  stats.traj.mean_fidelity.back());
      break;
    }
    case ExperimentKind::DisorderScan: {
      const std::vector<DisorderScanRow> rows = run_disorder_scan(spec, config.amplitudes, workers);
      if (wants(config, OutputFormat::Csv)) emitter.write("scan.csv", scan_csv(rows));
      if (wants(config, OutputFormat::Svg)) {
        std::vector<double> amps;
        LineSeries f{"mean_fidelity", {}};
        LineSeries shift{"mean_shift", {}};
        for (const DisorderScanRow& row : rows) {
          amps.push_back(row.amplitude);
          f.y.push_back(row.mean_fidelity);
          shift.y.push_back(row.mean_shift);
        }
        emitter.write("scan.svg", lines_svg(amps, {f, shift}, "scan-disorder", "value"));
      }
      for (const DisorderScanRow& row : rows) {
        std::printf("amplitude = %.3f  F = %.4f +- %.4f  shift/d = %.4f +- %.4f\n", row.amplitude,
                    row.mean_fidelity, row.std_fidelity, row.mean_shift, row.std_shift);
      }
      break;
    }
    case ExperimentKind::Hom: {
      const EnsembleStats stats = run_hom(spec, workers);
      seeds = stats.seeds;
      emit_trajectory(emitter, config, stats);
      std::printf("final mean Nity = %.4f\n", stats.traj.mean_nity.back());
      break;
    }
    case ExperimentKind::FullProtocol: {
      const EnsembleStats stats = run_full_protocol(spec, workers);
      seeds = stats.seeds;
      emit_trajectory(emitter, config, stats);
      if (wants(config, OutputFormat::Csv)) {
        const char* names[] = {"gamma_input.csv", "gamma_pumped.csv", "gamma_interfered.csv",
                               "gamma_final.csv"};
        for (std::size_t i = 0; i < stats.gamma_snapshots.size() && i < 4; ++i) {
          emitter.write(names[i], gamma_csv(stats.gamma_snapshots[i].second));
        }
      }
      double max_shift = 0.0;
      for (double s : stats.traj.mean_shift) max_shift = std::max(max_shift, std::abs(s));
      std::printf("final mean Nity = %.4f  max |mean shift/d| = %.4f\n",
                  stats.traj.mean_nity.back(), max_shift);
      break;
    }
    case ExperimentKind::ChernCheck:
      return run_chern_cli(config);
  }
  finish(emitter, config, seeds, start);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Disordered Thouless pumping of one and two bosons on a Rice-Mele chain"};
  app.set_version_flag("--version", pump::kVersion);
  app.require_subcommand(1);

  struct SubcommandState {
    ExperimentKind kind;
    CLI::App* cmd = nullptr;
    std::string config_file;
    std::map<std::string, std::string> overrides;  // config key -> value
  };
  std::vector<SubcommandState> subs;
  subs.reserve(6);

  const std::pair<ExperimentKind, const char*> kinds[] = {
      {ExperimentKind::ChernCheck, "band Chern numbers on the (k, phi) torus"},
      {ExperimentKind::SinglePump, "pump one particle through the chain"},
      {ExperimentKind::FockPump, "pump a doubly occupied site, disorder ensemble"},
      {ExperimentKind::DisorderScan, "fidelity and COM shift vs disorder amplitude"},
      {ExperimentKind::Hom, "two-boson interference stage after the quench"},
      {ExperimentKind::FullProtocol, "pump, interfere, and redistribute entanglement"},
  };

  for (const auto& [kind, description] : kinds) {
    SubcommandState& sub = subs.emplace_back();
    sub.kind = kind;
    sub.cmd = app.add_subcommand(experiment_kind_name(kind), description);
    sub.cmd->add_option("--config", sub.config_file, "key-value config file");

    auto key_option = [&sub](const std::string& flag, const std::string& key,
                             const std::string& help) {
      sub.cmd->add_option_function<std::string>(
          flag, [&sub, key](const std::string& value) { sub.overrides[key] = value; }, help);
    };
    key_option("--J", "J", "tunneling unit (default 1)");
    key_option("--L", "L", "unit cells; the chain has 2L sites");
    key_option("--Delta0", "Delta0", "offset modulation amplitude");
    key_option("--delta0", "delta0", "tunneling modulation amplitude");
    key_option("--phi0", "phi0", "initial modulation phase (radians)");
    key_option("--schedule", "schedule", "linear | gap-adaptive");
    key_option("--omega", "omega", "linear sweep rate");
    key_option("--epsilon", "epsilon", "gap-adaptive sweep rate");
    key_option("--disorder,--kind", "disorder", "none | uniform | normal");
    key_option("--eta", "eta", "uniform disorder amplitude");
    key_option("--mu", "mu", "normal disorder mean");
    key_option("--sigma", "sigma", "normal disorder standard deviation");
    key_option("--samples", "samples", "disorder ensemble size");
    key_option("--start", "start", "first particle site (1-based)");
    key_option("--start2", "start2", "second particle site (1-based)");
    key_option("--cycles", "cycles", "pump cycles per transport stage");
    key_option("--sample-times", "sample_times", "observable records per stage");
    key_option("--seed,--base-seed", "base_seed", "base seed for all randomness");
    key_option("--amplitudes", "amplitudes", "comma list for scan-disorder");
    key_option("--grid-k", "grid_k", "chern k grid");
    key_option("--grid-t", "grid_t", "chern phi grid");
    key_option("--steps-per-cycle", "steps_per_cycle", "integrator steps per pump cycle");
    key_option("--method", "method", "midpoint-exp | rk4");
    key_option("--tolerance", "tolerance", "norm-drift bound");
    key_option("--out,--output-dir", "output_dir", "output directory");
    key_option("--formats", "formats", "subset of csv,json,svg");
    key_option("--workers", "workers", "worker pool size (0 = all cores)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    std::cerr << app.help() << "\n";
    return 2;
  }

  try {
    const SubcommandState* active = nullptr;
    for (const SubcommandState& sub : subs) {
      if (sub.cmd->parsed()) active = &sub;
    }
    RunConfig config = active->config_file.empty()
                           ? default_config(active->kind)
                           : parse_config_file(active->config_file, active->kind);
    for (const auto& [key, value] : active->overrides) {
      apply_config_key(config, key, value);
    }
    if (const char* dir = std::getenv("PUMP_OUTPUT_DIR"); dir != nullptr && *dir != '\0') {
      config.output_dir = dir;
    }
    return run_experiment_cli(config);
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    std::cerr << "run with --help for usage\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
