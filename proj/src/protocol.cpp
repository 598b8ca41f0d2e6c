#include "pump/protocol.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "pump/errors.hpp"

namespace pump {

namespace {

/// Runs fn(0..n-1) on a small pool. Results must be written into
/// sample-indexed slots by the caller so that the reduction (and therefore
/// every output byte) is independent of scheduling.
template <typename Fn>
void parallel_samples(int n, int n_workers, Fn&& fn) {
  n_workers = std::max(1, n_workers);
  if (n_workers == 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(n);
  auto worker = [&] {
    for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> threads;
  const int spawn = std::min(n_workers, n);
  threads.reserve(spawn);
  for (int w = 0; w < spawn; ++w) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  for (int i = 0; i < n; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);  // lowest sample index first
  }
}

struct SampleRun {
  std::vector<ObservableRecord> records;
  std::uint64_t seed = 0;
  std::vector<std::pair<double, Eigen::MatrixXd>> gammas;
};

void accumulate(std::vector<double>& mean, std::vector<double>& stdev, std::size_t n_times,
                const std::vector<SampleRun>& runs, double (*pick)(const ObservableRecord&)) {
  const std::size_t n = runs.size();
  mean.assign(n_times, 0.0);
  stdev.assign(n_times, 0.0);
  for (std::size_t k = 0; k < n_times; ++k) {
    double m = 0.0;
    for (const SampleRun& run : runs) m += pick(run.records[k]);
    m /= static_cast<double>(n);
    double var = 0.0;
    for (const SampleRun& run : runs) {
      const double d = pick(run.records[k]) - m;
      var += d * d;
    }
    mean[k] = m;
    stdev[k] = n > 1 ? std::sqrt(var / static_cast<double>(n - 1)) : 0.0;
  }
}

TrajectoryStats reduce_trajectories(const std::vector<SampleRun>& runs) {
  TrajectoryStats traj;
  if (runs.empty() || runs[0].records.empty()) return traj;
  const std::size_t n_times = runs[0].records.size();
  const std::size_t n = runs.size();

  traj.t.reserve(n_times);
  traj.phi.reserve(n_times);
  for (const ObservableRecord& rec : runs[0].records) {
    traj.t.push_back(rec.t);
    traj.phi.push_back(rec.phi);
  }

  accumulate(traj.mean_com, traj.std_com, n_times, runs,
             [](const ObservableRecord& r) { return r.com; });
  accumulate(traj.mean_gamma_max, traj.std_gamma_max, n_times, runs,
             [](const ObservableRecord& r) { return r.gamma_max; });
  accumulate(traj.mean_nity, traj.std_nity, n_times, runs,
             [](const ObservableRecord& r) { return r.nity; });
  accumulate(traj.mean_fidelity, traj.std_fidelity, n_times, runs,
             [](const ObservableRecord& r) { return r.fidelity; });

  // COM shift relative to each sample's own t = 0 record, in cell units.
  traj.mean_shift.assign(n_times, 0.0);
  traj.std_shift.assign(n_times, 0.0);
  for (std::size_t k = 0; k < n_times; ++k) {
    double m = 0.0;
    for (const SampleRun& run : runs) m += com_shift(run.records[0], run.records[k]);
    m /= static_cast<double>(n);
    double var = 0.0;
    for (const SampleRun& run : runs) {
      const double d = com_shift(run.records[0], run.records[k]) - m;
      var += d * d;
    }
    traj.mean_shift[k] = m;
    traj.std_shift[k] = n > 1 ? std::sqrt(var / static_cast<double>(n - 1)) : 0.0;
  }

  const Eigen::Index m_sites = runs[0].records[0].density.size();
  traj.mean_density.assign(n_times, Eigen::VectorXd::Zero(m_sites));
  traj.std_density.assign(n_times, Eigen::VectorXd::Zero(m_sites));
  for (std::size_t k = 0; k < n_times; ++k) {
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(m_sites);
    for (const SampleRun& run : runs) mean += run.records[k].density;
    mean /= static_cast<double>(n);
    Eigen::VectorXd var = Eigen::VectorXd::Zero(m_sites);
    for (const SampleRun& run : runs) {
      var += (run.records[k].density - mean).cwiseAbs2();
    }
    traj.mean_density[k] = mean;
    traj.std_density[k] = n > 1 ? (var / static_cast<double>(n - 1)).cwiseSqrt().eval()
                                : Eigen::VectorXd::Zero(m_sites).eval();
  }
  return traj;
}

EnsembleStats reduce_ensemble(const std::vector<SampleRun>& runs) {
  EnsembleStats stats;
  stats.traj = reduce_trajectories(runs);
  for (const SampleRun& run : runs) {
    const ObservableRecord& last = run.records.back();
    stats.final_fidelity.push_back(last.fidelity);
    stats.final_nity.push_back(last.nity);
    stats.final_shift.push_back(com_shift(run.records.front(), last));
    stats.final_gamma_max.push_back(last.gamma_max);
    stats.seeds.push_back(run.seed);
  }
  if (!runs.empty() && !runs[0].gammas.empty()) {
    const std::size_t n_snaps = runs[0].gammas.size();
    for (std::size_t s = 0; s < n_snaps; ++s) {
      Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(runs[0].gammas[s].second.rows(),
                                                   runs[0].gammas[s].second.cols());
      for (const SampleRun& run : runs) mean += run.gammas[s].second;
      mean /= static_cast<double>(runs.size());
      stats.gamma_snapshots.emplace_back(runs[0].gammas[s].first, mean);
    }
  }
  return stats;
}

[[noreturn]] void rethrow_with_sample(int sample, std::uint64_t seed) {
  try {
    throw;
  } catch (const numerical_error& e) {
    throw numerical_error("sample " + std::to_string(sample) + " (seed " + std::to_string(seed) +
                          "): " + e.what());
  }
}

void shift_times(std::vector<ObservableRecord>& records, double offset) {
  for (ObservableRecord& rec : records) rec.t += offset;
}

}  // namespace

void ExperimentSpec::validate() const {
  params.validate();
  prop.validate();
  if (!(schedule.rate > 0.0)) throw config_error("schedule rate must be positive");
  if (n_samples < 1) throw config_error("n_samples must be at least 1");
  if (n_records < 2) throw config_error("sample_times must be at least 2");
  if (n_cycles < 1) throw config_error("cycles must be at least 1");
  const int m = params.n_sites();
  if (start_site < 1 || start_site > m || start_site2 < 1 || start_site2 > m) {
    throw config_error("initial sites must lie within the chain (1.." + std::to_string(m) + ")");
  }
  if ((kind == ExperimentKind::FullProtocol || kind == ExperimentKind::Hom) &&
      schedule.kind != ScheduleKind::GapAdaptive) {
    throw config_error("this experiment requires the gap-adaptive schedule");
  }
}

StageClock make_stage_clock(const RiceMeleParams& params, const ScheduleSpec& schedule,
                            int n_cycles) {
  const PhaseSchedule stage_a = PhaseSchedule::make(schedule, params.phi0, params);
  const PhaseSchedule stage_b =
      PhaseSchedule::make(schedule, params.phi0 + M_PI_2, params);
  const PhaseSchedule stage_c = PhaseSchedule::make(schedule, params.phi0 + M_PI, params);
  StageClock clock;
  clock.period = stage_a.period();
  clock.tau = stage_b.time_to_advance(M_PI_2);
  clock.pump_end = n_cycles * stage_a.period();
  clock.interfere_end = clock.pump_end + clock.tau;
  clock.total = clock.interfere_end + n_cycles * stage_c.period();
  return clock;
}

EnsembleStats run_fock_pump(const ExperimentSpec& spec, int n_workers) {
  spec.validate();
  const int m = spec.params.n_sites();
  const SymBasis basis(m);
  const PhaseSchedule schedule = PhaseSchedule::make(spec.schedule, spec.params.phi0, spec.params);
  const double duration = spec.n_cycles * schedule.period();

  // Ideal dispersionless transport moves every site by one cell per cycle.
  const int shift = 2 * spec.n_cycles;
  if (spec.start_site + shift > m || spec.start_site2 + shift > m) {
    throw config_error("pump target leaves the chain; reduce cycles or move the start sites");
  }
  const TwoBosonState target = make_state(basis, spec.start_site + shift, spec.start_site2 + shift);

  std::vector<SampleRun> runs(spec.n_samples);
  parallel_samples(spec.n_samples, n_workers, [&](int i) {
    const DisorderRealization disorder = sample_disorder(spec.disorder, m, i);
    try {
      const TwoBosonState state0 = make_state(basis, spec.start_site, spec.start_site2);
      TwoBosonEvolutionResult result = evolve_two_boson(spec.params, schedule, disorder, state0,
                                                        duration, spec.prop, spec.n_records, &target);
      runs[i].records = std::move(result.trajectory);
      runs[i].seed = disorder.seed;
    } catch (const numerical_error&) {
      rethrow_with_sample(i, disorder.seed);
    }
  });
  return reduce_ensemble(runs);
}

EnsembleStats run_single_pump(const ExperimentSpec& spec, int n_workers) {
  spec.validate();
  const int m = spec.params.n_sites();
  const PhaseSchedule schedule = PhaseSchedule::make(spec.schedule, spec.params.phi0, spec.params);
  const double duration = spec.n_cycles * schedule.period();

  std::vector<SampleRun> runs(spec.n_samples);
  parallel_samples(spec.n_samples, n_workers, [&](int i) {
    const DisorderRealization disorder = sample_disorder(spec.disorder, m, i);
    try {
      Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(m);
      psi0(spec.start_site - 1) = 1.0;
      SingleEvolutionResult result =
          evolve_single(spec.params, schedule, disorder, psi0, duration, spec.prop, spec.n_records);
      runs[i].records = std::move(result.trajectory);
      runs[i].seed = disorder.seed;
    } catch (const numerical_error&) {
      rethrow_with_sample(i, disorder.seed);
    }
  });
  return reduce_ensemble(runs);
}

std::vector<DisorderScanRow> run_disorder_scan(const ExperimentSpec& spec,
                                               const std::vector<double>& amplitudes,
                                               int n_workers) {
  spec.validate();
  std::vector<DisorderScanRow> rows;
  rows.reserve(amplitudes.size());
  for (const double amplitude : amplitudes) {
    if (amplitude < 0.0) throw config_error("disorder amplitudes must be >= 0");
    ExperimentSpec point = spec;
    if (point.disorder.kind == DisorderKind::Uniform) point.disorder.eta = amplitude;
    if (point.disorder.kind == DisorderKind::Normal) point.disorder.sigma = amplitude;
    const EnsembleStats stats = run_fock_pump(point, n_workers);

    DisorderScanRow row;
    row.amplitude = amplitude;
    const std::size_t n = stats.final_fidelity.size();
    for (std::size_t i = 0; i < n; ++i) {
      row.mean_fidelity += stats.final_fidelity[i];
      row.mean_shift += stats.final_shift[i];
    }
    row.mean_fidelity /= static_cast<double>(n);
    row.mean_shift /= static_cast<double>(n);
    double var_f = 0.0, var_s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      var_f += std::pow(stats.final_fidelity[i] - row.mean_fidelity, 2);
      var_s += std::pow(stats.final_shift[i] - row.mean_shift, 2);
    }
    row.std_fidelity = n > 1 ? std::sqrt(var_f / static_cast<double>(n - 1)) : 0.0;
    row.std_shift = n > 1 ? std::sqrt(var_s / static_cast<double>(n - 1)) : 0.0;
    rows.push_back(row);
  }
  return rows;
}

EnsembleStats run_hom(const ExperimentSpec& spec, int n_workers) {
  spec.validate();
  const int m = spec.params.n_sites();
  const SymBasis basis(m);
  const PhaseSchedule schedule = PhaseSchedule::make(spec.schedule, spec.params.phi0, spec.params);
  const double tau = schedule.time_to_advance(M_PI_2);

  std::vector<SampleRun> runs(spec.n_samples);
  parallel_samples(spec.n_samples, n_workers, [&](int i) {
    const DisorderRealization disorder = sample_disorder(spec.disorder, m, i);
    try {
      const TwoBosonState state0 = make_state(basis, spec.start_site, spec.start_site2);
      TwoBosonEvolutionResult result =
          evolve_two_boson(spec.params, schedule, disorder, state0, tau, spec.prop, spec.n_records);
      runs[i].records = std::move(result.trajectory);
      runs[i].seed = disorder.seed;
    } catch (const numerical_error&) {
      rethrow_with_sample(i, disorder.seed);
    }
  });
  return reduce_ensemble(runs);
}

EnsembleStats run_full_protocol(const ExperimentSpec& spec, int n_workers) {
  spec.validate();
  const int m = spec.params.n_sites();
  const SymBasis basis(m);

  const RiceMeleParams params_a = spec.params;
  const RiceMeleParams params_b = quench(params_a, params_a.phi0 + M_PI_2);
  const RiceMeleParams params_c = quench(params_a, params_a.phi0 + M_PI);
  const PhaseSchedule sched_a = PhaseSchedule::make(spec.schedule, params_a.phi0, params_a);
  const PhaseSchedule sched_b = PhaseSchedule::make(spec.schedule, params_b.phi0, params_b);
  const PhaseSchedule sched_c = PhaseSchedule::make(spec.schedule, params_c.phi0, params_c);
  const double dur_a = spec.n_cycles * sched_a.period();
  const double tau = sched_b.time_to_advance(M_PI_2);
  const double dur_c = spec.n_cycles * sched_c.period();

  std::vector<SampleRun> runs(spec.n_samples);
  parallel_samples(spec.n_samples, n_workers, [&](int i) {
    // One static realization for all three stages of this sample.
    const DisorderRealization disorder = sample_disorder(spec.disorder, m, i);
    try {
      const TwoBosonState state0 = make_state(basis, spec.start_site, spec.start_site2);
      TwoBosonEvolutionResult stage_a = evolve_two_boson(params_a, sched_a, disorder, state0, dur_a,
                                                         spec.prop, spec.n_records);
      // Quench: parameters change, amplitudes carry over unchanged.
      TwoBosonEvolutionResult stage_b = evolve_two_boson(params_b, sched_b, disorder,
                                                         stage_a.final_state, tau, spec.prop,
                                                         spec.n_records);
      TwoBosonEvolutionResult stage_c = evolve_two_boson(params_c, sched_c, disorder,
                                                         stage_b.final_state, dur_c, spec.prop,
                                                         spec.n_records);

      SampleRun& run = runs[i];
      run.seed = disorder.seed;
      run.gammas.emplace_back(0.0, correlation(state0));
      run.gammas.emplace_back(dur_a, correlation(stage_a.final_state));
      run.gammas.emplace_back(dur_a + tau, correlation(stage_b.final_state));
      run.gammas.emplace_back(dur_a + tau + dur_c, correlation(stage_c.final_state));

      shift_times(stage_b.trajectory, dur_a);
      shift_times(stage_c.trajectory, dur_a + tau);
      run.records = std::move(stage_a.trajectory);
      run.records.insert(run.records.end(), stage_b.trajectory.begin(), stage_b.trajectory.end());
      run.records.insert(run.records.end(), stage_c.trajectory.begin(), stage_c.trajectory.end());
    } catch (const numerical_error&) {
      rethrow_with_sample(i, disorder.seed);
    }
  });
  return reduce_ensemble(runs);
}

BeamSplitterReport beam_splitter_check(const RiceMeleParams& params, const ScheduleSpec& schedule,
                                       const PropagatorConfig& config) {
  params.validate();
  const int m = params.n_sites();
  const int cell = (params.L + 1) / 2;
  const int odd = 2 * cell - 1;
  const int even = 2 * cell;
  const DisorderRealization clean = DisorderRealization::clean(m);
  const SymBasis basis(m);

  const RiceMeleParams quenched = quench(params, M_PI_2);
  const PhaseSchedule sweep = PhaseSchedule::make(schedule, quenched.phi0, quenched);
  const double tau = sweep.time_to_advance(M_PI_2);

  BeamSplitterReport report;
  {
    Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(m);
    psi0(odd - 1) = 1.0;
    const auto result = evolve_single(quenched, sweep, clean, psi0, tau, config);
    report.amp_odd = std::abs(result.final_state(odd - 1));
    report.amp_even = std::abs(result.final_state(even - 1));
  }
  {
    Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(m);
    psi0(odd - 1) = M_SQRT1_2;
    psi0(even - 1) = M_SQRT1_2;
    const auto result = evolve_single(quenched, sweep, clean, psi0, tau, config);
    report.sym_return_fidelity = std::abs(result.final_state(odd - 1));
  }
  {
    const TwoBosonState pair = make_state(basis, odd, even);
    const auto result = evolve_two_boson(quenched, sweep, clean, pair, tau, config);
    const Eigen::MatrixXd gamma = correlation(result.final_state);
    report.hom_nity = noonity(gamma);
    report.hom_offdiag = gamma(odd - 1, even - 1);
  }
  {
    // Without the quench the phase just keeps sweeping: over a half cycle the
    // two particles pass through the dimer point and swap back to their sites.
    const PhaseSchedule sweep0 = PhaseSchedule::make(schedule, params.phi0, params);
    const double half = sweep0.time_to_advance(M_PI);
    const TwoBosonState pair = make_state(basis, odd, even);
    const auto result = evolve_two_boson(params, sweep0, clean, pair, half, config);
    report.noquench_fidelity = fidelity(result.final_state, pair);
  }
  return report;
}

}  // namespace pump
