#include "pump/evolve.hpp"

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "pump/errors.hpp"

namespace pump {

namespace {

using std::complex;

void check_normalized(double norm, double tol, const char* what) {
  if (std::abs(norm - 1.0) > tol) {
    throw config_error(std::string(what) + " must be normalized, |norm - 1| = " +
                       std::to_string(std::abs(norm - 1.0)));
  }
}

void check_drift(double norm, double tol, double t, const char* what) {
  if (std::abs(norm - 1.0) > tol) {
    throw numerical_error(std::string("integration failure: ") + what + " norm drifted to " +
                          std::to_string(norm) + " at t = " + std::to_string(t) +
                          " (bound " + std::to_string(tol) + ")");
  }
}

/// Exact step unitary exp(-i H dt) of a real-symmetric H via eigendecomposition.
Eigen::MatrixXcd step_unitary(const Eigen::MatrixXd& h, double dt) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  const Eigen::MatrixXcd v = es.eigenvectors().cast<complex<double>>();
  Eigen::VectorXcd phases(h.rows());
  for (int i = 0; i < h.rows(); ++i) {
    phases(i) = std::exp(complex<double>(0.0, -es.eigenvalues()(i) * dt));
  }
  return v * phases.asDiagonal() * v.transpose();
}

struct StepGrid {
  int n_steps = 0;
  double dt = 0.0;
  std::vector<int> record_steps;  // ascending, unique, in [0, n_steps]
};

StepGrid make_grid(double duration, double period, const PropagatorConfig& config, int n_records) {
  if (duration < 0.0) throw config_error("evolution duration must be >= 0");
  StepGrid grid;
  grid.n_steps =
      duration == 0.0 ? 0 : static_cast<int>(std::ceil(config.steps_per_cycle * duration / period));
  grid.dt = grid.n_steps == 0 ? 0.0 : duration / grid.n_steps;
  if (n_records > 0) {
    int prev = -1;
    for (int r = 0; r < n_records; ++r) {
      const int step = n_records == 1 ? grid.n_steps
                                      : static_cast<int>(std::llround(
                                            static_cast<double>(r) * grid.n_steps / (n_records - 1)));
      if (step != prev) grid.record_steps.push_back(step);
      prev = step;
    }
  }
  return grid;
}

ObservableRecord observe_single(const Eigen::VectorXcd& psi, double t, double phi) {
  ObservableRecord rec;
  rec.t = t;
  rec.phi = phi;
  rec.density = psi.cwiseAbs2();
  double x = 0.0;
  for (int j = 0; j < psi.size(); ++j) x += (j + 1) * rec.density(j);
  rec.com = x;
  rec.gamma_max = std::numeric_limits<double>::quiet_NaN();
  rec.nity = std::numeric_limits<double>::quiet_NaN();
  rec.fidelity = std::numeric_limits<double>::quiet_NaN();
  return rec;
}

// Symmetric first-quantized amplitude matrix <-> pair-basis amplitudes.
Eigen::MatrixXcd unfold(const TwoBosonState& state) {
  const int m = state.basis.n_sites();
  Eigen::MatrixXcd psi = Eigen::MatrixXcd::Zero(m, m);
  for (int idx = 0; idx < state.amplitudes.size(); ++idx) {
    const auto [j, j2] = state.basis.sites(idx);
    if (j == j2) {
      psi(j - 1, j - 1) = state.amplitudes(idx);
    } else {
      psi(j - 1, j2 - 1) = state.amplitudes(idx) * M_SQRT1_2;
      psi(j2 - 1, j - 1) = psi(j - 1, j2 - 1);
    }
  }
  return psi;
}

TwoBosonState fold(const Eigen::MatrixXcd& psi, const SymBasis& basis) {
  TwoBosonState state;
  state.basis = basis;
  state.amplitudes = Eigen::VectorXcd::Zero(basis.dim());
  for (int idx = 0; idx < state.amplitudes.size(); ++idx) {
    const auto [j, j2] = basis.sites(idx);
    state.amplitudes(idx) = j == j2 ? psi(j - 1, j - 1)
                                    : (psi(j - 1, j2 - 1) + psi(j2 - 1, j - 1)) * M_SQRT1_2;
  }
  return state;
}

}  // namespace

void PropagatorConfig::validate() const {
  if (steps_per_cycle < 1000) {
    throw config_error("steps_per_cycle must be at least 1000, got " +
                       std::to_string(steps_per_cycle));
  }
  if (!(tolerance > 0.0)) throw config_error("tolerance must be positive");
}

SingleEvolutionResult evolve_single(const RiceMeleParams& params, const PhaseSchedule& schedule,
                                    const DisorderRealization& disorder,
                                    const Eigen::VectorXcd& psi0, double duration,
                                    const PropagatorConfig& config, int n_records) {
  params.validate();
  config.validate();
  check_normalized(psi0.norm(), 1e-8, "psi0");
  const int m = params.n_sites();
  if (psi0.size() != m) throw config_error("psi0 has wrong dimension");

  const StepGrid grid = make_grid(duration, schedule.period(), config, n_records);

  SingleEvolutionResult result;
  result.final_state = psi0;
  result.propagator = Eigen::MatrixXcd::Identity(m, m);

  std::size_t next_record = 0;
  auto maybe_record = [&](int step) {
    if (next_record < grid.record_steps.size() && grid.record_steps[next_record] == step) {
      const double t = step * grid.dt;
      check_drift(result.final_state.norm(), config.tolerance, t, "single-particle state");
      result.trajectory.push_back(observe_single(result.final_state, t, schedule.phase_at(t)));
      ++next_record;
    }
  };

  maybe_record(0);
  Eigen::MatrixXcd scratch(m, m);
  for (int s = 0; s < grid.n_steps; ++s) {
    const double t = s * grid.dt;
    if (config.method == PropagatorMethod::MidpointExponential) {
      const Eigen::MatrixXd h =
          build_hamiltonian(params, schedule.phase_at(t + 0.5 * grid.dt), disorder);
      const Eigen::MatrixXcd u = step_unitary(h, grid.dt);
      result.final_state = u * result.final_state;
      scratch.noalias() = u * result.propagator;
      result.propagator.swap(scratch);
    } else {
      const Eigen::MatrixXd h0 = build_hamiltonian(params, schedule.phase_at(t), disorder);
      const Eigen::MatrixXd h1 =
          build_hamiltonian(params, schedule.phase_at(t + 0.5 * grid.dt), disorder);
      const Eigen::MatrixXd h2 = build_hamiltonian(params, schedule.phase_at(t + grid.dt), disorder);
      const complex<double> mi(0.0, -1.0);
      auto rk4 = [&](auto& y) {
        const auto k1 = (mi * (h0 * y)).eval();
        const auto k2 = (mi * (h1 * (y + 0.5 * grid.dt * k1))).eval();
        const auto k3 = (mi * (h1 * (y + 0.5 * grid.dt * k2))).eval();
        const auto k4 = (mi * (h2 * (y + grid.dt * k3))).eval();
        y += grid.dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      };
      rk4(result.final_state);
      rk4(result.propagator);
    }
    maybe_record(s + 1);
  }
  check_drift(result.final_state.norm(), config.tolerance, duration, "single-particle state");
  return result;
}

TwoBosonEvolutionResult evolve_two_boson(const RiceMeleParams& params,
                                         const PhaseSchedule& schedule,
                                         const DisorderRealization& disorder,
                                         const TwoBosonState& state0, double duration,
                                         const PropagatorConfig& config, int n_records,
                                         const TwoBosonState* fidelity_target) {
  params.validate();
  config.validate();
  check_normalized(state0.norm(), 1e-8, "state0");
  const int m = params.n_sites();
  if (state0.basis.n_sites() != m) throw config_error("state0 basis does not match the chain");

  const StepGrid grid = make_grid(duration, schedule.period(), config, n_records);

  TwoBosonEvolutionResult result;
  Eigen::MatrixXcd psi = unfold(state0);

  std::size_t next_record = 0;
  auto maybe_record = [&](int step) {
    if (next_record < grid.record_steps.size() && grid.record_steps[next_record] == step) {
      const double t = step * grid.dt;
      check_drift(psi.norm(), config.tolerance, t, "two-boson state");
      const TwoBosonState snapshot = fold(psi, state0.basis);
      result.trajectory.push_back(observe(snapshot, t, schedule.phase_at(t), fidelity_target));
      ++next_record;
    }
  };

  maybe_record(0);
  Eigen::MatrixXcd scratch(m, m);
  for (int s = 0; s < grid.n_steps; ++s) {
    const double t = s * grid.dt;
    if (config.method == PropagatorMethod::MidpointExponential) {
      // Non-interacting: exp(-i (h (+) h) dt) acts as u . Psi . u^T on the
      // symmetric amplitude matrix, with u the single-particle exponential.
      const Eigen::MatrixXd h =
          build_hamiltonian(params, schedule.phase_at(t + 0.5 * grid.dt), disorder);
      const Eigen::MatrixXcd u = step_unitary(h, grid.dt);
      scratch.noalias() = u * psi;
      psi.noalias() = scratch * u.transpose();
    } else {
      const Eigen::MatrixXd h0 = build_hamiltonian(params, schedule.phase_at(t), disorder);
      const Eigen::MatrixXd h1 =
          build_hamiltonian(params, schedule.phase_at(t + 0.5 * grid.dt), disorder);
      const Eigen::MatrixXd h2 = build_hamiltonian(params, schedule.phase_at(t + grid.dt), disorder);
      const complex<double> mi(0.0, -1.0);
      auto rhs = [&](const Eigen::MatrixXd& h, const Eigen::MatrixXcd& y) {
        return (mi * (h * y + y * h.transpose())).eval();
      };
      const Eigen::MatrixXcd k1 = rhs(h0, psi);
      const Eigen::MatrixXcd k2 = rhs(h1, psi + 0.5 * grid.dt * k1);
      const Eigen::MatrixXcd k3 = rhs(h1, psi + 0.5 * grid.dt * k2);
      const Eigen::MatrixXcd k4 = rhs(h2, psi + grid.dt * k3);
      psi += grid.dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    maybe_record(s + 1);
  }
  check_drift(psi.norm(), config.tolerance, duration, "two-boson state");
  result.final_state = fold(psi, state0.basis);
  return result;
}

TwoBosonState permanent_oracle(const Eigen::MatrixXcd& propagator, const TwoBosonState& state0) {
  const int m = state0.basis.n_sites();
  if (propagator.rows() != m || propagator.cols() != m) {
    throw config_error("propagator dimension does not match the basis");
  }
  const double unitarity =
      (propagator.adjoint() * propagator - Eigen::MatrixXcd::Identity(m, m)).cwiseAbs().maxCoeff();
  if (unitarity > 1e-8) {
    throw numerical_error("permanent oracle needs a unitary propagator, |U^dag U - 1|_max = " +
                          std::to_string(unitarity));
  }

  const SymBasis& basis = state0.basis;
  const int dim = basis.dim();
  std::vector<std::pair<int, int>> pairs(dim);
  for (int idx = 0; idx < dim; ++idx) pairs[idx] = basis.sites(idx);

  TwoBosonState out;
  out.basis = basis;
  out.amplitudes = Eigen::VectorXcd::Zero(dim);
  for (int to = 0; to < dim; ++to) {
    const auto [a, b] = pairs[to];
    complex<double> acc = 0.0;
    for (int from = 0; from < dim; ++from) {
      const complex<double> amp = state0.amplitudes(from);
      if (amp == 0.0) continue;
      const auto [j, j2] = pairs[from];
      const complex<double> perm = propagator(a - 1, j - 1) * propagator(b - 1, j2 - 1) +
                                   propagator(a - 1, j2 - 1) * propagator(b - 1, j - 1);
      double norm_factor = 1.0;
      if (a == b) norm_factor *= M_SQRT1_2;
      if (j == j2) norm_factor *= M_SQRT1_2;
      acc += amp * perm * norm_factor;
    }
    out.amplitudes(to) = acc;
  }
  return out;
}

RiceMeleParams quench(const RiceMeleParams& params, double new_phi0) {
  RiceMeleParams out = params;
  out.phi0 = new_phi0;
  return out;
}

}  // namespace pump
