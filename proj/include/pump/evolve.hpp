#pragma once

#include <Eigen/Dense>
#include <vector>

#include "pump/fock2.hpp"
#include "pump/model.hpp"
#include "pump/schedule.hpp"

namespace pump {

enum class PropagatorMethod { MidpointExponential, RK4 };

/// Integrator settings. MidpointExponential steps with the exact unitary
/// exp(-i H(t_mid) dt) (2nd-order Magnus), so the norm is conserved to the
/// accuracy of the Hermitian eigensolver; RK4 is kept as a cross-check. The
/// time step is duration-independent: dt = period / steps_per_cycle.
struct PropagatorConfig {
  int steps_per_cycle = 20000;
  PropagatorMethod method = PropagatorMethod::MidpointExponential;
  double tolerance = 1e-8;  // norm-drift bound

  void validate() const;  // steps_per_cycle >= 1000, tolerance > 0
};

struct SingleEvolutionResult {
  Eigen::VectorXcd final_state;
  std::vector<ObservableRecord> trajectory;
  Eigen::MatrixXcd propagator;  // accumulated M x M unitary
};

struct TwoBosonEvolutionResult {
  TwoBosonState final_state;
  std::vector<ObservableRecord> trajectory;
};

/// Integrates i dpsi/dt = H(phi(t)) psi over stage-local time [0, duration]
/// and accumulates the full propagator. Records n_records observables at
/// evenly spaced times (snapped to step boundaries), density normalized to
/// one particle and the two-boson columns NaN. Throws numerical_error when
/// the norm drifts beyond config.tolerance.
SingleEvolutionResult evolve_single(const RiceMeleParams& params, const PhaseSchedule& schedule,
                                    const DisorderRealization& disorder,
                                    const Eigen::VectorXcd& psi0, double duration,
                                    const PropagatorConfig& config, int n_records = 0);

/// Same integrator lifted to the symmetric two-boson subspace: the state is
/// kept as the symmetric first-quantized amplitude matrix and each step
/// applies u . Psi . u^T with u the single-particle step unitary (the exact
/// exponential of the non-interacting two-particle Hamiltonian).
TwoBosonEvolutionResult evolve_two_boson(const RiceMeleParams& params,
                                         const PhaseSchedule& schedule,
                                         const DisorderRealization& disorder,
                                         const TwoBosonState& state0, double duration,
                                         const PropagatorConfig& config, int n_records = 0,
                                         const TwoBosonState* fidelity_target = nullptr);

/// Independent reconstruction of non-interacting two-boson output amplitudes
/// from 2x2 permanents of single-particle propagator submatrices:
///   out_{a<=b} = sum_{j<=j2} A_{j,j2} (U_aj U_bj2 + U_aj2 U_bj)
///                / sqrt((1 + delta_ab)(1 + delta_{j,j2})).
/// Throws numerical_error if U is not unitary to 1e-8.
TwoBosonState permanent_oracle(const Eigen::MatrixXcd& propagator, const TwoBosonState& state0);

/// Sudden quench: returns params with phi0 replaced; any state amplitudes are
/// carried over unchanged by the caller.
RiceMeleParams quench(const RiceMeleParams& params, double new_phi0);

}  // namespace pump
