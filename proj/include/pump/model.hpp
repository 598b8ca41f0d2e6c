#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace pump {

/// Static parameters of the modulated two-band chain. The chain has L unit
/// cells and M = 2L sites; site indices are 1-based throughout the public API
/// (site 2l-1 is the left/odd member of cell l, site 2l the right/even one).
///
/// Instantaneous couplings at modulation phase phi:
///   J1 = J + delta0 sin(phi)   intra-cell hopping
///   J2 = J - delta0 sin(phi)   inter-cell hopping
///   Delta = Delta0 cos(phi)    staggered on-site offset (+Delta on odd sites)
struct RiceMeleParams {
  double J = 1.0;
  double delta0 = 1.0;
  double Delta0 = 20.0;
  int L = 9;
  double phi0 = 0.0;

  int n_sites() const { return 2 * L; }

  /// Throws config_error unless J > 0, L >= 2 and both modulation amplitudes
  /// are nonzero (a zero amplitude closes the gap somewhere in the cycle).
  void validate() const;
};

struct Couplings {
  double J1;
  double J2;
  double Delta;
};

Couplings couplings_at(const RiceMeleParams& params, double phi);

enum class DisorderKind { None, Uniform, Normal };

/// On-site disorder ensemble. Uniform draws energies eta * r_j with r_j
/// i.i.d. uniform on [-1, 1]; Normal draws from N(mu, sigma^2). The unit
/// variates depend only on (base_seed, sample_index), so sweeping eta or
/// sigma rescales one fixed set of draws per sample.
struct DisorderSpec {
  DisorderKind kind = DisorderKind::None;
  double eta = 0.0;
  double mu = 0.0;
  double sigma = 0.0;
  std::uint64_t base_seed = 0;
};

/// One frozen vector of on-site energies. Static over a whole multi-stage
/// protocol run of the sample it belongs to.
struct DisorderRealization {
  std::vector<double> energies;
  std::uint64_t seed = 0;

  static DisorderRealization clean(int n_sites) { return {std::vector<double>(n_sites, 0.0), 0}; }
};

/// Deterministic function of (spec.base_seed, sample_index).
DisorderRealization sample_disorder(const DisorderSpec& spec, int n_sites, int sample_index);

/// Real-space single-particle Hamiltonian at modulation phase phi, open
/// boundary conditions. The matrix is real symmetric (all couplings of this
/// model are real); rows/columns are 0-based site indices.
Eigen::MatrixXd build_hamiltonian(const RiceMeleParams& params, double phi,
                                  const DisorderRealization& disorder);

}  // namespace pump
