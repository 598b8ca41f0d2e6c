#include "pump/model.hpp"

#include <cmath>
#include <string>

#include "pump/errors.hpp"
#include "pump/rng.hpp"

namespace pump {

void RiceMeleParams::validate() const {
  if (!(J > 0.0)) throw config_error("J must be positive, got " + std::to_string(J));
  if (L < 2) throw config_error("L must be at least 2, got " + std::to_string(L));
  if (delta0 == 0.0) throw config_error("delta0 must be nonzero (gap closes at phi = pi/2)");
  if (Delta0 == 0.0) throw config_error("Delta0 must be nonzero (gap closes at phi = 0)");
}

Couplings couplings_at(const RiceMeleParams& params, double phi) {
  const double s = std::sin(phi);
  return {params.J + params.delta0 * s, params.J - params.delta0 * s,
          params.Delta0 * std::cos(phi)};
}

DisorderRealization sample_disorder(const DisorderSpec& spec, int n_sites, int sample_index) {
  const std::uint64_t seed = rng::stream_seed(spec.base_seed, static_cast<std::uint64_t>(sample_index));
  DisorderRealization out;
  out.seed = seed;
  out.energies.assign(n_sites, 0.0);
  if (spec.kind == DisorderKind::None) return out;

  // Unit variates first, then scale: sweeping the amplitude rescales one
  // fixed realization per (base_seed, sample_index).
  rng::Stream stream(seed);
  switch (spec.kind) {
    case DisorderKind::Uniform:
      for (double& e : out.energies) e = spec.eta * stream.uniform_sym();
      break;
    case DisorderKind::Normal:
      for (double& e : out.energies) e = spec.mu + spec.sigma * stream.normal();
      break;
    case DisorderKind::None:
      break;
  }
  return out;
}

Eigen::MatrixXd build_hamiltonian(const RiceMeleParams& params, double phi,
                                  const DisorderRealization& disorder) {
  const int m = params.n_sites();
  if (static_cast<int>(disorder.energies.size()) != m) {
    throw config_error("disorder realization has " + std::to_string(disorder.energies.size()) +
                       " sites, chain has " + std::to_string(m));
  }
  const Couplings c = couplings_at(params, phi);

  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m, m);
  for (int j = 0; j < m; ++j) {
    // 0-based even j is the odd 1-based site carrying +Delta
    h(j, j) = ((j % 2 == 0) ? c.Delta : -c.Delta) + disorder.energies[j];
  }
  for (int j = 0; j + 1 < m; ++j) {
    const double hop = (j % 2 == 0) ? -c.J1 : -c.J2;  // intra-cell then inter-cell
    h(j, j + 1) = hop;
    h(j + 1, j) = hop;
  }
  return h;
}

}  // namespace pump
