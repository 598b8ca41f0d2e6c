#include "pump/fock2.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "pump/errors.hpp"

namespace pump {

SymBasis::SymBasis(int n_sites) : n_sites_(n_sites) {
  if (n_sites < 1) throw config_error("basis needs at least one site");
}

int SymBasis::index(int j, int j2) const {
  if (j < 1 || j > n_sites_ || j2 < 1 || j2 > n_sites_) {
    throw config_error("site index out of range: (" + std::to_string(j) + ", " +
                       std::to_string(j2) + ") on " + std::to_string(n_sites_) + " sites");
  }
  const int a = std::min(j, j2) - 1;
  const int b = std::max(j, j2) - 1;
  return a * n_sites_ - a * (a - 1) / 2 + (b - a);
}

std::pair<int, int> SymBasis::sites(int idx) const {
  int a = 0;
  int offset = 0;
  while (idx - offset >= n_sites_ - a) {
    offset += n_sites_ - a;
    ++a;
  }
  return {a + 1, a + 1 + (idx - offset)};
}

TwoBosonState make_state(const SymBasis& basis, int j, int j2) {
  TwoBosonState state;
  state.basis = basis;
  state.amplitudes = Eigen::VectorXcd::Zero(basis.dim());
  state.amplitudes(basis.index(j, j2)) = 1.0;
  return state;
}

Eigen::VectorXd density(const TwoBosonState& state) {
  const int m = state.basis.n_sites();
  Eigen::VectorXd n = Eigen::VectorXd::Zero(m);
  for (int idx = 0; idx < state.amplitudes.size(); ++idx) {
    const double w = std::norm(state.amplitudes(idx));
    if (w == 0.0) continue;
    const auto [j, j2] = state.basis.sites(idx);
    n(j - 1) += w;
    n(j2 - 1) += w;
  }
  return n;
}

double com(const TwoBosonState& state) {
  const Eigen::VectorXd n = density(state);
  double x = 0.0;
  for (int j = 0; j < n.size(); ++j) x += (j + 1) * n(j);
  return x / 2.0;
}

Eigen::MatrixXd correlation(const TwoBosonState& state) {
  // c_r c_q maps the pair state to the vacuum: Gamma_{q,r} = |A_{q,r}|^2 for
  // q != r and Gamma_{q,q} = 2 |A_{q,q}|^2.
  const int m = state.basis.n_sites();
  Eigen::MatrixXd gamma = Eigen::MatrixXd::Zero(m, m);
  for (int idx = 0; idx < state.amplitudes.size(); ++idx) {
    const double w = std::norm(state.amplitudes(idx));
    if (w == 0.0) continue;
    const auto [j, j2] = state.basis.sites(idx);
    if (j == j2) {
      gamma(j - 1, j - 1) = 2.0 * w;
    } else {
      gamma(j - 1, j2 - 1) = w;
      gamma(j2 - 1, j - 1) = w;
    }
  }
  return gamma;
}

double gamma_max(const Eigen::MatrixXd& gamma) { return gamma.diagonal().maxCoeff(); }

double noonity(const Eigen::MatrixXd& gamma) {
  const double diag_sum = gamma.trace();
  return diag_sum * diag_sum - gamma.squaredNorm();
}

double fidelity(const TwoBosonState& state, const TwoBosonState& target) {
  if (!(state.basis == target.basis)) throw config_error("fidelity: basis mismatch");
  return std::abs(target.amplitudes.dot(state.amplitudes));
}

ObservableRecord observe(const TwoBosonState& state, double t, double phi,
                         const TwoBosonState* fidelity_target) {
  ObservableRecord rec;
  rec.t = t;
  rec.phi = phi;
  rec.density = density(state);
  double x = 0.0;
  for (int j = 0; j < rec.density.size(); ++j) x += (j + 1) * rec.density(j);
  rec.com = x / 2.0;
  const Eigen::MatrixXd gamma = correlation(state);
  rec.gamma_max = gamma_max(gamma);
  rec.nity = noonity(gamma);
  rec.fidelity = fidelity_target ? fidelity(state, *fidelity_target)
                                 : std::numeric_limits<double>::quiet_NaN();
  return rec;
}

double com_shift(const ObservableRecord& start, const ObservableRecord& end, double d) {
  return (end.com - start.com) / d;
}

}  // namespace pump
