#pragma once

#include <Eigen/Dense>
#include <utility>

namespace pump {

/// Symmetric two-boson basis over M sites: ordered pairs (j <= j2) of 1-based
/// site indices, lexicographic, so dim = M (M + 1) / 2. The basis state for
/// (j, j2) is c_j^dag c_j2^dag |0> / sqrt(1 + delta_{j,j2}).
class SymBasis {
 public:
  SymBasis() = default;
  explicit SymBasis(int n_sites);

  int n_sites() const { return n_sites_; }
  int dim() const { return n_sites_ * (n_sites_ + 1) / 2; }

  /// Basis index of the (unordered) site pair {j, j2}; sites are 1-based.
  int index(int j, int j2) const;

  /// Inverse of index(): the ordered pair (j <= j2).
  std::pair<int, int> sites(int idx) const;

  bool operator==(const SymBasis& other) const { return n_sites_ == other.n_sites_; }

 private:
  int n_sites_ = 0;
};

struct TwoBosonState {
  SymBasis basis;
  Eigen::VectorXcd amplitudes;

  double norm() const { return amplitudes.norm(); }
};

/// |j, j2> basis state (1-based sites). Throws config_error when out of range.
TwoBosonState make_state(const SymBasis& basis, int j, int j2);

/// Per-site occupation <n_j>; entry j-1 <-> site j. Sums to 2.
Eigen::VectorXd density(const TwoBosonState& state);

/// COM position <X> with X = (1/N) sum_j j n_j, N = 2, 1-based sites.
double com(const TwoBosonState& state);

/// Two-particle correlation Gamma_{q,r} = <c_q^dag c_r^dag c_r c_q>,
/// an M x M symmetric non-negative matrix with sum_{q,r} Gamma = 2.
Eigen::MatrixXd correlation(const TwoBosonState& state);

/// max_q Gamma_{q,q}.
double gamma_max(const Eigen::MatrixXd& gamma);

/// Nity = (sum_q Gamma_qq)^2 - sum_{q,r} Gamma_qr^2: 2 for an ideal NOON
/// pair, -2 for two bosons on distinct sites, 0 for a double occupancy.
double noonity(const Eigen::MatrixXd& gamma);

/// Absolute overlap |<target|state>| in [0, 1]. Throws config_error on basis
/// mismatch.
double fidelity(const TwoBosonState& state, const TwoBosonState& target);

/// One sampled time point of a trajectory. Two-boson observables are NaN in
/// single-particle runs, fidelity is NaN when no target state is tracked.
struct ObservableRecord {
  double t = 0.0;
  double phi = 0.0;
  double com = 0.0;
  double gamma_max = 0.0;
  double nity = 0.0;
  double fidelity = 0.0;
  Eigen::VectorXd density;
};

ObservableRecord observe(const TwoBosonState& state, double t, double phi,
                         const TwoBosonState* fidelity_target = nullptr);

/// (com_end - com_start) / d, the COM shift in units of the cell length.
double com_shift(const ObservableRecord& start, const ObservableRecord& end, double d = 2.0);

}  // namespace pump
