#include "pump/bloch.hpp"

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "pump/errors.hpp"

namespace pump {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;
using std::complex;

Eigen::Vector2cd fix_leading_phase(Eigen::Vector2cd v) {
  const int lead = std::norm(v(0)) >= std::norm(v(1)) ? 0 : 1;
  const complex<double> a = v(lead);
  if (std::abs(a) > 0.0) v *= std::conj(a) / std::abs(a);
  return v;
}

}  // namespace

Eigen::Matrix2cd bloch_matrix(const RiceMeleParams& params, double phi, double kd) {
  const Couplings c = couplings_at(params, phi);
  const complex<double> h = c.J1 + c.J2 * std::exp(complex<double>(0.0, -kd));
  Eigen::Matrix2cd m;
  m << c.Delta, -h, -std::conj(h), -c.Delta;
  return m;
}

BandSolution solve_bands(const RiceMeleParams& params, double phi, double kd) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(bloch_matrix(params, phi, kd));
  BandSolution out;
  out.e1 = es.eigenvalues()(0);
  out.e2 = es.eigenvalues()(1);
  out.u1 = es.eigenvectors().col(0);
  out.u2 = es.eigenvectors().col(1);
  return out;
}

double band_gap(const RiceMeleParams& params, double phi, int n_k) {
  const Couplings c = couplings_at(params, phi);
  double min_e2 = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_k; ++i) {
    const double kd = -M_PI + kTwoPi * (i + 1) / n_k;  // contains kd = 0 and kd = pi
    const double habs2 = c.J1 * c.J1 + c.J2 * c.J2 + 2.0 * c.J1 * c.J2 * std::cos(kd);
    min_e2 = std::min(min_e2, c.Delta * c.Delta + habs2);
  }
  return 2.0 * std::sqrt(min_e2);
}

ChernResult chern_numbers(const RiceMeleParams& params, int n_k, int n_t, bool reverse_pump) {
  params.validate();
  if (n_k < 16 || n_t < 16) {
    throw config_error("chern grid must be at least 16 x 16, got " + std::to_string(n_k) + " x " +
                       std::to_string(n_t));
  }

  const double dir = reverse_pump ? -1.0 : 1.0;
  std::vector<Eigen::Vector2cd> u[2];
  u[0].resize(static_cast<std::size_t>(n_k) * n_t);
  u[1].resize(static_cast<std::size_t>(n_k) * n_t);
  for (int j = 0; j < n_t; ++j) {
    const double phi = params.phi0 + dir * kTwoPi * j / n_t;
    for (int i = 0; i < n_k; ++i) {
      const double kd = -M_PI + kTwoPi * (i + 1) / n_k;
      const BandSolution bands = solve_bands(params, phi, kd);
      u[0][static_cast<std::size_t>(j) * n_k + i] = bands.u1;
      u[1][static_cast<std::size_t>(j) * n_k + i] = bands.u2;
    }
  }

  ChernResult out;
  out.n_k = n_k;
  out.n_t = n_t;
  double raw[2];
  for (int band = 0; band < 2; ++band) {
    const auto& v = u[band];
    auto at = [&](int i, int j) -> const Eigen::Vector2cd& {
      return v[static_cast<std::size_t>((j + n_t) % n_t) * n_k + (i + n_k) % n_k];
    };
    // Plaquette field strength of the link variables, oriented (k, phi). With
    // the Bloch convention fixed in bloch_matrix() this orientation gives the
    // transport quantization Delta P = d * nu: the band whose Wannier centers
    // flow rightward under an increasing phi sweep carries nu = +1.
    double total = 0.0;
    for (int j = 0; j < n_t; ++j) {
      for (int i = 0; i < n_k; ++i) {
        const complex<double> link_k0 = at(i, j).dot(at(i + 1, j));
        const complex<double> link_k1 = at(i, j + 1).dot(at(i + 1, j + 1));
        const complex<double> link_t0 = at(i, j).dot(at(i, j + 1));
        const complex<double> link_t1 = at(i + 1, j).dot(at(i + 1, j + 1));
        const complex<double> plaq = link_k0 * link_t1 * std::conj(link_k1 * link_t0);
        if (std::abs(plaq) == 0.0) throw numerical_error("degenerate link in chern grid");
        total += std::arg(plaq);
      }
    }
    raw[band] = total / kTwoPi;
  }
  out.raw1 = raw[0];
  out.raw2 = raw[1];
  out.nu1 = static_cast<int>(std::llround(raw[0]));
  out.nu2 = static_cast<int>(std::llround(raw[1]));
  if (std::abs(raw[0] - out.nu1) > 0.01 || std::abs(raw[1] - out.nu2) > 0.01) {
    throw numerical_error("chern integral did not converge to an integer: raw = (" +
                          std::to_string(raw[0]) + ", " + std::to_string(raw[1]) +
                          "); refine the grid");
  }
  return out;
}

WannierState wannier_state(const RiceMeleParams& params, double phi, int band, int cell) {
  params.validate();
  if (band != 1 && band != 2) throw config_error("band index must be 1 or 2");
  if (cell < 1 || cell > params.L) throw config_error("cell index out of range");

  const int n_cells = params.L;

  // Eigenvectors on the L allowed momenta, parallel-transport gauge.
  std::vector<Eigen::Vector2cd> v(n_cells);
  for (int m = 0; m < n_cells; ++m) {
    const double kd = kTwoPi * m / n_cells;
    const BandSolution bands = solve_bands(params, phi, kd);
    v[m] = band == 1 ? bands.u1 : bands.u2;
  }
  v[0] = fix_leading_phase(v[0]);
  for (int m = 1; m < n_cells; ++m) {
    const complex<double> link = v[m - 1].dot(v[m]);
    v[m] *= std::conj(link) / std::abs(link);
  }
  // Spread the closure (Berry) phase evenly over the grid: with every link
  // carrying the same phase the discrete Wannier spread is minimal.
  const double closure = std::arg(v[n_cells - 1].dot(v[0]));
  for (int m = 0; m < n_cells; ++m) {
    v[m] *= std::exp(complex<double>(0.0, closure * m / n_cells));
  }

  WannierState w;
  w.band = band;
  w.cell = cell;
  w.amplitudes = Eigen::VectorXcd::Zero(2 * n_cells);
  for (int l = 0; l < n_cells; ++l) {
    complex<double> a0 = 0.0, a1 = 0.0;
    for (int m = 0; m < n_cells; ++m) {
      const complex<double> bloch_phase =
          std::exp(complex<double>(0.0, kTwoPi * m * (l - (cell - 1)) / n_cells));
      a0 += bloch_phase * v[m](0);
      a1 += bloch_phase * v[m](1);
    }
    w.amplitudes(2 * l) = a0 / static_cast<double>(n_cells);
    w.amplitudes(2 * l + 1) = a1 / static_cast<double>(n_cells);
  }

  // Overall phase: largest amplitude real positive.
  int lead = 0;
  w.amplitudes.cwiseAbs().maxCoeff(&lead);
  const complex<double> a = w.amplitudes(lead);
  w.amplitudes *= std::conj(a) / std::abs(a);
  return w;
}

double com_of_wannier(const WannierState& w) {
  double out = 0.0;
  for (int j = 0; j < w.amplitudes.size(); ++j) {
    out += (j + 1) * std::norm(w.amplitudes(j));
  }
  return out;
}

double com_of_wannier(const WannierState& a, const WannierState& b) {
  return 0.5 * (com_of_wannier(a) + com_of_wannier(b));
}

}  // namespace pump
