#pragma once

#include <Eigen/Dense>

#include "pump/model.hpp"

namespace pump {

// Momentum-space analysis of the clean model. Bloch convention: the Bloch
// state carries phase e^{i k d l} per cell l with no intra-cell offset, giving
//   H(k) = [[ Delta,              -(J1 + J2 e^{-ikd}) ],
//           [ -(J1 + J2 e^{+ikd}), -Delta             ]]
// on the (odd site, even site) basis of one cell, with d = 2 site indices per
// cell and kd in (-pi, pi].

Eigen::Matrix2cd bloch_matrix(const RiceMeleParams& params, double phi, double kd);

struct BandSolution {
  double e1 = 0.0;  // lower band
  double e2 = 0.0;  // upper band
  Eigen::Vector2cd u1;
  Eigen::Vector2cd u2;
};

BandSolution solve_bands(const RiceMeleParams& params, double phi, double kd);

/// min over a dense k-grid (n_k points, containing kd = 0 and kd = pi) of
/// E2(k) - E1(k). For this two-band model the minimum always sits at kd = 0
/// or kd = pi, both of which the grid hits exactly.
double band_gap(const RiceMeleParams& params, double phi, int n_k = 2048);

struct ChernResult {
  int nu1 = 0;
  int nu2 = 0;
  int n_k = 0;
  int n_t = 0;
  double raw1 = 0.0;  // plaquette sums / 2 pi before rounding
  double raw2 = 0.0;
};

/// Band Chern numbers over the (k, phi) torus via gauge-invariant link
/// variables (plaquette field strengths). Orientation is fixed so that the
/// band pumped rightward by an increasing phi sweep carries +1; with the
/// default parameters that is the upper band: (nu1, nu2) = (-1, +1).
/// reverse_pump integrates over the phi -> -phi orientation instead.
/// Throws numerical_error if a raw value is further than 0.01 from an
/// integer (grid too coarse).
ChernResult chern_numbers(const RiceMeleParams& params, int n_k = 101, int n_t = 101,
                          bool reverse_pump = false);

/// One maximally localized Wannier state of `band` (1 = lower, 2 = upper)
/// centred on unit cell `cell` (1-based). Built on the L-point k-grid of the
/// finite chain with a parallel-transport gauge, closure phase distributed
/// evenly over the grid; overall phase fixed so the largest-magnitude
/// amplitude is real positive.
struct WannierState {
  int band = 0;
  int cell = 0;
  Eigen::VectorXcd amplitudes;  // over 2L sites, entry j-1 <-> site j
};

WannierState wannier_state(const RiceMeleParams& params, double phi, int band, int cell);

/// Center of mass sum_j j |amp_j|^2 with 1-based site index j.
double com_of_wannier(const WannierState& w);

/// COM of a two-particle Wannier pair: the mean of the two centers.
double com_of_wannier(const WannierState& a, const WannierState& b);

}  // namespace pump
