#pragma once

#include <memory>
#include <vector>

#include "pump/model.hpp"

namespace pump {

enum class ScheduleKind { Linear, GapAdaptive };

/// Declarative form of a phase schedule, as it appears in configs.
/// rate is omega (rad/time) for Linear and epsilon (1/time) for GapAdaptive.
struct ScheduleSpec {
  ScheduleKind kind = ScheduleKind::Linear;
  double rate = 0.08;
};

/// The modulation phase phi(t) driving one pump stage, with t = 0 at the
/// stage start and phi(0) = phi0.
///
/// Linear:      phi(t) = omega t + phi0, period 2 pi / omega.
/// GapAdaptive: dphi/dt = epsilon * G(phi) with G the clean Bloch band gap,
///              so the sweep slows down where the gap is small. phi(t) is
///              precomputed by fixed-step RK4 over one period and extended
///              by phi(t + T_p) = phi(t) + 2 pi (the ODE is autonomous).
class PhaseSchedule {
 public:
  static PhaseSchedule linear(double omega, double phi0);
  static PhaseSchedule gap_adaptive(double epsilon, double phi0, const RiceMeleParams& params);
  static PhaseSchedule make(const ScheduleSpec& spec, double phi0, const RiceMeleParams& params);

  /// Strictly increasing in t; t must be >= 0.
  double phase_at(double t) const;

  /// First time with phi(T_p) = phi0 + 2 pi.
  double period() const { return period_; }

  /// First time with phi(t) = phi0 + dphi (dphi >= 0).
  double time_to_advance(double dphi) const;

  double phi0() const { return phi0_; }
  ScheduleKind kind() const { return kind_; }
  double rate() const { return rate_; }

 private:
  PhaseSchedule() = default;

  ScheduleKind kind_ = ScheduleKind::Linear;
  double rate_ = 0.0;
  double phi0_ = 0.0;
  double period_ = 0.0;

  // GapAdaptive only: phi sampled on a uniform time grid over one period,
  // plus the phase velocity at each node for Hermite interpolation.
  double dt_ = 0.0;
  std::vector<double> phi_nodes_;
  std::vector<double> dphi_nodes_;

  double interp_phase(double t) const;
};

}  // namespace pump
