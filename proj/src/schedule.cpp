#include "pump/schedule.hpp"

#include <cmath>
#include <string>

#include "pump/bloch.hpp"
#include "pump/errors.hpp"

namespace pump {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;
constexpr int kGapTableSize = 4096;
constexpr int kStepsPerTurn = 10000;  // RK4 resolution: phase advance per step <= 2pi / this

// Periodic cubic (Catmull-Rom) interpolation of the clean gap over one
// 2pi period in phi. G is smooth and strictly positive for valid params.
class GapTable {
 public:
  explicit GapTable(const RiceMeleParams& params) : values_(kGapTableSize) {
    for (int i = 0; i < kGapTableSize; ++i) {
      values_[i] = band_gap(params, kTwoPi * i / kGapTableSize);
    }
  }

  double operator()(double phi) const {
    double w = std::fmod(phi, kTwoPi) / kTwoPi * kGapTableSize;
    if (w < 0.0) w += kGapTableSize;
    int i1 = static_cast<int>(w);
    if (i1 >= kGapTableSize) i1 = 0;
    const double s = w - i1;
    const int n = kGapTableSize;
    const double p0 = values_[(i1 + n - 1) % n];
    const double p1 = values_[i1];
    const double p2 = values_[(i1 + 1) % n];
    const double p3 = values_[(i1 + 2) % n];
    return 0.5 * (2.0 * p1 + (-p0 + p2) * s + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * s * s +
                  (-p0 + 3.0 * p1 - 3.0 * p2 + p3) * s * s * s);
  }

  double max_value() const {
    double m = values_[0];
    for (double v : values_) m = std::max(m, v);
    return m;
  }

 private:
  std::vector<double> values_;
};

double hermite(double phi_a, double d_a, double phi_b, double d_b, double h, double s) {
  const double s2 = s * s, s3 = s2 * s;
  return (2.0 * s3 - 3.0 * s2 + 1.0) * phi_a + (s3 - 2.0 * s2 + s) * h * d_a +
         (-2.0 * s3 + 3.0 * s2) * phi_b + (s3 - s2) * h * d_b;
}

}  // namespace

PhaseSchedule PhaseSchedule::linear(double omega, double phi0) {
  if (!(omega > 0.0)) throw config_error("linear schedule needs omega > 0, got " + std::to_string(omega));
  PhaseSchedule s;
  s.kind_ = ScheduleKind::Linear;
  s.rate_ = omega;
  s.phi0_ = phi0;
  s.period_ = kTwoPi / omega;
  return s;
}

PhaseSchedule PhaseSchedule::gap_adaptive(double epsilon, double phi0,
                                          const RiceMeleParams& params) {
  if (!(epsilon > 0.0)) {
    throw config_error("gap-adaptive schedule needs epsilon > 0, got " + std::to_string(epsilon));
  }
  params.validate();

  PhaseSchedule s;
  s.kind_ = ScheduleKind::GapAdaptive;
  s.rate_ = epsilon;
  s.phi0_ = phi0;

  const GapTable gap(params);
  auto velocity = [&](double phi) { return epsilon * gap(phi); };

  // Fixed time step bounded by the fastest phase advance, so every step
  // moves phi by at most 2pi / kStepsPerTurn.
  const double dt = kTwoPi / (kStepsPerTurn * epsilon * gap.max_value());
  const double phi_end = phi0 + kTwoPi;

  s.dt_ = dt;
  s.phi_nodes_.clear();
  s.dphi_nodes_.clear();
  double phi = phi0;
  s.phi_nodes_.push_back(phi);
  s.dphi_nodes_.push_back(velocity(phi));
  while (phi < phi_end) {
    const double k1 = velocity(phi);
    const double k2 = velocity(phi + 0.5 * dt * k1);
    const double k3 = velocity(phi + 0.5 * dt * k2);
    const double k4 = velocity(phi + dt * k3);
    phi += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    s.phi_nodes_.push_back(phi);
    s.dphi_nodes_.push_back(velocity(phi));
  }

  // Period: solve phi(T_p) = phi0 + 2pi on the last Hermite segment.
  const std::size_t i = s.phi_nodes_.size() - 2;
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double value = hermite(s.phi_nodes_[i], s.dphi_nodes_[i], s.phi_nodes_[i + 1],
                                 s.dphi_nodes_[i + 1], dt, mid);
    (value < phi_end ? lo : hi) = mid;
  }
  s.period_ = (static_cast<double>(i) + 0.5 * (lo + hi)) * dt;
  return s;
}

PhaseSchedule PhaseSchedule::make(const ScheduleSpec& spec, double phi0,
                                  const RiceMeleParams& params) {
  return spec.kind == ScheduleKind::Linear ? linear(spec.rate, phi0)
                                           : gap_adaptive(spec.rate, phi0, params);
}

double PhaseSchedule::interp_phase(double t) const {
  const std::size_t last = phi_nodes_.size() - 1;
  double w = t / dt_;
  if (w < 0.0) w = 0.0;
  std::size_t i = static_cast<std::size_t>(w);
  if (i >= last) i = last - 1;
  return hermite(phi_nodes_[i], dphi_nodes_[i], phi_nodes_[i + 1], dphi_nodes_[i + 1], dt_,
                 w - static_cast<double>(i));
}

double PhaseSchedule::phase_at(double t) const {
  if (t < 0.0) {
    if (t < -1e-9) throw config_error("phase_at needs t >= 0, got " + std::to_string(t));
    t = 0.0;
  }
  if (kind_ == ScheduleKind::Linear) return rate_ * t + phi0_;

  // phi(t + T_p) = phi(t) + 2pi: reduce into the tabulated period.
  double turns = std::floor(t / period_);
  double local = t - turns * period_;
  if (local >= period_) {  // guard against floating roundoff at the seam
    local -= period_;
    turns += 1.0;
  }
  return interp_phase(local) + kTwoPi * turns;
}

double PhaseSchedule::time_to_advance(double dphi) const {
  if (dphi < 0.0) throw config_error("time_to_advance needs dphi >= 0");
  if (kind_ == ScheduleKind::Linear) return dphi / rate_;

  const double turns = std::floor(dphi / kTwoPi);
  const double rem = dphi - kTwoPi * turns;
  if (rem == 0.0) return turns * period_;

  // phi is strictly increasing: bisect phase_at over one period.
  const double target = phi0_ + rem;
  double lo = 0.0, hi = period_;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (interp_phase(mid) < target ? lo : hi) = mid;
  }
  return turns * period_ + 0.5 * (lo + hi);
}

}  // namespace pump
