#include "solcoll/analysis/reduced_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "solcoll/core/error.hpp"
#include "solcoll/core/units.hpp"

namespace solcoll::analysis {

ReducedModelCalibration calibrate_reduced_model(const gpe::Trajectory& bounce, double d0,
                                                double v0, int n_sol, double u0) {
  const std::size_t i = bounce.closest_approach();
  if (i >= bounce.size())
    throw InvalidArgument("calibrate_reduced_model: trajectory has no resolved samples");
  if (bounce.any_unresolved())
    throw InvalidArgument("calibrate_reduced_model: calibration run merged; a bounce is required");
  if (!(v0 > 0)) throw InvalidArgument("calibrate_reduced_model: v0 must be positive (approach)");
  ReducedModelCalibration c;
  c.xi = soliton_width(n_sol, u0);
  c.d0 = d0;
  c.v0 = v0;
  c.d_min = bounce.d[i];
  if (i + 1 >= bounce.size())
    throw InvalidArgument("calibrate_reduced_model: closest approach at the end of the run");
  const double gap = std::exp(-c.d_min / c.xi) - std::exp(-d0 / c.xi);
  if (!(gap > 0)) throw NumericalError("calibrate_reduced_model: closest approach not below d0");
  const double ddot0 = 2.0 * v0;
  c.amplitude = 0.5 * ddot0 * ddot0 / (c.xi * gap);
  c.source = "gpe phi=pi bounce";
  return c;
}

double reduced_acceleration(double d, double phi, double xi, double amplitude) {
  // Odd continuation through d = 0 so merging pairs pass through.
  const double s = d < 0 ? -1.0 : 1.0;
  return -s * amplitude * std::exp(-std::abs(d) / xi) * std::cos(phi);
}

ReducedTrajectory effective_separation_ode(double d0, double v0, double phi0, int n_sol, double u0,
                                           double t_final, double dt,
                                           const ReducedModelCalibration& cal) {
  if (!cal.valid())
    throw InvalidArgument("effective_separation_ode: amplitude is uncalibrated; run the GPE phi = pi "
                          "calibration first");
  const double xi = soliton_width(n_sol, u0);
  if (!(d0 > 2.0 * xi)) {
    std::ostringstream msg;
    msg << "effective_separation_ode: d0 = " << d0 << " must exceed 2 xi = " << 2 * xi;
    throw InvalidArgument(msg.str());
  }
  if (!(dt > 0) || t_final < 0) throw InvalidArgument("effective_separation_ode: bad time axis");
  const auto steps = static_cast<std::size_t>(std::ceil(t_final / dt - 1e-9));
  ReducedTrajectory tr;
  tr.calibration = cal;
  double d = d0, v = -2.0 * v0, t = 0.0;
  auto acc = [&](double x) { return reduced_acceleration(x, phi0, xi, cal.amplitude); };
  auto push = [&] {
    tr.times.push_back(t);
    tr.d.push_back(d);
    tr.v.push_back(v);
    tr.phi.push_back(phi0);
  };
  push();
  for (std::size_t k = 0; k < steps; ++k) {
    const double h = std::min(dt, t_final - t);
    const double k1d = v, k1v = acc(d);
    const double k2d = v + 0.5 * h * k1v, k2v = acc(d + 0.5 * h * k1d);
    const double k3d = v + 0.5 * h * k2v, k3v = acc(d + 0.5 * h * k2d);
    const double k4d = v + h * k3v, k4v = acc(d + h * k3d);
    d += h / 6.0 * (k1d + 2 * k2d + 2 * k3d + k4d);
    v += h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
    t = k + 1 == steps ? t_final : t + h;
    push();
  }
  return tr;
}

double collision_time(double d_ini, double v_ini) {
  if (v_ini == 0.0) throw InvalidArgument("collision_time: v_ini = 0, no forced collision");
  return std::abs(d_ini / (2.0 * v_ini));
}

CollisionRegime classify_collision(double t_coll, double t_threshold) {
  return t_coll < t_threshold ? CollisionRegime::PreFragmentation
                              : CollisionRegime::PostFragmentation;
}

const char* regime_name(CollisionRegime r) {
  return r == CollisionRegime::PreFragmentation ? "pre-fragmentation" : "post-fragmentation";
}

double max_relative_deviation_before_bounce(const ReducedTrajectory& ode,
                                            const gpe::Trajectory& gpe) {
  const std::size_t stop = gpe.closest_approach();
  if (stop >= gpe.size()) throw InvalidArgument("max_relative_deviation_before_bounce: no resolved GPE data");
  if (ode.times.size() < 2) throw InvalidArgument("max_relative_deviation_before_bounce: empty model");
  double worst = 0.0;
  for (std::size_t i = 0; i < stop; ++i) {
    if (!gpe.resolved[i]) continue;
    const double t = gpe.times[i];
    if (t > ode.times.back()) break;
    const auto it = std::upper_bound(ode.times.begin(), ode.times.end(), t);
    const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(it - ode.times.begin()),
                                                ode.times.size() - 1);
    const std::size_t j = k == 0 ? 0 : k - 1;
    const double w = k == j ? 0.0 : (t - ode.times[j]) / (ode.times[k] - ode.times[j]);
    const double d_ode = (1 - w) * ode.d[j] + w * ode.d[k];
    worst = std::max(worst, std::abs(d_ode - gpe.d[i]) / gpe.d[i]);
  }
  return worst;
}

}  // namespace solcoll::analysis
