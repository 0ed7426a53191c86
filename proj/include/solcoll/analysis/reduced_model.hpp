#pragma once

#include <string>
#include <vector>

#include "solcoll/gpe/tracking.hpp"

namespace solcoll::analysis {

// Amplitude of the overlap force in d'' = -A e^{-d/xi} cos(phi).
struct ReducedModelCalibration {
  double amplitude = 0.0;
  double xi = 0.0;
  double d0 = 0.0;
  double v0 = 0.0;
  double d_min = 0.0;
  std::string source;
  bool valid() const noexcept { return amplitude > 0.0 && xi > 0.0; }
};

// Fits A so that the phi = pi reduced model reaches the GPE closest approach.
// Energy of d'' = A e^{-d/xi}: 1/2 d'^2 + A xi e^{-d/xi} is constant, which
// pins A from (d0, d'(0) = -2 v0, d_min).
ReducedModelCalibration calibrate_reduced_model(const gpe::Trajectory& bounce, double d0,
                                                double v0, int n_sol, double u0);

struct ReducedTrajectory {
  std::vector<double> times;
  std::vector<double> d;
  std::vector<double> v;    // d'(t)
  std::vector<double> phi;
  ReducedModelCalibration calibration;
};

// RK4 integration from d(0) = d0, d'(0) = -2 v0 (v0 > 0 means approach).
// The phase stays at phi0 for equal solitons. Requires d0 > 2 xi and a valid
// calibration; no fallback amplitude exists.
ReducedTrajectory effective_separation_ode(double d0, double v0, double phi0, int n_sol, double u0,
                                           double t_final, double dt,
                                           const ReducedModelCalibration& cal);

// Right-hand side d'' of the reduced model.
double reduced_acceleration(double d, double phi, double xi, double amplitude);

// |d_ini / (2 v_ini)|.
double collision_time(double d_ini, double v_ini);

enum class CollisionRegime { PreFragmentation, PostFragmentation };

// Compared against the 0.2-threshold fragmentation time.
CollisionRegime classify_collision(double t_coll, double t_threshold);
const char* regime_name(CollisionRegime r);

// Relative deviation of the model from GPE d(t) on resolved samples before
// the GPE closest approach. Returns the maximum of |d_ode - d_gpe| / d_gpe.
double max_relative_deviation_before_bounce(const ReducedTrajectory& ode,
                                            const gpe::Trajectory& gpe);

}  // namespace solcoll::analysis
