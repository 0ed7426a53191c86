#pragma once

#include <span>
#include <vector>

namespace solcoll::analysis {

// Outgoing soliton momenta after a collision in which the left soliton ends
// up with N + a atoms and the right one with N - a. The left soliton moves
// with p_plus per atom, the right one with -p_minus.
struct CollisionOutcome {
  int a = 0;
  int n_sol = 0;
  double p0 = 0.0;
  double chi = 0.0;
  double mass = 1.0;
  double p_plus = 0.0;
  double p_minus = 0.0;
  double kinetic_gain = 0.0;
  double momentum_residual = 0.0;  // relative
  double energy_residual = 0.0;    // relative
};

// p_+^2 = (N - a)(p0^2 N - a^2 m chi) / (N (N + a)), positive root;
// p_- = (N + a) p_+ / (N - a). Both conservation laws are checked by
// substitution before returning. Requires |a| < N and chi <= 0.
CollisionOutcome postcollision_momenta(int a, int n_sol, double p0, double chi, double mass = 1.0);

// Conservation-law residuals of an arbitrary (p_plus, p_minus) pair, relative
// to the incoming momentum scale and total energy.
struct ConservationResiduals {
  double momentum = 0.0;
  double energy = 0.0;
};
ConservationResiduals conservation_residuals(int a, int n_sol, double p0, double chi,
                                             double p_plus, double p_minus, double mass = 1.0);

struct VelocityPoint {
  int n = 0;  // left-soliton atom number after the collision
  double v = 0.0;
};

// v(n) = p_+(a = n - N) / m for n in [n_first, n_last].
std::vector<VelocityPoint> v_of_n_curve(int n_sol, double p0, double chi, int n_first, int n_last,
                                        double mass = 1.0);

// sum_n rho_n |chi| (n - N)^2, rho indexed by left occupation n.
double mean_kinetic_gain(std::span<const double> rho, int n_sol, double chi);

}  // namespace solcoll::analysis
