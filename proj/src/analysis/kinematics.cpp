#include "solcoll/analysis/kinematics.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "solcoll/core/error.hpp"

namespace solcoll::analysis {

ConservationResiduals conservation_residuals(int a, int n_sol, double p0, double chi,
                                             double p_plus, double p_minus, double mass) {
  const double N = n_sol, A = a;
  ConservationResiduals r;
  const double left = (N + A) * p_plus, right = (N - A) * p_minus;
  const double pscale = std::abs(left) + std::abs(right) + 2.0 * N * std::abs(p0);
  r.momentum = pscale > 0 ? std::abs(left - right) / pscale : 0.0;

  const double e_in = N * p0 * p0 / mass + chi * N * N;
  const double e_out = (N + A) * p_plus * p_plus / (2 * mass) + chi * (N + A) * (N + A) / 2 +
                       (N - A) * p_minus * p_minus / (2 * mass) + chi * (N - A) * (N - A) / 2;
  const double escale = N * p0 * p0 / mass + std::abs(chi) * (N * N + A * A);
  r.energy = escale > 0 ? std::abs(e_out - e_in) / escale : 0.0;
  return r;
}

CollisionOutcome postcollision_momenta(int a, int n_sol, double p0, double chi, double mass) {
  if (n_sol < 1) throw InvalidArgument("postcollision_momenta: n_sol must be >= 1");
  if (std::abs(a) >= n_sol) {
    std::ostringstream msg;
    msg << "postcollision_momenta: |a| = " << std::abs(a) << " >= N_sol = " << n_sol
        << " annihilates a soliton";
    throw InvalidArgument(msg.str());
  }
  if (chi > 0) throw InvalidArgument("postcollision_momenta: chi must be <= 0");
  if (!(mass > 0)) throw InvalidArgument("postcollision_momenta: mass must be positive");

  const double N = n_sol, A = a;
  const double radicand = (N - A) * (p0 * p0 * N - A * A * mass * chi) / (N * (N + A));
  if (radicand < 0) {
    std::ostringstream msg;
    msg << "postcollision_momenta: negative p_+^2 = " << radicand << " at a = " << a;
    throw NumericalError(msg.str());
  }
  CollisionOutcome out;
  out.a = a;
  out.n_sol = n_sol;
  out.p0 = p0;
  out.chi = chi;
  out.mass = mass;
  out.p_plus = std::sqrt(radicand);
  out.p_minus = (N + A) * out.p_plus / (N - A);
  out.kinetic_gain = (N + A) * out.p_plus * out.p_plus / (2 * mass) +
                     (N - A) * out.p_minus * out.p_minus / (2 * mass) - N * p0 * p0 / mass;

  const auto res = conservation_residuals(a, n_sol, p0, chi, out.p_plus, out.p_minus, mass);
  out.momentum_residual = res.momentum;
  out.energy_residual = res.energy;
  if (res.momentum > 1e-10 || res.energy > 1e-10) {
    std::ostringstream msg;
    msg << "postcollision_momenta: conservation check failed at a = " << a
        << " (momentum " << res.momentum << ", energy " << res.energy << ")";
    throw NumericalError(msg.str());
  }
  return out;
}

std::vector<VelocityPoint> v_of_n_curve(int n_sol, double p0, double chi, int n_first, int n_last,
                                        double mass) {
  if (n_first > n_last) throw InvalidArgument("v_of_n_curve: empty range");
  if (n_first <= 0 || n_last >= 2 * n_sol)
    throw InvalidArgument("v_of_n_curve: range must lie inside (0, 2 N_sol)");
  std::vector<VelocityPoint> out;
  out.reserve(static_cast<std::size_t>(n_last - n_first + 1));
  for (int n = n_first; n <= n_last; ++n)
    out.push_back({n, postcollision_momenta(n - n_sol, n_sol, p0, chi, mass).p_plus / mass});
  return out;
}

double mean_kinetic_gain(std::span<const double> rho, int n_sol, double chi) {
  double s = 0.0;
  for (std::size_t n = 0; n < rho.size(); ++n) {
    const double a = static_cast<double>(n) - n_sol;
    s += rho[n] * std::abs(chi) * a * a;
  }
  return s;
}

}  // namespace solcoll::analysis
