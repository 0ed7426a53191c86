#include "solcoll/core/units.hpp"

#include <cmath>
#include <string>

#include "solcoll/core/error.hpp"

namespace solcoll {

namespace {

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw InvalidArgument(std::string(name) + " must be finite");
}

}  // namespace

void PhysicalParams::validate() const {
  require_finite(a_s, "a_s");
  require_finite(omega_perp, "omega_perp");
  require_finite(atom_mass, "atom_mass");
  if (omega_perp <= 0) throw InvalidArgument("omega_perp must be positive");
  if (atom_mass <= 0) throw InvalidArgument("atom_mass must be positive");
}

double interaction_strength_si(const PhysicalParams& p, double hbar) {
  p.validate();
  return 2.0 * p.a_s * hbar * p.omega_perp;
}

ScaledInteraction u0_from_physical(const PhysicalParams& p, double reference_length, double hbar) {
  p.validate();
  require_finite(reference_length, "reference_length");
  require_finite(hbar, "hbar");
  if (reference_length <= 0) throw InvalidArgument("reference_length must be positive");
  if (hbar <= 0) throw InvalidArgument("hbar must be positive");

  ScaledInteraction s{};
  s.length_unit = reference_length;
  s.time_unit = p.atom_mass * reference_length * reference_length / hbar;
  s.energy_unit = hbar * hbar / (p.atom_mass * reference_length * reference_length);
  s.coupling_unit = s.energy_unit * reference_length;
  s.u0 = interaction_strength_si(p, hbar) / s.coupling_unit;
  return s;
}

double scattering_length_from_u0(double u0, double omega_perp, double atom_mass,
                                 double reference_length, double hbar) {
  require_finite(u0, "u0");
  PhysicalParams probe{0.0, omega_perp, atom_mass};
  probe.validate();
  const double coupling_unit = hbar * hbar / (atom_mass * reference_length);
  return u0 * coupling_unit / (2.0 * hbar * omega_perp);
}

double unit_healing_length(const PhysicalParams& p, double n_sol, double hbar) {
  p.validate();
  if (p.a_s >= 0) throw InvalidArgument("no bright soliton for repulsive interactions");
  if (!(n_sol >= 2)) throw InvalidArgument("n_sol must be at least 2");
  return hbar / (p.atom_mass * std::abs(p.a_s) * p.omega_perp * n_sol);
}

double soliton_width(double n_sol, double u0) {
  if (!std::isfinite(u0) || !std::isfinite(n_sol))
    throw InvalidArgument("soliton_width: non-finite input");
  if (u0 >= 0) throw InvalidArgument("no bright soliton for repulsive interactions");
  if (n_sol < 2) throw InvalidArgument("soliton_width: n_sol must be at least 2");
  return 2.0 / (std::abs(u0) * n_sol);
}

}  // namespace solcoll
