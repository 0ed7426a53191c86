#pragma once

// Scaled unit system and conversion from laboratory parameters.
//
// Internally hbar = m = 1 and lengths are measured in a declared reference
// length l. Then energies are in hbar^2/(m l^2), times in m l^2/hbar, and the
// 1D coupling (energy x length) in hbar^2/(m l).

namespace solcoll {

inline constexpr double kHbarSI = 1.054571817e-34;  // J s

struct SimUnits {
  static constexpr double hbar = 1.0;
  static constexpr double mass = 1.0;
  static constexpr double xi = 1.0;
};

struct PhysicalParams {
  double a_s;         // s-wave scattering length [m], negative when attractive
  double omega_perp;  // transverse trap angular frequency [rad/s]
  double atom_mass;   // [kg]

  void validate() const;
};

// Result of mapping a laboratory coupling into scaled units, with the
// conversion factors that define the scaled system.
struct ScaledInteraction {
  double u0;            // dimensionless 1D coupling
  double length_unit;   // [m]
  double time_unit;     // [s]
  double energy_unit;   // [J]
  double coupling_unit; // [J m]
};

// 2 a_s hbar omega_perp in SI units [J m].
double interaction_strength_si(const PhysicalParams& p, double hbar = kHbarSI);

// Scaled U0 for a chosen reference length. With hbar = 1, m = 1 and
// reference_length = 1 this reduces to the bare 2 a_s omega_perp.
ScaledInteraction u0_from_physical(const PhysicalParams& p, double reference_length,
                                   double hbar = kHbarSI);

// Inverse of u0_from_physical: recover a_s from a scaled coupling.
double scattering_length_from_u0(double u0, double omega_perp, double atom_mass,
                                 double reference_length, double hbar = kHbarSI);

// Reference length that makes the healing length of an n_sol soliton equal
// to one scaled unit, i.e. hbar / (m |a_s| omega_perp n_sol).
double unit_healing_length(const PhysicalParams& p, double n_sol, double hbar = kHbarSI);

// Healing length xi = 2 / (|U0| N) of the sech soliton (scaled units).
double soliton_width(double n_sol, double u0);

}  // namespace solcoll
