#pragma once

#include <functional>

#include "solcoll/core/grid.hpp"

namespace solcoll::twomode {

// Coefficients of the two-mode Hamiltonian at soliton separation d, in
// scaled units. Mode functions are unit-normalised sech shapes centred at
// -d/2 (left) and +d/2 (right).
struct TwoModeCoeffs {
  double E0 = 0.0;    // single-mode kinetic energy
  double chi = 0.0;   // on-site interaction, U0 int |L|^4
  double J = 0.0;     // kinetic transfer, int L (-1/2 d_xx) R
  double Ubar = 0.0;  // U0/2 int L^2 R^2
  double Jbar = 0.0;  // U0/2 int L^3 R
  double d = 0.0;
  // Set when d < 2 xi: the frozen-mode picture is only qualitative there.
  bool qualitative_only = false;

  // Scalar value of the transfer operator inside a fixed-N sector.
  double hopping(int n_tot) const noexcept { return J + 2.0 * Jbar * (n_tot - 1); }
};

// Closed form -m U0^2 N / (6 hbar^3).
double chi_closed_form(int n_sol, double u0);

// Grid quadrature of all five integrals; kinetic terms use spectral second
// derivatives. Depends on |d| only. Throws NumericalError when the grid
// cannot normalise a mode function to within 1e-8.
TwoModeCoeffs compute_coeffs(double d, int n_sol, double u0, const Grid1D& grid);

using CoeffProvider = std::function<TwoModeCoeffs(double d)>;

// Provider evaluating compute_coeffs with a one-entry cache on d.
CoeffProvider make_coeff_provider(int n_sol, double u0, const Grid1D& grid);

}  // namespace solcoll::twomode
