#pragma once

#include <string>
#include <vector>

#include "solcoll/core/config.hpp"
#include "solcoll/core/grid.hpp"
#include "solcoll/core/spectral.hpp"

namespace solcoll::gpe {

// Condensate mean field phi(x, t) on a periodic grid. The squared modulus
// integrates to the atom number.
struct MeanField {
  Grid1D grid;
  std::vector<cplx> psi;
  double time = 0.0;

  explicit MeanField(const Grid1D& g) : grid(g), psi(g.size()) {}
};

double norm(const MeanField& f);
std::vector<double> density(const MeanField& f);

// E[phi] = int (1/2 |phi_x|^2 + 1/2 U0 |phi|^4) dx, kinetic part spectral.
double energy(const MeanField& f, double u0);

// int Im(phi^* phi_x) dx, evaluated spectrally.
double momentum(const MeanField& f);

double center_of_mass(const MeanField& f);

// Adds a sech soliton with n_sol atoms (normalised by grid quadrature),
// moving with the given velocity and carrying the phase factor e^{i phase}.
void add_soliton(MeanField& f, double n_sol, double u0, double center, double velocity,
                 double phase);

MeanField make_soliton(const Grid1D& grid, double n_sol, double u0, double center,
                       double velocity = 0.0, double phase = 0.0);

struct SolitonPair {
  MeanField field;
  double xi;
  std::vector<std::string> warnings;
};

// phi(x) = L(x) e^{ikx} + e^{i phi} R(x) e^{-ikx}, L and R centred at -/+ d/2,
// k = v_ini (hbar = m = 1), each shape holding n_sol atoms.
SolitonPair build_soliton_pair(const ScenarioConfig& cfg);
SolitonPair build_soliton_pair(const Grid1D& grid, int n_sol, double u0, double d, double v,
                               double phi);

}  // namespace solcoll::gpe
