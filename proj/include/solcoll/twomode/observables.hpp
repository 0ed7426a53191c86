#pragma once

#include <vector>

#include "solcoll/twomode/hamiltonian.hpp"
#include "solcoll/twomode/state.hpp"

namespace solcoll::twomode {

// One-body density matrix [[<a^+a>, <b^+a>], [<a^+b>, <b^+b>]] and its
// eigenvalues relative to the (mean) total atom number, lambda_plus >= lambda_minus.
struct OBDM {
  double aa = 0.0;
  double bb = 0.0;
  cplx ab;  // <a^+ b>
  double lambda_plus = 0.0;
  double lambda_minus = 0.0;

  cplx ba() const noexcept { return std::conj(ab); }
  double total() const noexcept { return aa + bb; }
};

OBDM obdm(const TwoModeState& s);
OBDM obdm(const NumberSuperposition& s);

// Distribution of the left-mode occupation.
struct NumberDistribution {
  std::vector<double> probabilities;  // index n_L
  double mean = 0.0;
  double variance = 0.0;
};

NumberDistribution number_distribution(const TwoModeState& s);
NumberDistribution number_distribution(const NumberSuperposition& s);

// <psi|H|psi> (Hermitian, so real).
double expectation(const BandedHamiltonian& h, const TwoModeState& s);

// <H> from the coefficients directly, visiting only the occupied band of
// each sector; weighted over sectors for a superposition.
double energy(const TwoModeCoeffs& c, const TwoModeState& s);
double energy(const TwoModeCoeffs& c, const NumberSuperposition& s);

}  // namespace solcoll::twomode
