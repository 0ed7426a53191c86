#pragma once

#include <vector>

#include "solcoll/core/spectral.hpp"

namespace solcoll::twomode {

// Fixed-total-number two-mode state: amplitudes c_{n_L}, n_L = 0..n_tot.
struct TwoModeState {
  int n_tot = 0;
  std::vector<cplx> amplitudes;
  double time = 0.0;

  std::size_t dim() const noexcept { return amplitudes.size(); }
  double norm_sq() const noexcept;
};

// Fixed-N projection of a dual coherent state:
// c_n = sqrt(binom(N, n) / 2^N) e^{i (N - n) phi}. Requires even n_tot.
TwoModeState initial_relative_coherent_state(int n_tot, double phi);

TwoModeState fock_state(int n_tot, int n_left);

// n_L <-> n_R relabelling.
TwoModeState mirror(const TwoModeState& s);

// Coherent superposition over total-number sectors,
// |Psi> = sum_N sqrt(weight_N) |psi_N>, each |psi_N> normalised. Number
// conserving dynamics act on every sector independently, so the weights are
// constants of motion; relative sector phases live inside |psi_N>.
struct NumberSuperposition {
  std::vector<double> weights;
  std::vector<TwoModeState> sectors;

  std::size_t size() const noexcept { return sectors.size(); }
  double total_weight() const noexcept;
  double mean_total() const noexcept;
  double time() const noexcept { return sectors.empty() ? 0.0 : sectors.front().time; }
};

NumberSuperposition single_sector(TwoModeState s);

// Product of Glauber coherent states |sqrt(N_sol) e^{-i phi}>_L |sqrt(N_sol)>_R,
// i.e. Poissonian total number with mean 2 N_sol. Sectors whose weight falls
// below weight_cutoff relative to the largest are dropped and the remaining
// weights renormalised. For phi = 0 the left-mode Husimi function peaks at
// arg(alpha) = -phi.
NumberSuperposition dual_coherent_state(int n_sol, double phi, double weight_cutoff = 1e-16);

}  // namespace solcoll::twomode
