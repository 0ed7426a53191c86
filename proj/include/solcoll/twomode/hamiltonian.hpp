#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <span>
#include <vector>

#include "solcoll/core/spectral.hpp"
#include "solcoll/twomode/coeffs.hpp"

namespace solcoll::twomode {

// Real symmetric pentadiagonal Hamiltonian on the Fock basis |n_L, N - n_L>,
// n_L = 0..N. off1[n] couples n and n+1, off2[n] couples n and n+2.
struct BandedHamiltonian {
  int n_tot = 0;
  std::vector<double> diag;
  std::vector<double> off1;
  std::vector<double> off2;

  std::size_t dim() const noexcept { return diag.size(); }

  // y = H x restricted to rows/columns [lo, hi] (inclusive); x and y are
  // indexed from lo.
  void apply(std::span<const cplx> x, std::span<cplx> y, std::size_t lo, std::size_t hi) const;
  void apply(std::span<const cplx> x, std::span<cplx> y) const;

  // Largest absolute off-diagonal row sum (Gershgorin radius).
  double offdiag_bound() const noexcept;

  // Off-diagonal row sum restricted to rows [lo, hi].
  double offdiag_bound(std::size_t lo, std::size_t hi) const noexcept;

  Eigen::MatrixXd dense() const;
};

// Matrix elements in the |n, N - n> basis.
inline double diag_element(const TwoModeCoeffs& c, int n_tot, double n) {
  const double m = n_tot - n;
  return c.E0 * n_tot + 0.5 * c.chi * (n * (n - 1) + m * (m - 1)) + 4.0 * c.Ubar * n * m;
}
// <n+1| H |n>
inline double off1_element(const TwoModeCoeffs& c, int n_tot, double n) {
  return c.hopping(n_tot) * std::sqrt((n + 1) * (n_tot - n));
}
// <n+2| H |n>
inline double off2_element(const TwoModeCoeffs& c, int n_tot, double n) {
  const double m = n_tot - n;
  return c.Ubar * std::sqrt((n + 1) * (n + 2) * m * (m - 1));
}

BandedHamiltonian build_hamiltonian(const TwoModeCoeffs& c, int n_tot);

}  // namespace solcoll::twomode
