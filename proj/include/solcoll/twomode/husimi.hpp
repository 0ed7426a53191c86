#pragma once

#include <span>
#include <string>
#include <vector>

#include "solcoll/core/spectral.hpp"
#include "solcoll/twomode/state.hpp"

namespace solcoll::twomode {

// Husimi function of the left mode, Q(alpha) = <alpha| rho_L |alpha>, with
// rho_L the partial trace over the right mode. Q is normalised so that
// (1/pi) int Q d^2 alpha = 1.

// Polar sampling: radii at cell midpoints of [0, r_max], angles
// theta_k = 2 pi k / n_angular.
struct PolarGrid {
  double r_max = 0.0;
  std::size_t n_radial = 0;
  std::size_t n_angular = 0;

  double dr() const noexcept { return r_max / static_cast<double>(n_radial); }
  double dtheta() const noexcept;
  double r(std::size_t i) const noexcept { return (static_cast<double>(i) + 0.5) * dr(); }
  double theta(std::size_t k) const noexcept { return static_cast<double>(k) * dtheta(); }
  cplx alpha(std::size_t i, std::size_t k) const noexcept;
};

// r_max = sqrt(mean total number) so |alpha|^2 reaches 2 N_sol; resolution
// follows the coherent-state widths. Zero counts pick automatic values.
PolarGrid default_polar_grid(double mean_total, std::size_t n_radial = 0,
                             std::size_t n_angular = 0);

struct HusimiGrid {
  PolarGrid grid;
  std::vector<double> q;  // q[i * n_angular + k]
  std::vector<std::string> warnings;

  double at(std::size_t i, std::size_t k) const { return q[i * grid.n_angular + k]; }
};

// Direct evaluation at arbitrary points; partitioned over alpha.
std::vector<double> husimi_q(const NumberSuperposition& s, std::span<const cplx> alphas,
                             unsigned threads = 1);
std::vector<double> husimi_q(const TwoModeState& s, std::span<const cplx> alphas,
                             unsigned threads = 1);

// Whole polar grid. For each radius the angular dependence is a discrete
// Fourier series in n_L, so every row costs one FFT per right-mode
// occupation. Rows are partitioned over threads; the result does not depend
// on the thread count.
HusimiGrid husimi_polar(const NumberSuperposition& s, const PolarGrid& grid, unsigned threads = 1);
HusimiGrid husimi_polar(const TwoModeState& s, const PolarGrid& grid, unsigned threads = 1);

struct HusimiDiagnostics {
  double normalization = 0.0;            // (1/pi) int Q d^2 alpha
  double circular_variance = 0.0;        // 1 - |<e^{i theta}>| of the angular marginal
  double half_max_circular_variance = 0.0;  // same, over the region Q >= max/2
  double peak_r = 0.0;
  double peak_theta = 0.0;               // in (-pi, pi]
  std::vector<double> radial_marginal;   // (1/pi) int Q r dtheta per radius, sums to ~1/dr
  std::vector<double> angular_marginal;  // (1/pi) int Q r dr per angle
};

HusimiDiagnostics diagnose(const HusimiGrid& h);

}  // namespace solcoll::twomode
