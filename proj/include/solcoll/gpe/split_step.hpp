#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "solcoll/core/spectral.hpp"
#include "solcoll/gpe/mean_field.hpp"

namespace solcoll::gpe {

struct Snapshot {
  double time;
  std::vector<cplx> psi;
};

// Strang split-step integrator for i phi_t = [-1/2 d_xx + U0 |phi|^2] phi:
// half kinetic step in k-space, full nonlinear step in x-space, half kinetic
// step. Adjacent half kinetic steps are fused between observation points.
//
// The evolver owns its FFT buffers; it is movable but not shareable.
class SplitStepEvolver {
 public:
  static constexpr double kMaxKineticPhase = 0.78539816339744831;  // pi/4
  static constexpr std::size_t kNanCheckInterval = 100;

  SplitStepEvolver(const Grid1D& grid, double u0, double dt);

  double dt() const noexcept { return dt_; }
  double u0() const noexcept { return u0_; }
  // k_max^2 dt / 2, the largest kinetic phase accumulated per step.
  double kinetic_phase_per_step() const noexcept;

  using Observer = std::function<void(const MeanField&, std::size_t step)>;

  // Advances by n_steps. When stride > 0 the observer sees the initial state
  // and every stride-th step (plus the final state if not on the stride).
  void evolve(MeanField& field, std::size_t n_steps, std::size_t stride = 0,
              const Observer& observer = {});

 private:
  void kinetic(std::span<cplx> psi, const std::vector<cplx>& phase);
  void nonlinear(std::span<cplx> psi) const;

  Grid1D grid_;
  double u0_;
  double dt_;
  FftPair fft_;
  std::vector<cplx> half_;  // e^{-i k^2 dt/4} / n
  std::vector<cplx> full_;  // e^{-i k^2 dt/2} / n
};

// Convenience wrapper; when snapshots is non-null, states are appended at the
// given stride (initial and final state included).
MeanField evolve_splitstep(MeanField field, double u0, double dt, std::size_t n_steps,
                           std::size_t stride = 0, std::vector<Snapshot>* snapshots = nullptr);

}  // namespace solcoll::gpe
