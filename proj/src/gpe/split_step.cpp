#include "solcoll/gpe/split_step.hpp"

#include <cmath>
#include <sstream>

#include "solcoll/core/error.hpp"

namespace solcoll::gpe {

SplitStepEvolver::SplitStepEvolver(const Grid1D& grid, double u0, double dt)
    : grid_(grid), u0_(u0), dt_(dt), fft_(grid.size()) {
  if (!(dt > 0) || !std::isfinite(dt)) throw InvalidArgument("split-step: dt must be positive");
  if (!std::isfinite(u0)) throw InvalidArgument("split-step: u0 must be finite");
  if (kinetic_phase_per_step() >= kMaxKineticPhase) {
    std::ostringstream msg;
    msg << "split-step: kinetic phase per step " << kinetic_phase_per_step()
        << " exceeds pi/4; reduce dt below "
        << 2.0 * kMaxKineticPhase / (grid.k_max() * grid.k_max());
    throw InvalidArgument(msg.str());
  }
  const auto k = grid.wavenumbers();
  const double inv_n = 1.0 / static_cast<double>(grid.size());
  half_.resize(k.size());
  full_.resize(k.size());
  for (std::size_t j = 0; j < k.size(); ++j) {
    half_[j] = std::polar(inv_n, -0.25 * k[j] * k[j] * dt);
    full_[j] = std::polar(inv_n, -0.5 * k[j] * k[j] * dt);
  }
}

double SplitStepEvolver::kinetic_phase_per_step() const noexcept {
  return 0.5 * grid_.k_max() * grid_.k_max() * dt_;
}

void SplitStepEvolver::kinetic(std::span<cplx> psi, const std::vector<cplx>& phase) {
  auto buf = fft_.buffer();
  std::copy(psi.begin(), psi.end(), buf.begin());
  fft_.forward();
  for (std::size_t j = 0; j < buf.size(); ++j) buf[j] *= phase[j];
  fft_.backward();
  std::copy(buf.begin(), buf.end(), psi.begin());
}

void SplitStepEvolver::nonlinear(std::span<cplx> psi) const {
  const double c = -u0_ * dt_;
  for (auto& z : psi) z *= std::polar(1.0, c * std::norm(z));
}

void SplitStepEvolver::evolve(MeanField& field, std::size_t n_steps, std::size_t stride,
                              const Observer& observer) {
  if (!(field.grid == grid_)) throw InvalidArgument("split-step: grid mismatch");
  std::span<cplx> psi(field.psi);
  const double t0 = field.time;
  const bool observing = stride > 0 && static_cast<bool>(observer);
  if (observing) observer(field, 0);
  if (n_steps == 0) return;

  bool synced = true;  // true when psi is a physical state (no pending half step)
  for (std::size_t step = 1; step <= n_steps; ++step) {
    kinetic(psi, synced ? half_ : full_);
    nonlinear(psi);
    const bool sync_here = step == n_steps || (observing && step % stride == 0);
    if (sync_here) {
      kinetic(psi, half_);
      synced = true;
    } else {
      synced = false;
    }
    field.time = t0 + static_cast<double>(step) * dt_;

    if (step % kNanCheckInterval == 0 || step == n_steps) {
      for (const auto& z : psi) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
          throw NumericalError("split-step: non-finite amplitude detected at step " +
                               std::to_string(step));
        }
      }
    }
    if (observing && sync_here && (step % stride == 0 || step == n_steps)) observer(field, step);
  }
}

MeanField evolve_splitstep(MeanField field, double u0, double dt, std::size_t n_steps,
                           std::size_t stride, std::vector<Snapshot>* snapshots) {
  SplitStepEvolver ev(field.grid, u0, dt);
  if (snapshots != nullptr && stride > 0) {
    ev.evolve(field, n_steps, stride, [&](const MeanField& f, std::size_t) {
      snapshots->push_back(Snapshot{f.time, f.psi});
    });
  } else {
    ev.evolve(field, n_steps);
  }
  return field;
}

}  // namespace solcoll::gpe
