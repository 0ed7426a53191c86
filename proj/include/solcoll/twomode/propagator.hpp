#pragma once

#include <functional>
#include <string>
#include <vector>

#include "solcoll/gpe/tracking.hpp"
#include "solcoll/twomode/coeffs.hpp"
#include "solcoll/twomode/hamiltonian.hpp"
#include "solcoll/twomode/state.hpp"

namespace solcoll::twomode {

// Soliton separation as a function of time, feeding H(d(t)).
class SeparationSchedule {
 public:
  static SeparationSchedule constant(double d);
  // |d_ini - 2 v_ini t|: uniform approach, reflected at d = 0.
  static SeparationSchedule ramp(double d_ini, double v_ini);
  // Linear interpolation of a tracked trajectory. Runs of unresolved
  // entries are bridged by a V-shaped fill that reaches d = 0 at the middle
  // of the run; those times report filled() == true.
  static SeparationSchedule from_trajectory(const gpe::Trajectory& traj);

  double at(double t) const;
  bool filled(double t) const;
  double t_end() const noexcept { return t_end_; }
  const std::string& source() const noexcept { return source_; }

 private:
  enum class Kind { Constant, Ramp, Table };
  Kind kind_ = Kind::Constant;
  double d0_ = 0.0;
  double v0_ = 0.0;
  double t_end_ = 0.0;
  std::vector<double> times_;
  std::vector<double> values_;
  std::vector<int> filled_;
  std::string source_;
};

struct PropagationOptions {
  double krylov_tolerance = 1e-12;  // local error per step, relative to the state norm
  int max_krylov_dim = 30;
  // Steps with (off-diagonal bound) * tau below this use the exact-diagonal
  // interaction picture with first-order coupling (local error <= limit^2/2).
  double weak_coupling_limit = 1e-8;
  double norm_tolerance = 1e-9;
  // Amplitudes below cutoff * max|c| are dropped from the active window.
  double window_cutoff = 1e-17;
  unsigned threads = 1;
};

struct PropagationStats {
  std::size_t slices = 0;
  std::size_t krylov_steps = 0;
  std::size_t weak_steps = 0;
  std::size_t matvecs = 0;
  std::size_t rejected = 0;
  double max_norm_drift = 0.0;

  void merge(const PropagationStats& o);
};

// Per-row factors of the weak-coupling step for one Hamiltonian and step
// length, on rows [base, base + phase.size()). Reusable while H and tau stay
// fixed and the active window stays inside.
struct WeakKernel {
  double tau = 0.0;  // 0 marks an empty kernel
  std::size_t base = 0;
  std::vector<cplx> phase;  // e^{-i H_ii tau}
  // up1[j]: coupling of row i+1 to row i, -i H_{i,i+1} g(i+1, i), i = base + j.
  // The transposed pair has -conj(up1[j]).
  std::vector<cplx> up1;
  std::vector<cplx> up2;

  void reset() noexcept { tau = 0.0; }
};

// exp(-i H tau) on a single sector. Keeps a step-size hint between calls.
class KrylovPropagator {
 public:
  explicit KrylovPropagator(PropagationOptions opt = {});

  // kernel, when given, caches the weak-coupling factors between calls with
  // the same h; the caller resets it whenever h changes.
  void advance(TwoModeState& s, const BandedHamiltonian& h, double tau, WeakKernel* kernel = nullptr);
  const PropagationStats& stats() const noexcept { return stats_; }

 private:
  bool try_step(std::span<cplx> v, const BandedHamiltonian& h, std::size_t lo, std::size_t hi,
                double tau);
  void weak_step(std::span<cplx> v, const WeakKernel& k, std::size_t lo, std::size_t hi);

  PropagationOptions opt_;
  PropagationStats stats_;
  double hint_ = 0.0;
  std::vector<std::vector<cplx>> basis_;
  std::vector<cplx> work_;
  WeakKernel scratch_;
};

struct SliceInfo {
  double t = 0.0;       // time at the end of the sampled slice (0 for the initial call)
  double d = 0.0;       // separation used on that slice
  TwoModeCoeffs coeffs;
  bool filled = false;  // d came from a gap fill
};

using SuperpositionObserver = std::function<void(const NumberSuperposition&, const SliceInfo&)>;
using StateObserver = std::function<void(const TwoModeState&, const SliceInfo&)>;

// Piecewise-constant propagation: slice k covers [t_k, t_{k+1}] with
// d = d_of_t((t_k + t_{k+1})/2). The observer sees the initial state and
// every sample_stride-th slice end (and the final one). Throws
// InvalidArgument when the schedule ends before t_final and NumericalError
// on norm drift beyond opt.norm_tolerance.
PropagationStats propagate(NumberSuperposition& state, const SeparationSchedule& d_of_t,
                           const CoeffProvider& coeffs, double dt, double t_final,
                           std::size_t sample_stride, const SuperpositionObserver& observer,
                           const PropagationOptions& opt = {});

PropagationStats propagate(TwoModeState& state, const SeparationSchedule& d_of_t,
                           const CoeffProvider& coeffs, double dt, double t_final,
                           std::size_t sample_stride, const StateObserver& observer,
                           const PropagationOptions& opt = {});

// States at every sampled time, for small systems and tests.
std::vector<TwoModeState> propagate_history(TwoModeState state, const SeparationSchedule& d_of_t,
                                            const CoeffProvider& coeffs, double dt,
                                            double t_final, const PropagationOptions& opt = {});

}  // namespace solcoll::twomode
