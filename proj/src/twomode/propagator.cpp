#include "solcoll/twomode/propagator.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

#include "solcoll/core/error.hpp"

namespace solcoll::twomode {

// ---------------------------------------------------------------------------
// SeparationSchedule

SeparationSchedule SeparationSchedule::constant(double d) {
  SeparationSchedule s;
  s.kind_ = Kind::Constant;
  s.d0_ = std::abs(d);
  s.t_end_ = std::numeric_limits<double>::infinity();
  s.source_ = "constant";
  return s;
}

SeparationSchedule SeparationSchedule::ramp(double d_ini, double v_ini) {
  SeparationSchedule s;
  s.kind_ = Kind::Ramp;
  s.d0_ = d_ini;
  s.v0_ = v_ini;
  s.t_end_ = std::numeric_limits<double>::infinity();
  s.source_ = "ramp";
  return s;
}

SeparationSchedule SeparationSchedule::from_trajectory(const gpe::Trajectory& traj) {
  const std::size_t n = traj.size();
  if (n == 0) throw InvalidArgument("SeparationSchedule: empty trajectory");
  SeparationSchedule s;
  s.kind_ = Kind::Table;
  s.times_ = traj.times;
  s.values_ = traj.d;
  s.filled_.assign(n, 0);
  s.t_end_ = traj.times.back();
  s.source_ = "gpe";

  std::size_t i = 0;
  while (i < n) {
    if (traj.resolved[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n && !traj.resolved[j]) ++j;
    // Unresolved run [i, j).
    const bool has_before = i > 0;
    const bool has_after = j < n;
    const double t_a = has_before ? traj.times[i - 1] : traj.times[i];
    const double t_b = has_after ? traj.times[j] : traj.times[j - 1];
    const double d_a = has_before ? traj.d[i - 1] : 0.0;
    const double d_b = has_after ? traj.d[j] : 0.0;
    const double t_mid = 0.5 * (t_a + t_b);
    for (std::size_t k = i; k < j; ++k) {
      const double t = traj.times[k];
      double v = 0.0;
      if (t < t_mid && t_mid > t_a) v = d_a * (t_mid - t) / (t_mid - t_a);
      else if (t > t_mid && t_b > t_mid) v = d_b * (t - t_mid) / (t_b - t_mid);
      s.values_[k] = v;
      s.filled_[k] = 1;
    }
    i = j;
  }
  return s;
}

double SeparationSchedule::at(double t) const {
  switch (kind_) {
    case Kind::Constant:
      return d0_;
    case Kind::Ramp:
      return std::abs(d0_ - 2.0 * v0_ * t);
    case Kind::Table: {
      const double eps = 1e-9 * std::max(1.0, std::abs(t_end_));
      if (t < times_.front() - eps || t > t_end_ + eps) {
        std::ostringstream msg;
        msg << "separation schedule covers [" << times_.front() << ", " << t_end_
            << "], requested t = " << t;
        throw InvalidArgument(msg.str());
      }
      if (t <= times_.front()) return values_.front();
      if (t >= times_.back()) return values_.back();
      const auto it = std::upper_bound(times_.begin(), times_.end(), t);
      const auto k = static_cast<std::size_t>(it - times_.begin());
      const double w = (t - times_[k - 1]) / (times_[k] - times_[k - 1]);
      return (1.0 - w) * values_[k - 1] + w * values_[k];
    }
  }
  return d0_;
}

bool SeparationSchedule::filled(double t) const {
  if (kind_ != Kind::Table) return false;
  if (t <= times_.front()) return filled_.front() != 0;
  if (t >= times_.back()) return filled_.back() != 0;
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  const auto k = static_cast<std::size_t>(it - times_.begin());
  return filled_[k - 1] != 0 || filled_[k] != 0;
}

// ---------------------------------------------------------------------------
// KrylovPropagator

void PropagationStats::merge(const PropagationStats& o) {
  krylov_steps += o.krylov_steps;
  weak_steps += o.weak_steps;
  matvecs += o.matvecs;
  rejected += o.rejected;
  max_norm_drift = std::max(max_norm_drift, o.max_norm_drift);
}

KrylovPropagator::KrylovPropagator(PropagationOptions opt) : opt_(opt) {
  if (opt_.max_krylov_dim < 2) throw InvalidArgument("KrylovPropagator: max_krylov_dim must be >= 2");
  basis_.resize(static_cast<std::size_t>(opt_.max_krylov_dim) + 1);
}

namespace {

double vnorm(std::span<const cplx> v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

cplx vdot(std::span<const cplx> a, std::span<const cplx> b) {
  cplx s;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

}  // namespace

namespace {

void build_weak_kernel(WeakKernel& k, const BandedHamiltonian& h, double tau, std::size_t lo,
                       std::size_t hi) {
  k.tau = tau;
  k.base = lo;
  const std::size_t w = hi - lo + 1;
  k.phase.resize(w);
  for (std::size_t r = 0; r < w; ++r) k.phase[r] = std::polar(1.0, -h.diag[lo + r] * tau);
  // First-order Dyson kernel int_0^tau e^{i (H_ii - H_jj) s} ds = (e^{i Delta tau} - 1) / (i Delta),
  // built from the diagonal phases.
  auto g = [&](std::size_t r, std::size_t q) {
    const double x = (h.diag[lo + r] - h.diag[lo + q]) * tau;
    if (std::abs(x) < 1e-4) return tau * cplx{1.0 - x * x / 6.0, 0.5 * x};
    const cplx e = std::conj(k.phase[r]) * k.phase[q];
    return (e - 1.0) * cplx{0.0, -tau / x};
  };
  const cplx mi{0.0, -1.0};
  k.up1.resize(w > 0 ? w - 1 : 0);
  for (std::size_t r = 0; r + 1 < w; ++r) k.up1[r] = mi * h.off1[lo + r] * g(r + 1, r);
  k.up2.resize(w > 1 ? w - 2 : 0);
  for (std::size_t r = 0; r + 2 < w; ++r) k.up2[r] = mi * h.off2[lo + r] * g(r + 2, r);
}

}  // namespace

void KrylovPropagator::weak_step(std::span<cplx> v, const WeakKernel& k, std::size_t lo,
                                 std::size_t hi) {
  const std::size_t w = hi - lo + 1;
  const std::size_t off = lo - k.base;
  const cplx* ph = k.phase.data() + off;
  const cplx* u1 = k.up1.data() + off;
  const cplx* u2 = k.up2.data() + off;
  work_.resize(w);
  for (std::size_t r = 0; r < w; ++r) {
    cplx acc = v[r];
    if (r >= 1) acc += u1[r - 1] * v[r - 1];
    if (r + 1 < w) acc -= std::conj(u1[r]) * v[r + 1];
    if (r >= 2) acc += u2[r - 2] * v[r - 2];
    if (r + 2 < w) acc -= std::conj(u2[r]) * v[r + 2];
    work_[r] = ph[r] * acc;
  }
  std::copy(work_.begin(), work_.end(), v.begin());
  ++stats_.weak_steps;
}

bool KrylovPropagator::try_step(std::span<cplx> v, const BandedHamiltonian& h, std::size_t lo,
                                std::size_t hi, double tau) {
  const std::size_t w = hi - lo + 1;
  const int m_max = opt_.max_krylov_dim;
  const double beta0 = vnorm(v);
  if (beta0 == 0.0) return true;

  for (auto& b : basis_) b.resize(w);
  for (std::size_t r = 0; r < w; ++r) basis_[0][r] = v[r] / beta0;

  std::vector<double> alpha;
  std::vector<double> beta;  // beta[j] links basis j and j+1
  alpha.reserve(static_cast<std::size_t>(m_max));
  beta.reserve(static_cast<std::size_t>(m_max));
  Eigen::VectorXcd y;

  for (int j = 0; j < m_max; ++j) {
    auto& q = basis_[static_cast<std::size_t>(j)];
    auto& next = basis_[static_cast<std::size_t>(j) + 1];
    h.apply(q, next, lo, hi);
    ++stats_.matvecs;
    const double a = vdot(q, next).real();
    for (std::size_t r = 0; r < w; ++r) {
      next[r] -= a * q[r];
      if (j > 0) next[r] -= beta.back() * basis_[static_cast<std::size_t>(j) - 1][r];
    }
    // Full reorthogonalisation; the basis is short.
    for (int k = 0; k <= j; ++k) {
      const auto& bk = basis_[static_cast<std::size_t>(k)];
      const cplx c = vdot(bk, next);
      for (std::size_t r = 0; r < w; ++r) next[r] -= c * bk[r];
    }
    alpha.push_back(a);
    const double b = vnorm(next);

    const auto m = static_cast<Eigen::Index>(alpha.size());
    Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alpha.data(), m);
    Eigen::VectorXd sub(std::max<Eigen::Index>(m - 1, 0));
    for (Eigen::Index k = 0; k + 1 < m; ++k) sub(k) = beta[static_cast<std::size_t>(k)];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    const auto& Q = es.eigenvectors();
    const auto& lam = es.eigenvalues();
    y.resize(m);
    for (Eigen::Index r = 0; r < m; ++r) {
      cplx acc;
      for (Eigen::Index l = 0; l < m; ++l) acc += Q(r, l) * std::polar(Q(0, l), -lam(l) * tau);
      y(r) = acc;
    }

    const double scale = std::max(1.0, std::abs(a));
    const bool breakdown = b <= 1e-14 * scale;
    const double err = b * std::abs(y(m - 1));
    if (breakdown || err <= opt_.krylov_tolerance) {
      for (std::size_t r = 0; r < w; ++r) {
        cplx acc;
        for (Eigen::Index k = 0; k < m; ++k) acc += y(k) * basis_[static_cast<std::size_t>(k)][r];
        v[r] = beta0 * acc;
      }
      ++stats_.krylov_steps;
      return true;
    }
    beta.push_back(b);
    for (auto& z : next) z /= b;
  }
  ++stats_.rejected;
  return false;
}

void KrylovPropagator::advance(TwoModeState& s, const BandedHamiltonian& h, double tau,
                               WeakKernel* kernel) {
  if (h.dim() != s.dim()) throw InvalidArgument("KrylovPropagator: dimension mismatch");
  if (tau <= 0) return;
  auto& c = s.amplitudes;
  const std::size_t dim = c.size();

  double peak2 = 0.0;
  for (const auto& z : c) peak2 = std::max(peak2, std::norm(z));
  if (peak2 == 0.0) return;
  const double cut2 = opt_.window_cutoff * opt_.window_cutoff * peak2;
  std::size_t first = 0, last = dim - 1;
  while (first < dim && std::norm(c[first]) <= cut2) c[first++] = 0.0;
  while (last > first && std::norm(c[last]) <= cut2) c[last--] = 0.0;
  // Each matvec widens the support by two; the margin keeps the windowed
  // Krylov space identical to the full one.
  const std::size_t margin = 2 * static_cast<std::size_t>(opt_.max_krylov_dim) + 4;
  const std::size_t lo = first > margin ? first - margin : 0;
  const std::size_t hi = std::min(dim - 1, last + margin);
  std::span<cplx> v(c.data() + lo, hi - lo + 1);

  if (h.offdiag_bound(lo, hi) * tau <= opt_.weak_coupling_limit) {
    WeakKernel& k = kernel ? *kernel : scratch_;
    // Slice lengths from t_k = k dt differ in the last bits; reusing the
    // kernel across them shifts the evolved time by ~1e-13 tau.
    const bool covers = lo >= k.base && hi < k.base + k.phase.size();
    if (!kernel || k.tau == 0.0 || !covers || std::abs(k.tau - tau) > 1e-13 * tau) {
      // Slack so a slowly drifting window does not force a rebuild every step.
      const std::size_t slack = kernel ? margin : 0;
      build_weak_kernel(k, h, tau, lo > slack ? lo - slack : 0, std::min(dim - 1, hi + slack));
    }
    weak_step(v, k, lo, hi);
    s.time += tau;
    return;
  }

  double remaining = tau;
  double step = hint_ > 0 ? std::min(hint_, tau) : tau;
  int guard = 0;
  while (remaining > 0) {
    step = std::min(step, remaining);
    const std::vector<cplx> backup(v.begin(), v.end());
    if (try_step(v, h, lo, hi, step)) {
      remaining -= step;
      hint_ = step;
      if (remaining < 1e-14 * tau) remaining = 0;
      // Grow only after an easy step.
      step *= 1.25;
    } else {
      std::copy(backup.begin(), backup.end(), v.begin());
      step *= 0.5;
      if (++guard > 200) throw NumericalError("Krylov propagator: step size underflow");
    }
  }
  s.time += tau;
}

// ---------------------------------------------------------------------------
// propagate

namespace {

std::size_t slice_count(double dt, double t_final) {
  if (!(dt > 0)) throw InvalidArgument("propagate: dt must be positive");
  if (t_final < 0) throw InvalidArgument("propagate: t_final must be non-negative");
  return static_cast<std::size_t>(std::ceil(t_final / dt - 1e-9));
}

double slice_end(std::size_t k, double dt, double t_final, std::size_t count) {
  return k >= count ? t_final : std::min(static_cast<double>(k) * dt, t_final);
}

void check_norm(const TwoModeState& s, double tol, PropagationStats& stats) {
  const double drift = std::abs(s.norm_sq() - 1.0);
  stats.max_norm_drift = std::max(stats.max_norm_drift, drift);
  if (drift > tol) {
    std::ostringstream msg;
    msg << "two-mode propagation: norm drift " << drift << " at t = " << s.time
        << " (N_tot = " << s.n_tot << ")";
    throw NumericalError(msg.str());
  }
}

}  // namespace

PropagationStats propagate(NumberSuperposition& state, const SeparationSchedule& d_of_t,
                           const CoeffProvider& coeffs, double dt, double t_final,
                           std::size_t sample_stride, const SuperpositionObserver& observer,
                           const PropagationOptions& opt) {
  const std::size_t count = slice_count(dt, t_final);
  if (d_of_t.t_end() < t_final - 1e-9 * std::max(1.0, t_final)) {
    std::ostringstream msg;
    msg << "propagate: separation schedule ends at t = " << d_of_t.t_end()
        << " before t_final = " << t_final;
    throw InvalidArgument(msg.str());
  }
  if (sample_stride == 0) sample_stride = 1;
  const double t0 = state.time();

  SliceInfo info;
  info.t = t0;
  info.d = d_of_t.at(0.0);
  info.coeffs = coeffs(info.d);
  info.filled = d_of_t.filled(0.0);
  if (observer) observer(state, info);

  const unsigned n_workers =
      std::max(1u, std::min<unsigned>(opt.threads, static_cast<unsigned>(state.size())));
  std::vector<KrylovPropagator> workers;
  workers.reserve(n_workers);
  for (unsigned w = 0; w < n_workers; ++w) workers.emplace_back(opt);

  PropagationStats stats;
  std::vector<PropagationStats> worker_stats(n_workers);
  // Hamiltonians are rebuilt only when the coefficients change.
  std::vector<BandedHamiltonian> hams(state.size());
  std::vector<WeakKernel> kernels(state.size());
  TwoModeCoeffs built_for;
  bool have_hams = false;
  for (std::size_t k = 0; k < count; ++k) {
    const double ta = slice_end(k, dt, t_final, count);
    const double tb = slice_end(k + 1, dt, t_final, count);
    const double tau = tb - ta;
    const double tm = 0.5 * (ta + tb);
    info.d = d_of_t.at(tm);
    info.coeffs = coeffs(info.d);
    info.filled = d_of_t.filled(tm);
    const auto& c = info.coeffs;
    const bool rebuild = !have_hams || c.E0 != built_for.E0 || c.chi != built_for.chi ||
                         c.J != built_for.J || c.Ubar != built_for.Ubar ||
                         c.Jbar != built_for.Jbar;
    built_for = c;
    have_hams = true;

    auto run_range = [&](unsigned w) {
      for (std::size_t i = w; i < state.size(); i += n_workers) {
        auto& sec = state.sectors[i];
        if (rebuild) {
          hams[i] = build_hamiltonian(info.coeffs, sec.n_tot);
          kernels[i].reset();
        }
        workers[w].advance(sec, hams[i], tau, &kernels[i]);
        sec.time = t0 + tb;
        check_norm(sec, opt.norm_tolerance, worker_stats[w]);
      }
    };
    if (n_workers == 1) {
      run_range(0);
    } else {
      std::vector<std::thread> pool;
      std::vector<std::exception_ptr> errors(n_workers);
      for (unsigned w = 0; w < n_workers; ++w) {
        pool.emplace_back([&, w] {
          try {
            run_range(w);
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
      for (auto& th : pool) th.join();
      for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    }
    ++stats.slices;
    const bool last = k + 1 == count;
    if (observer && (last || (k + 1) % sample_stride == 0)) {
      info.t = t0 + tb;
      observer(state, info);
    }
  }
  for (unsigned w = 0; w < n_workers; ++w) {
    stats.merge(workers[w].stats());
    stats.max_norm_drift = std::max(stats.max_norm_drift, worker_stats[w].max_norm_drift);
  }
  return stats;
}

PropagationStats propagate(TwoModeState& state, const SeparationSchedule& d_of_t,
                           const CoeffProvider& coeffs, double dt, double t_final,
                           std::size_t sample_stride, const StateObserver& observer,
                           const PropagationOptions& opt) {
  NumberSuperposition wrapped = single_sector(std::move(state));
  SuperpositionObserver inner;
  if (observer)
    inner = [&](const NumberSuperposition& s, const SliceInfo& info) { observer(s.sectors[0], info); };
  PropagationStats stats;
  try {
    stats = propagate(wrapped, d_of_t, coeffs, dt, t_final, sample_stride, inner, opt);
  } catch (...) {
    state = std::move(wrapped.sectors[0]);
    throw;
  }
  state = std::move(wrapped.sectors[0]);
  return stats;
}

std::vector<TwoModeState> propagate_history(TwoModeState state, const SeparationSchedule& d_of_t,
                                            const CoeffProvider& coeffs, double dt,
                                            double t_final, const PropagationOptions& opt) {
  std::vector<TwoModeState> history;
  propagate(state, d_of_t, coeffs, dt, t_final, 1,
            [&](const TwoModeState& s, const SliceInfo&) { history.push_back(s); }, opt);
  return history;
}

}  // namespace solcoll::twomode
