#include "solcoll/gpe/tracking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "solcoll/core/error.hpp"

namespace solcoll::gpe {

bool Trajectory::any_unresolved() const noexcept {
  return std::any_of(resolved.begin(), resolved.end(), [](int r) { return r == 0; });
}

std::size_t Trajectory::closest_approach() const noexcept {
  std::size_t best = size();
  for (std::size_t i = 0; i < size(); ++i)
    if (resolved[i] && (best == size() || d[i] < d[best])) best = i;
  return best;
}

namespace {

struct Peak {
  std::size_t index;
  double x;
  double height;
};

// Three-point parabolic refinement around a periodic local maximum.
Peak refine(const Grid1D& grid, std::span<const double> rho, std::size_t i) {
  const std::size_t n = rho.size();
  const double ym = rho[(i + n - 1) % n];
  const double y0 = rho[i];
  const double yp = rho[(i + 1) % n];
  const double denom = ym - 2.0 * y0 + yp;
  double offset = 0.0;
  double height = y0;
  if (denom < 0) {
    offset = 0.5 * (ym - yp) / denom;
    offset = std::clamp(offset, -0.5, 0.5);
    height = y0 - 0.25 * (ym - yp) * offset;
  }
  return Peak{i, grid.x(i) + offset * grid.dx(), height};
}

}  // namespace

PeakPair locate_peaks(const Grid1D& grid, std::span<const double> rho,
                      const PeakTrackingOptions& opt) {
  const std::size_t n = rho.size();
  if (n != grid.size()) throw InvalidArgument("locate_peaks: size mismatch");
  const double top = *std::max_element(rho.begin(), rho.end());
  if (!(top > 0)) throw InvalidArgument("track_separation: zero field");

  std::vector<Peak> peaks;
  for (std::size_t i = 0; i < n; ++i) {
    const double y = rho[i];
    const double ym = rho[(i + n - 1) % n];
    const double yp = rho[(i + 1) % n];
    // Plateaus count once, at their left end.
    if (y > ym && y >= yp && y >= opt.peak_floor * top) peaks.push_back(refine(grid, rho, i));
  }
  std::sort(peaks.begin(), peaks.end(),
            [](const Peak& a, const Peak& b) { return a.height > b.height; });

  if (peaks.size() < 2) {
    const double x = peaks.empty() ? grid.x(0) : peaks.front().x;
    return {x, x, false};
  }
  Peak a = peaks[0];
  Peak b = peaks[1];
  if (b.x < a.x) std::swap(a, b);

  bool resolved = (b.x - a.x) >= opt.min_separation_cells * grid.dx();
  if (resolved) {
    double valley = std::numeric_limits<double>::infinity();
    for (std::size_t i = a.index; i <= b.index; ++i) valley = std::min(valley, rho[i]);
    const double lower = std::min(a.height, b.height);
    if (valley > opt.merge_fraction * lower) resolved = false;
  }
  if (!resolved) {
    const Peak& top_peak = peaks[0];
    return {top_peak.x, top_peak.x, false};
  }
  return {a.x, b.x, true};
}

void compute_separation_rate(Trajectory& traj) {
  const std::size_t n = traj.size();
  traj.v.assign(n, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < n; ++i) {
    if (!traj.resolved[i]) continue;
    const bool prev = i > 0 && traj.resolved[i - 1];
    const bool next = i + 1 < n && traj.resolved[i + 1];
    if (prev && next)
      traj.v[i] = (traj.d[i + 1] - traj.d[i - 1]) / (traj.times[i + 1] - traj.times[i - 1]);
    else if (next)
      traj.v[i] = (traj.d[i + 1] - traj.d[i]) / (traj.times[i + 1] - traj.times[i]);
    else if (prev)
      traj.v[i] = (traj.d[i] - traj.d[i - 1]) / (traj.times[i] - traj.times[i - 1]);
  }
}

Trajectory track_separation(const Grid1D& grid, std::span<const Snapshot> snapshots,
                            const PeakTrackingOptions& opt) {
  Trajectory traj;
  const std::size_t n = snapshots.size();
  if (n >= 3) {
    const double h = snapshots[1].time - snapshots[0].time;
    for (std::size_t i = 2; i < n; ++i) {
      const double hi = snapshots[i].time - snapshots[i - 1].time;
      // The final snapshot may fall off the stride.
      if (i + 1 < n && std::abs(hi - h) > 1e-9 * std::max(1.0, std::abs(h)))
        throw InvalidArgument("track_separation: snapshots must be uniformly spaced in time");
    }
  }
  std::vector<double> rho(grid.size());
  for (const auto& s : snapshots) {
    if (s.psi.size() != grid.size()) throw InvalidArgument("track_separation: size mismatch");
    for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = std::norm(s.psi[i]);
    const auto p = locate_peaks(grid, rho, opt);
    traj.times.push_back(s.time);
    traj.x_left.push_back(p.x_left);
    traj.x_right.push_back(p.x_right);
    traj.d.push_back(p.resolved ? p.x_right - p.x_left : 0.0);
    traj.resolved.push_back(p.resolved ? 1 : 0);
  }
  compute_separation_rate(traj);
  return traj;
}

}  // namespace solcoll::gpe
