#pragma once

#include <span>
#include <vector>

#include "solcoll/core/grid.hpp"
#include "solcoll/gpe/split_step.hpp"

namespace solcoll::gpe {

// Peak-resolution thresholds. Two maxima are a resolved pair only when they
// are at least min_separation_cells apart and the density minimum between
// them stays below merge_fraction of the lower peak. Local maxima below
// peak_floor times the global maximum are ignored as radiation ripples.
struct PeakTrackingOptions {
  double min_separation_cells = 2.0;
  double merge_fraction = 0.75;
  double peak_floor = 0.1;
};

// Soliton trajectory from density maxima. Unresolved entries (merged peaks)
// carry resolved = 0, x_left = x_right = position of the single maximum and
// d = 0; they are never interpolated. v is the finite-difference rate of d
// over resolved neighbours (NaN when no resolved neighbour exists).
struct Trajectory {
  std::vector<double> times;
  std::vector<double> d;
  std::vector<double> x_left;
  std::vector<double> x_right;
  std::vector<double> v;
  std::vector<int> resolved;

  std::size_t size() const noexcept { return times.size(); }
  bool any_unresolved() const noexcept;
  // Index of the smallest resolved d, or size() if none.
  std::size_t closest_approach() const noexcept;
};

struct PeakPair {
  double x_left;
  double x_right;
  bool resolved;
};

PeakPair locate_peaks(const Grid1D& grid, std::span<const double> density,
                      const PeakTrackingOptions& opt = {});

Trajectory track_separation(const Grid1D& grid, std::span<const Snapshot> snapshots,
                            const PeakTrackingOptions& opt = {});

// Fills v from d by central differences over resolved neighbours.
void compute_separation_rate(Trajectory& traj);

}  // namespace solcoll::gpe
