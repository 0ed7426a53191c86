#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "solcoll/gpe/split_step.hpp"
#include "solcoll/gpe/tracking.hpp"

namespace solcoll::gpe {

// CSV: t,x,re_phi,im_phi,density. Returns the number of data rows.
std::size_t write_snapshot_csv(const std::string& path, const Grid1D& grid,
                               std::span<const Snapshot> snapshots);

// CSV: t,x_left,x_right,d,v,resolved.
std::size_t write_trajectory_csv(const std::string& path, const Trajectory& traj);

// Columnar binary cache, native little-endian:
//   char[8]  magic "SOLCSNP1"
//   u64      snapshot count S, u64 point count N
//   f64      x_min, x_max
//   f64[S]   times
//   f64[S*N] real parts (snapshot-major), then f64[S*N] imaginary parts.
void write_snapshot_cache(const std::string& path, const Grid1D& grid,
                          std::span<const Snapshot> snapshots);

struct SnapshotCache {
  Grid1D grid;
  std::vector<Snapshot> snapshots;
};

SnapshotCache read_snapshot_cache(const std::string& path);

}  // namespace solcoll::gpe
