#include "solcoll/gpe/snapshot_io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

#include "solcoll/core/error.hpp"
#include "solcoll/io/csv.hpp"

namespace solcoll::gpe {

namespace {

constexpr char kMagic[8] = {'S', 'O', 'L', 'C', 'S', 'N', 'P', '1'};

template <typename T>
void put(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw std::runtime_error("snapshot cache: truncated file");
  return v;
}

}  // namespace

std::size_t write_snapshot_csv(const std::string& path, const Grid1D& grid,
                               std::span<const Snapshot> snapshots) {
  io::CsvWriter csv(path, {"t", "x", "re_phi", "im_phi", "density"});
  for (const auto& s : snapshots) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto z = s.psi[i];
      csv.row({s.time, grid.x(i), z.real(), z.imag(), std::norm(z)});
    }
  }
  csv.close();
  return csv.rows();
}

std::size_t write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  io::CsvWriter csv(path, {"t", "x_left", "x_right", "d", "v", "resolved"});
  for (std::size_t i = 0; i < traj.size(); ++i)
    csv.row({traj.times[i], traj.x_left[i], traj.x_right[i], traj.d[i], traj.v[i],
             static_cast<double>(traj.resolved[i])});
  csv.close();
  return csv.rows();
}

void write_snapshot_cache(const std::string& path, const Grid1D& grid,
                          std::span<const Snapshot> snapshots) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out.write(kMagic, sizeof(kMagic));
  put<std::uint64_t>(out, snapshots.size());
  put<std::uint64_t>(out, grid.size());
  put<double>(out, grid.x_min());
  put<double>(out, grid.x_max());
  for (const auto& s : snapshots) put<double>(out, s.time);
  for (const auto& s : snapshots)
    for (const auto& z : s.psi) put<double>(out, z.real());
  for (const auto& s : snapshots)
    for (const auto& z : s.psi) put<double>(out, z.imag());
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

SnapshotCache read_snapshot_cache(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("snapshot cache: bad magic in '" + path + "'");
  const auto count = get<std::uint64_t>(in);
  const auto points = get<std::uint64_t>(in);
  const auto x_min = get<double>(in);
  const auto x_max = get<double>(in);
  SnapshotCache cache{Grid1D(x_min, x_max, points), {}};
  cache.snapshots.resize(count);
  for (auto& s : cache.snapshots) {
    s.time = get<double>(in);
    s.psi.resize(points);
  }
  for (auto& s : cache.snapshots)
    for (auto& z : s.psi) z.real(get<double>(in));
  for (auto& s : cache.snapshots)
    for (auto& z : s.psi) z.imag(get<double>(in));
  return cache;
}

}  // namespace solcoll::gpe
