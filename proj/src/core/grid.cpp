#include "solcoll/core/grid.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "solcoll/core/error.hpp"

namespace solcoll {

Grid1D::Grid1D(double x_min, double x_max, std::size_t n_points)
    : x_min_(x_min), x_max_(x_max), n_(n_points), dx_(0.0) {
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_max > x_min))
    throw InvalidArgument("Grid1D: need finite x_min < x_max");
  if (n_points < kMinPoints)
    throw InvalidArgument("Grid1D: n_points must be >= " + std::to_string(kMinPoints));
  if (!std::has_single_bit(n_points))
    throw InvalidArgument("Grid1D: n_points must be a power of two, got " +
                          std::to_string(n_points));
  dx_ = (x_max - x_min) / static_cast<double>(n_points);
}

std::vector<double> Grid1D::positions() const {
  std::vector<double> xs(n_);
  for (std::size_t i = 0; i < n_; ++i) xs[i] = x(i);
  return xs;
}

std::vector<double> Grid1D::wavenumbers() const {
  std::vector<double> k(n_);
  const double dk = 2.0 * std::numbers::pi / length();
  const auto half = static_cast<std::ptrdiff_t>(n_ / 2);
  for (std::size_t j = 0; j < n_; ++j) {
    auto m = static_cast<std::ptrdiff_t>(j);
    if (m >= half) m -= static_cast<std::ptrdiff_t>(n_);
    k[j] = dk * static_cast<double>(m);
  }
  return k;
}

double Grid1D::k_max() const noexcept { return std::numbers::pi / dx_; }

void Grid1D::require_width_for(double separation) const {
  if (length() < 4.0 * std::abs(separation))
    throw InvalidArgument("Grid1D: box width " + std::to_string(length()) +
                          " is below 4x the separation " + std::to_string(separation));
}

}  // namespace solcoll
