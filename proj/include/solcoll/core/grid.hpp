#pragma once

#include <cstddef>
#include <vector>

namespace solcoll {

// Uniform periodic grid on [x_min, x_max). Point i sits at x_min + i*dx; the
// right end point is identified with the left one.
class Grid1D {
 public:
  static constexpr std::size_t kMinPoints = 256;

  Grid1D(double x_min, double x_max, std::size_t n_points);

  double x_min() const noexcept { return x_min_; }
  double x_max() const noexcept { return x_max_; }
  std::size_t size() const noexcept { return n_; }
  double dx() const noexcept { return dx_; }
  double length() const noexcept { return x_max_ - x_min_; }

  double x(std::size_t i) const noexcept { return x_min_ + static_cast<double>(i) * dx_; }
  std::vector<double> positions() const;

  // Angular wavenumbers in FFT order (0, 1, ..., n/2-1, -n/2, ..., -1) * 2pi/L.
  std::vector<double> wavenumbers() const;
  double k_max() const noexcept;

  // Throws unless the box is at least four times the given separation.
  void require_width_for(double separation) const;

  bool operator==(const Grid1D&) const = default;

 private:
  double x_min_;
  double x_max_;
  std::size_t n_;
  double dx_;
};

}  // namespace solcoll
