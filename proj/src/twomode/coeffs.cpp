#include "solcoll/twomode/coeffs.hpp"

#include <cmath>
#include <memory>
#include <vector>

#include "solcoll/core/error.hpp"
#include "solcoll/core/spectral.hpp"
#include "solcoll/core/units.hpp"

namespace solcoll::twomode {

double chi_closed_form(int n_sol, double u0) { return -u0 * u0 * n_sol / 6.0; }

namespace {

std::vector<double> mode_function(const Grid1D& grid, double center, double xi) {
  const double L = grid.length();
  const double amp = 1.0 / std::sqrt(2.0 * xi);
  std::vector<double> f(grid.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    double y = grid.x(i) - center;
    y -= L * std::round(y / L);
    f[i] = amp / std::cosh(y / xi);
  }
  return f;
}

}  // namespace

TwoModeCoeffs compute_coeffs(double d, int n_sol, double u0, const Grid1D& grid) {
  if (!std::isfinite(d)) throw InvalidArgument("compute_coeffs: non-finite separation");
  const double xi = soliton_width(n_sol, u0);
  const double sep = std::abs(d);
  const auto left = mode_function(grid, -0.5 * sep, xi);
  const auto right = mode_function(grid, 0.5 * sep, xi);

  double n_left = 0.0;
  for (double v : left) n_left += v * v;
  n_left *= grid.dx();
  if (std::abs(n_left - 1.0) > 1e-8)
    throw NumericalError("compute_coeffs: grid too coarse, int |L|^2 = " + std::to_string(n_left));

  const auto left_xx = spectral_derivative(grid, std::span<const double>(left), 2);
  const auto right_xx = spectral_derivative(grid, std::span<const double>(right), 2);

  double e0 = 0.0, j = 0.0, l4 = 0.0, l2r2 = 0.0, l3r = 0.0;
  for (std::size_t i = 0; i < left.size(); ++i) {
    const double l = left[i];
    const double r = right[i];
    e0 += l * (-0.5 * left_xx[i]);
    j += l * (-0.5 * right_xx[i]);
    l4 += l * l * l * l;
    l2r2 += l * l * r * r;
    l3r += l * l * l * r;
  }
  const double dx = grid.dx();
  TwoModeCoeffs c;
  c.E0 = e0 * dx;
  c.J = j * dx;
  c.chi = u0 * l4 * dx;
  c.Ubar = 0.5 * u0 * l2r2 * dx;
  c.Jbar = 0.5 * u0 * l3r * dx;
  c.d = sep;
  c.qualitative_only = sep < 2.0 * xi;
  return c;
}

CoeffProvider make_coeff_provider(int n_sol, double u0, const Grid1D& grid) {
  struct Cache {
    bool valid = false;
    double d = 0.0;
    TwoModeCoeffs value;
  };
  auto cache = std::make_shared<Cache>();
  return [=](double d) {
    if (cache->valid && cache->d == d) return cache->value;
    cache->value = compute_coeffs(d, n_sol, u0, grid);
    cache->d = d;
    cache->valid = true;
    return cache->value;
  };
}

}  // namespace solcoll::twomode
