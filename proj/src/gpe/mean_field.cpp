#include "solcoll/gpe/mean_field.hpp"

#include <cmath>
#include <numeric>

#include "solcoll/core/error.hpp"
#include "solcoll/core/units.hpp"

namespace solcoll::gpe {

double norm(const MeanField& f) {
  double s = 0.0;
  for (const auto& z : f.psi) s += std::norm(z);
  return s * f.grid.dx();
}

std::vector<double> density(const MeanField& f) {
  std::vector<double> rho(f.psi.size());
  for (std::size_t i = 0; i < f.psi.size(); ++i) rho[i] = std::norm(f.psi[i]);
  return rho;
}

namespace {

// Parseval weights: sum_j |f_j|^2 dx = dx/n sum_k |F_k|^2.
std::vector<cplx> spectrum(const MeanField& f) {
  FftPair fft(f.grid.size());
  auto buf = fft.buffer();
  std::copy(f.psi.begin(), f.psi.end(), buf.begin());
  fft.forward();
  return {buf.begin(), buf.end()};
}

}  // namespace

double energy(const MeanField& f, double u0) {
  const auto F = spectrum(f);
  const auto k = f.grid.wavenumbers();
  const double w = f.grid.dx() / static_cast<double>(f.grid.size());
  double kin = 0.0;
  for (std::size_t j = 0; j < F.size(); ++j) kin += k[j] * k[j] * std::norm(F[j]);
  kin *= 0.5 * w;
  double inter = 0.0;
  for (const auto& z : f.psi) inter += std::norm(z) * std::norm(z);
  inter *= 0.5 * u0 * f.grid.dx();
  return kin + inter;
}

double momentum(const MeanField& f) {
  const auto F = spectrum(f);
  const auto k = f.grid.wavenumbers();
  const std::size_t nyquist = f.grid.size() / 2;
  double p = 0.0;
  for (std::size_t j = 0; j < F.size(); ++j)
    if (j != nyquist) p += k[j] * std::norm(F[j]);
  return p * f.grid.dx() / static_cast<double>(f.grid.size());
}

double center_of_mass(const MeanField& f) {
  double m0 = 0.0, m1 = 0.0;
  for (std::size_t i = 0; i < f.psi.size(); ++i) {
    const double r = std::norm(f.psi[i]);
    m0 += r;
    m1 += r * f.grid.x(i);
  }
  if (m0 <= 0) throw InvalidArgument("center_of_mass: zero field");
  return m1 / m0;
}

void add_soliton(MeanField& f, double n_sol, double u0, double center, double velocity,
                 double phase) {
  const double xi = soliton_width(n_sol, u0);
  const double L = f.grid.length();
  std::vector<double> shape(f.grid.size());
  for (std::size_t i = 0; i < shape.size(); ++i) {
    // Minimum-image distance keeps the profile periodic on the box.
    double y = f.grid.x(i) - center;
    y -= L * std::round(y / L);
    shape[i] = 1.0 / std::cosh(y / xi);
  }
  double s2 = 0.0;
  for (double v : shape) s2 += v * v;
  s2 *= f.grid.dx();
  const double amp = std::sqrt(n_sol / s2);
  for (std::size_t i = 0; i < shape.size(); ++i) {
    const double x = f.grid.x(i);
    f.psi[i] += amp * shape[i] * std::polar(1.0, velocity * x + phase);
  }
}

MeanField make_soliton(const Grid1D& grid, double n_sol, double u0, double center,
                       double velocity, double phase) {
  MeanField f(grid);
  add_soliton(f, n_sol, u0, center, velocity, phase);
  return f;
}

SolitonPair build_soliton_pair(const Grid1D& grid, int n_sol, double u0, double d, double v,
                               double phi) {
  if (d < 0) throw InvalidArgument("build_soliton_pair: d_ini must be non-negative");
  grid.require_width_for(d);
  const double xi = soliton_width(n_sol, u0);
  SolitonPair out{MeanField(grid), xi, {}};
  if (d < 2.0 * xi)
    out.warnings.push_back("solitons overlap strongly (d_ini < 2 xi); per-soliton "
                           "normalisation is ambiguous");
  add_soliton(out.field, n_sol, u0, -0.5 * d, v, 0.0);
  add_soliton(out.field, n_sol, u0, 0.5 * d, -v, phi);
  return out;
}

SolitonPair build_soliton_pair(const ScenarioConfig& cfg) {
  return build_soliton_pair(cfg.grid, cfg.n_sol, cfg.u0, cfg.d_ini, cfg.v_ini, cfg.phi);
}

}  // namespace solcoll::gpe
