#include "solcoll/twomode/state.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "solcoll/core/error.hpp"

namespace solcoll::twomode {

double TwoModeState::norm_sq() const noexcept {
  double s = 0.0;
  for (const auto& z : amplitudes) s += std::norm(z);
  return s;
}

namespace {

double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace

TwoModeState initial_relative_coherent_state(int n_tot, double phi) {
  if (n_tot < 2) throw InvalidArgument("initial_relative_coherent_state: n_tot must be >= 2");
  if (n_tot % 2 != 0)
    throw InvalidArgument("initial_relative_coherent_state: n_tot must be even (two equal solitons)");
  TwoModeState s;
  s.n_tot = n_tot;
  s.amplitudes.resize(static_cast<std::size_t>(n_tot) + 1);
  const double log_half = n_tot * std::log(0.5);
  for (int n = 0; n <= n_tot; ++n) {
    const double mag = std::exp(0.5 * (log_binomial(n_tot, n) + log_half));
    s.amplitudes[static_cast<std::size_t>(n)] = std::polar(mag, (n_tot - n) * phi);
  }
  const double nrm = std::sqrt(s.norm_sq());
  for (auto& z : s.amplitudes) z /= nrm;
  return s;
}

TwoModeState fock_state(int n_tot, int n_left) {
  if (n_tot < 0 || n_left < 0 || n_left > n_tot) throw InvalidArgument("fock_state: bad occupation");
  TwoModeState s;
  s.n_tot = n_tot;
  s.amplitudes.assign(static_cast<std::size_t>(n_tot) + 1, cplx{});
  s.amplitudes[static_cast<std::size_t>(n_left)] = 1.0;
  return s;
}

TwoModeState mirror(const TwoModeState& s) {
  TwoModeState m = s;
  std::reverse(m.amplitudes.begin(), m.amplitudes.end());
  return m;
}

double NumberSuperposition::total_weight() const noexcept {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

double NumberSuperposition::mean_total() const noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < sectors.size(); ++i) s += weights[i] * sectors[i].n_tot;
  return s / total_weight();
}

NumberSuperposition single_sector(TwoModeState s) {
  NumberSuperposition out;
  out.weights.push_back(1.0);
  out.sectors.push_back(std::move(s));
  return out;
}

NumberSuperposition dual_coherent_state(int n_sol, double phi, double weight_cutoff) {
  if (n_sol < 1) throw InvalidArgument("dual_coherent_state: n_sol must be >= 1");
  const double mean = 2.0 * n_sol;
  auto log_poisson = [&](int n) { return -mean + n * std::log(mean) - std::lgamma(n + 1.0); };
  const int peak = static_cast<int>(std::floor(mean));
  const double log_peak = log_poisson(peak);
  const double log_cut = std::log(weight_cutoff);

  int lo = peak, hi = peak;
  while (lo > 0 && log_poisson(lo - 1) - log_peak > log_cut) --lo;
  while (log_poisson(hi + 1) - log_peak > log_cut) ++hi;

  NumberSuperposition out;
  for (int n_tot = lo; n_tot <= hi; ++n_tot) {
    TwoModeState s;
    s.n_tot = n_tot;
    s.amplitudes.resize(static_cast<std::size_t>(n_tot) + 1);
    const double log_half = n_tot * std::log(0.5);
    for (int n = 0; n <= n_tot; ++n) {
      const double mag = std::exp(0.5 * (log_binomial(n_tot, n) + log_half));
      s.amplitudes[static_cast<std::size_t>(n)] = std::polar(mag, -n * phi);
    }
    const double nrm = std::sqrt(s.norm_sq());
    for (auto& z : s.amplitudes) z /= nrm;
    out.weights.push_back(std::exp(log_poisson(n_tot) - log_peak));
    out.sectors.push_back(std::move(s));
  }
  const double total = out.total_weight();
  for (auto& w : out.weights) w /= total;
  return out;
}

}  // namespace solcoll::twomode
