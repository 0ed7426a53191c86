#include "solcoll/twomode/observables.hpp"

#include <algorithm>
#include <cmath>

#include "solcoll/core/error.hpp"

namespace solcoll::twomode {

namespace {

struct Moments {
  double aa = 0.0;
  cplx ab;
};

// [first, last) of the nonzero amplitudes; the propagator zeroes the tails.
std::pair<std::size_t, std::size_t> support(const std::vector<cplx>& c) {
  std::size_t first = 0, last = c.size();
  while (first < last && c[first] == cplx{}) ++first;
  while (last > first && c[last - 1] == cplx{}) --last;
  return {first, last};
}

Moments sector_moments(const TwoModeState& s) {
  Moments m;
  const auto& c = s.amplitudes;
  const int n_tot = s.n_tot;
  const auto [first, last] = support(c);
  for (std::size_t n = first; n < last; ++n) {
    m.aa += static_cast<double>(n) * std::norm(c[n]);
    // a^+ b |n, N-n> = sqrt((n+1)(N-n)) |n+1, N-n-1>
    if (n + 1 < c.size())
      m.ab += std::conj(c[n + 1]) * c[n] *
              std::sqrt((static_cast<double>(n) + 1.0) * (n_tot - static_cast<double>(n)));
  }
  return m;
}

OBDM finish(double aa, double bb, cplx ab, double total) {
  OBDM o;
  o.aa = aa;
  o.bb = bb;
  o.ab = ab;
  const double half_tr = 0.5 * (aa + bb);
  const double disc = std::sqrt(0.25 * (aa - bb) * (aa - bb) + std::norm(ab));
  o.lambda_plus = (half_tr + disc) / total;
  o.lambda_minus = (half_tr - disc) / total;
  return o;
}

}  // namespace

OBDM obdm(const TwoModeState& s) {
  const auto m = sector_moments(s);
  const double nrm = s.norm_sq();
  const double aa = m.aa / nrm;
  return finish(aa, s.n_tot - aa, m.ab / nrm, static_cast<double>(s.n_tot));
}

OBDM obdm(const NumberSuperposition& s) {
  double aa = 0.0, total = 0.0;
  cplx ab;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto m = sector_moments(s.sectors[i]);
    const double w = s.weights[i] / s.sectors[i].norm_sq();
    aa += w * m.aa;
    ab += w * m.ab;
    total += s.weights[i] * s.sectors[i].n_tot;
  }
  const double wsum = s.total_weight();
  aa /= wsum;
  ab /= wsum;
  total /= wsum;
  return finish(aa, total - aa, ab, total);
}

namespace {

void finish_moments(NumberDistribution& d) {
  double mean = 0.0;
  for (std::size_t n = 0; n < d.probabilities.size(); ++n)
    mean += static_cast<double>(n) * d.probabilities[n];
  double var = 0.0;
  for (std::size_t n = 0; n < d.probabilities.size(); ++n) {
    const double dn = static_cast<double>(n) - mean;
    var += dn * dn * d.probabilities[n];
  }
  d.mean = mean;
  d.variance = var;
}

}  // namespace

NumberDistribution number_distribution(const TwoModeState& s) {
  NumberDistribution d;
  const double nrm = s.norm_sq();
  d.probabilities.resize(s.dim());
  for (std::size_t n = 0; n < s.dim(); ++n) d.probabilities[n] = std::norm(s.amplitudes[n]) / nrm;
  finish_moments(d);
  return d;
}

NumberDistribution number_distribution(const NumberSuperposition& s) {
  NumberDistribution d;
  std::size_t max_dim = 0;
  for (const auto& sec : s.sectors) max_dim = std::max(max_dim, sec.dim());
  d.probabilities.assign(max_dim, 0.0);
  const double wsum = s.total_weight();
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto& sec = s.sectors[i];
    const double w = s.weights[i] / (wsum * sec.norm_sq());
    const auto [first, last] = support(sec.amplitudes);
    for (std::size_t n = first; n < last; ++n) d.probabilities[n] += w * std::norm(sec.amplitudes[n]);
  }
  finish_moments(d);
  return d;
}

double expectation(const BandedHamiltonian& h, const TwoModeState& s) {
  if (h.dim() != s.dim()) throw InvalidArgument("expectation: dimension mismatch");
  std::vector<cplx> y(s.dim());
  h.apply(s.amplitudes, y);
  cplx acc;
  for (std::size_t i = 0; i < y.size(); ++i) acc += std::conj(s.amplitudes[i]) * y[i];
  return acc.real() / s.norm_sq();
}

double energy(const TwoModeCoeffs& c, const TwoModeState& s) {
  const auto& a = s.amplitudes;
  const std::size_t dim = a.size();
  const auto [first, last] = support(a);
  if (first == last) throw InvalidArgument("energy: zero state");
  double diag = 0.0;
  cplx off;
  for (std::size_t i = first; i < last; ++i) {
    const double n = static_cast<double>(i);
    diag += std::norm(a[i]) * diag_element(c, s.n_tot, n);
    if (i + 1 < dim) off += std::conj(a[i + 1]) * a[i] * off1_element(c, s.n_tot, n);
    if (i + 2 < dim) off += std::conj(a[i + 2]) * a[i] * off2_element(c, s.n_tot, n);
  }
  return (diag + 2.0 * off.real()) / s.norm_sq();
}

double energy(const TwoModeCoeffs& c, const NumberSuperposition& s) {
  double acc = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) acc += s.weights[j] * energy(c, s.sectors[j]);
  return acc / s.total_weight();
}

}  // namespace solcoll::twomode
