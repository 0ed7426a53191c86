#include "solcoll/twomode/husimi.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <numbers>
#include <sstream>
#include <thread>

#include "solcoll/core/error.hpp"

namespace solcoll::twomode {

double PolarGrid::dtheta() const noexcept {
  return 2.0 * std::numbers::pi / static_cast<double>(n_angular);
}

cplx PolarGrid::alpha(std::size_t i, std::size_t k) const noexcept {
  return std::polar(r(i), theta(k));
}

PolarGrid default_polar_grid(double mean_total, std::size_t n_radial, std::size_t n_angular) {
  if (!(mean_total > 0)) throw InvalidArgument("default_polar_grid: mean_total must be positive");
  PolarGrid g;
  g.r_max = std::sqrt(mean_total);
  // Coherent-state radial width is 1/sqrt(2); five cells across it.
  g.n_radial = n_radial ? n_radial : static_cast<std::size_t>(std::ceil(g.r_max / 0.2));
  if (n_angular) {
    g.n_angular = n_angular;
  } else {
    const double want = 16.0 * std::sqrt(0.5 * mean_total);
    std::size_t m = 64;
    while (static_cast<double>(m) < want) m *= 2;
    g.n_angular = m;
  }
  return g;
}

namespace {

// Left-mode amplitudes grouped by right-mode occupation m:
// |Psi> = sum_m sum_n C(n, m) |n>_L |m>_R.
struct Entry {
  int n;
  cplx amp;
};
using Columns = std::map<int, std::vector<Entry>>;

Columns columns_of(const NumberSuperposition& s) {
  if (s.sectors.empty()) throw InvalidArgument("husimi: empty state");
  const double wsum = s.total_weight();
  Columns cols;
  for (std::size_t j = 0; j < s.size(); ++j) {
    const auto& sec = s.sectors[j];
    const double sw = std::sqrt(s.weights[j] / wsum);
    double peak = 0.0;
    for (const auto& z : sec.amplitudes) peak = std::max(peak, std::abs(z));
    const double cut = 1e-16 * peak;
    for (int n = 0; n <= sec.n_tot; ++n) {
      const cplx c = sec.amplitudes[static_cast<std::size_t>(n)];
      if (std::abs(c) <= cut) continue;
      cols[sec.n_tot - n].push_back({n, sw * c});
    }
  }
  return cols;
}

// ln( r^n / sqrt(n!) ) - r^2/2
double log_overlap(double r, int n) {
  return -0.5 * r * r + n * std::log(r) - 0.5 * std::lgamma(n + 1.0);
}

template <class F>
void run_partitioned(std::size_t count, unsigned threads, F&& work) {
  const unsigned nw = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (nw <= 1) {
    for (std::size_t i = 0; i < count; ++i) work(i, 0u);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(nw);
  for (unsigned w = 0; w < nw; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += nw) work(i, w);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

void check_reach(const NumberSuperposition& s, double r_max2, std::vector<std::string>& warnings) {
  int n_max = 0;
  for (const auto& sec : s.sectors) n_max = std::max(n_max, sec.n_tot);
  const double target = std::min<double>(n_max, s.mean_total());
  if (r_max2 < target * (1.0 - 1e-12)) {
    std::ostringstream msg;
    msg << "husimi grid reaches |alpha|^2 = " << r_max2 << " < N_tot = " << target
        << "; the peak may be clipped";
    warnings.push_back(msg.str());
  }
}

}  // namespace

std::vector<double> husimi_q(const NumberSuperposition& s, std::span<const cplx> alphas,
                             unsigned threads) {
  const Columns cols = columns_of(s);
  std::vector<double> q(alphas.size(), 0.0);
  run_partitioned(alphas.size(), threads, [&](std::size_t a, unsigned) {
    const cplx alpha = alphas[a];
    const double r = std::abs(alpha);
    const double th = std::arg(alpha);
    double acc = 0.0;
    for (const auto& [m, entries] : cols) {
      cplx sum;
      for (const auto& e : entries) {
        // <alpha|n> = e^{-|alpha|^2/2} conj(alpha)^n / sqrt(n!)
        const double mag = r == 0.0 ? (e.n == 0 ? 1.0 : 0.0) : std::exp(log_overlap(r, e.n));
        sum += std::polar(mag, -e.n * th) * e.amp;
      }
      acc += std::norm(sum);
    }
    q[a] = acc;
  });
  return q;
}

std::vector<double> husimi_q(const TwoModeState& s, std::span<const cplx> alphas,
                             unsigned threads) {
  return husimi_q(single_sector(s), alphas, threads);
}

HusimiGrid husimi_polar(const NumberSuperposition& s, const PolarGrid& grid, unsigned threads) {
  if (grid.n_radial == 0 || grid.n_angular == 0 || !(grid.r_max > 0))
    throw InvalidArgument("husimi_polar: empty grid");
  const Columns cols = columns_of(s);
  HusimiGrid out;
  out.grid = grid;
  out.q.assign(grid.n_radial * grid.n_angular, 0.0);
  check_reach(s, grid.r_max * grid.r_max, out.warnings);

  const unsigned nw = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(grid.n_radial)));
  std::vector<FftPair> ffts;
  ffts.reserve(nw);
  for (unsigned w = 0; w < nw; ++w) ffts.emplace_back(grid.n_angular);
  const auto M = static_cast<long>(grid.n_angular);
  // Contributions below e^{-80} of unity cannot affect any stored digit of a
  // peak that is O(1).
  constexpr double kSkip = -80.0;

  int n_max = 0;
  for (const auto& [m, entries] : cols)
    for (const auto& e : entries) n_max = std::max(n_max, e.n);
  std::vector<double> half_lgamma(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n)
    half_lgamma[static_cast<std::size_t>(n)] = 0.5 * std::lgamma(n + 1.0);
  std::vector<double> col_peak;  // largest |amp| per column
  for (const auto& [m, entries] : cols) {
    double p = 0.0;
    for (const auto& e : entries) p = std::max(p, std::abs(e.amp));
    col_peak.push_back(p);
  }
  std::vector<std::vector<double>> overlap(nw, std::vector<double>(half_lgamma.size()));

  run_partitioned(grid.n_radial, nw, [&](std::size_t i, unsigned w) {
    const double r = grid.r(i);
    auto buf = ffts[w].buffer();
    double* row = out.q.data() + i * grid.n_angular;
    // |<alpha|n>| for this radius; entries below the double range are 0
    auto& ov = overlap[w];
    const double lr = r > 0.0 ? std::log(r) : 0.0;
    for (std::size_t n = 0; n < ov.size(); ++n) {
      if (r == 0.0) {
        ov[n] = n == 0 ? 1.0 : 0.0;
        continue;
      }
      ov[n] = std::exp(-0.5 * r * r + static_cast<double>(n) * lr - half_lgamma[n]);
    }
    std::size_t c = 0;
    for (const auto& [m, entries] : cols) {
      (void)m;
      const double peak = col_peak[c++];
      double best = 0.0;
      for (const auto& e : entries) best = std::max(best, ov[static_cast<std::size_t>(e.n)]);
      if (best * peak < std::exp(kSkip)) continue;
      std::fill(buf.begin(), buf.end(), cplx{});
      for (const auto& e : entries)
        buf[static_cast<std::size_t>(e.n % M)] += ov[static_cast<std::size_t>(e.n)] * e.amp;
      // Forward transform: sum_n x_n e^{-i n theta_k}.
      ffts[w].forward();
      for (std::size_t k = 0; k < grid.n_angular; ++k) row[k] += std::norm(buf[k]);
    }
  });
  return out;
}

HusimiGrid husimi_polar(const TwoModeState& s, const PolarGrid& grid, unsigned threads) {
  return husimi_polar(single_sector(s), grid, threads);
}

HusimiDiagnostics diagnose(const HusimiGrid& h) {
  const auto& g = h.grid;
  HusimiDiagnostics d;
  d.radial_marginal.assign(g.n_radial, 0.0);
  d.angular_marginal.assign(g.n_angular, 0.0);
  const double dr = g.dr(), dth = g.dtheta();
  double qmax = -1.0;
  std::size_t imax = 0, kmax = 0;
  for (std::size_t i = 0; i < g.n_radial; ++i) {
    for (std::size_t k = 0; k < g.n_angular; ++k) {
      const double v = h.at(i, k);
      const double cell = v * g.r(i) / std::numbers::pi;
      d.radial_marginal[i] += cell * dth;
      d.angular_marginal[k] += cell * dr;
      if (v > qmax) {
        qmax = v;
        imax = i;
        kmax = k;
      }
    }
  }
  for (double v : d.radial_marginal) d.normalization += v * dr;
  d.peak_r = g.r(imax);
  d.peak_theta = std::arg(std::polar(1.0, g.theta(kmax)));

  auto circ = [&](auto&& weight) {
    cplx z;
    double tot = 0.0;
    for (std::size_t k = 0; k < g.n_angular; ++k) {
      const double wk = weight(k);
      z += wk * std::polar(1.0, g.theta(k));
      tot += wk;
    }
    return tot > 0 ? 1.0 - std::abs(z) / tot : 0.0;
  };
  d.circular_variance = circ([&](std::size_t k) { return d.angular_marginal[k]; });
  d.half_max_circular_variance = circ([&](std::size_t k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < g.n_radial; ++i)
      if (h.at(i, k) >= 0.5 * qmax) acc += g.r(i);
    return acc;
  });
  return d;
}

}  // namespace solcoll::twomode
