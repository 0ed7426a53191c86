#include "solcoll/analysis/fragmentation.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace solcoll::analysis {

LambdaPair lambda_analytic(double t, int n_sol, double chi) {
  if (n_sol < 1) throw InvalidArgument("lambda_analytic: n_sol must be >= 1");
  LambdaPair out;
  const double e = std::exp(2.0 * n_sol * (std::cos(chi * t) - 1.0));
  out.plus = 0.5 * (1.0 + e);
  out.minus = 0.5 * (1.0 - e);
  const double g = std::exp(-n_sol * chi * chi * t * t);
  out.gaussian_plus = 0.5 * (1.0 + g);
  out.gaussian_minus = 0.5 * (1.0 - g);
  return out;
}

FragmentationReport fragmentation_time(int n_sol, double chi, double threshold) {
  if (chi == 0.0) throw NoPhaseDiffusion();
  if (n_sol < 1) throw InvalidArgument("fragmentation_time: n_sol must be >= 1");
  if (!(threshold > 0.0 && threshold < 1.0))
    throw InvalidArgument("fragmentation_time: threshold must lie in (0, 1)");
  FragmentationReport r;
  r.n_sol = n_sol;
  r.chi = chi;
  r.threshold = threshold;
  r.t_frag_analytic = 1.0 / (std::sqrt(static_cast<double>(n_sol)) * std::abs(chi));

  // |lambda_+ - lambda_-| = e^{2N(cos chi t - 1)} falls monotonically on [0, pi/|chi|].
  auto split = [&](double t) { return std::exp(2.0 * n_sol * (std::cos(chi * t) - 1.0)); };
  double lo = 0.0, hi = std::numbers::pi / std::abs(chi);
  if (split(hi) > threshold) {
    r.t_threshold = std::numeric_limits<double>::infinity();
    return r;
  }
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    (split(mid) > threshold ? lo : hi) = mid;
  }
  r.t_threshold = 0.5 * (lo + hi);
  return r;
}

double first_threshold_crossing(std::span<const double> t, std::span<const double> lambda_plus,
                                std::span<const double> lambda_minus, double threshold) {
  if (t.size() != lambda_plus.size() || t.size() != lambda_minus.size())
    throw InvalidArgument("first_threshold_crossing: length mismatch");
  for (std::size_t i = 1; i < t.size(); ++i) {
    const double a = std::abs(lambda_plus[i - 1] - lambda_minus[i - 1]) - threshold;
    const double b = std::abs(lambda_plus[i] - lambda_minus[i]) - threshold;
    if (a > 0 && b <= 0) return t[i - 1] + (t[i] - t[i - 1]) * a / (a - b);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace solcoll::analysis
