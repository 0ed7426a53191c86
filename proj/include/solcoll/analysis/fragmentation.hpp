#pragma once

#include <span>
#include <string>

#include "solcoll/core/error.hpp"

namespace solcoll::analysis {

// Thrown when chi = 0: there is no phase diffusion and t_frag is infinite.
class NoPhaseDiffusion : public InvalidArgument {
 public:
  NoPhaseDiffusion() : InvalidArgument("no phase diffusion; t_frag infinite (chi = 0)") {}
};

struct LambdaPair {
  double plus = 1.0;
  double minus = 0.0;
  // Short-time form (1 +- e^{-(t/t_frag)^2})/2.
  double gaussian_plus = 1.0;
  double gaussian_minus = 0.0;
};

// (1 +- e^{2 N [cos(chi t) - 1]})/2 for a dual coherent pair at J = 0.
LambdaPair lambda_analytic(double t, int n_sol, double chi);

struct FragmentationReport {
  int n_sol = 0;
  double chi = 0.0;
  double threshold = 0.2;
  double t_frag_analytic = 0.0;  // 1/(sqrt(N) |chi|)
  double t_threshold = 0.0;      // first |lambda_+ - lambda_-| = threshold
  std::string lambda_series;     // file holding the propagated series, if any

  double ratio() const noexcept { return t_threshold / t_frag_analytic; }
};

// Threshold time by bisection on [0, pi/|chi|] to 1e-10.
FragmentationReport fragmentation_time(int n_sol, double chi, double threshold = 0.2);

// First crossing of |lambda_+ - lambda_-| = threshold in a sampled series,
// linearly interpolated. NaN when the series never crosses.
double first_threshold_crossing(std::span<const double> t, std::span<const double> lambda_plus,
                                std::span<const double> lambda_minus, double threshold = 0.2);

}  // namespace solcoll::analysis
