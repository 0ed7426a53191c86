#include <cmath>
#include <sstream>

#include "output.hpp"
#include "solcoll/analysis/fragmentation.hpp"
#include "solcoll/core/error.hpp"
#include "solcoll/twomode/husimi.hpp"
#include "solcoll/twomode/observables.hpp"
#include "solcoll/twomode/propagator.hpp"

namespace solcoll::scenario::detail {

namespace {

twomode::NumberSuperposition initial_state(const ScenarioConfig& cfg) {
  if (cfg.number_statistics == "poissonian") return twomode::dual_coherent_state(cfg.n_sol, cfg.phi);
  return twomode::single_sector(twomode::initial_relative_coherent_state(2 * cfg.n_sol, cfg.phi));
}

std::string time_tag(double t) {
  std::ostringstream s;
  s << t;
  return s.str();
}

// Sector used for the amplitude dump: the one holding 2 N_sol atoms.
const twomode::TwoModeState& central_sector(const twomode::NumberSuperposition& s, int n_tot) {
  for (const auto& sec : s.sectors)
    if (sec.n_tot == n_tot) return sec;
  return s.sectors.front();
}

}  // namespace

void run_fragmentation(PipelineContext& ctx) {
  const auto& cfg = ctx.cfg;
  auto& m = ctx.manifest;
  const int n_tot = 2 * cfg.n_sol;

  const auto coeffs = twomode::make_coeff_provider(cfg.n_sol, cfg.u0, cfg.grid);
  const auto schedule = cfg.v_ini == 0.0 ? twomode::SeparationSchedule::constant(cfg.d_ini)
                                          : twomode::SeparationSchedule::ramp(cfg.d_ini, cfg.v_ini);
  const auto c0 = coeffs(cfg.d_ini);
  const double chi = c0.chi;
  m.summary["chi"] = chi;
  m.summary["chi_closed_form"] = twomode::chi_closed_form(cfg.n_sol, cfg.u0);
  m.summary["J"] = c0.J;
  m.summary["Ubar"] = c0.Ubar;
  m.summary["Jbar"] = c0.Jbar;
  m.labels["d_source"] = schedule.source();
  if (c0.qualitative_only) m.warnings.push_back("d_ini < 2 xi: coefficients are qualitative only");

  // Husimi requests must land on the sampling grid.
  std::vector<double> q_pending;
  for (double tq : cfg.q_times) {
    if (tq > cfg.t_final + 1e-9) {
      m.warnings.push_back("q_time " + time_tag(tq) + " lies beyond t_final and is skipped");
      continue;
    }
    const double k = tq / cfg.dt;
    if (std::abs(k - std::round(k)) > 1e-6 && std::abs(tq - cfg.t_final) > 1e-9)
      throw InvalidArgument("q_time " + time_tag(tq) + " is not a multiple of dt");
    q_pending.push_back(tq);
  }

  auto state = initial_state(cfg);
  m.summary["sectors"] = static_cast<double>(state.size());
  m.labels["number_statistics"] = cfg.number_statistics;

  auto obs = ctx.out.csv("observables.csv",
                         {"t", "lambda_plus", "lambda_minus", "mean_nL", "var_nL", "energy"});
  auto ana = ctx.out.csv("lambda_analytic.csv",
                         {"t", "lambda_plus", "lambda_minus", "gaussian_plus", "gaussian_minus"});
  auto snap = ctx.out.csv("twomode_snapshots.csv", {"t", "n", "re_c", "im_c"});
  auto qdiag = ctx.out.csv("husimi_diagnostics.csv",
                           {"t", "normalization", "circular_variance", "half_max_circular_variance",
                            "peak_r", "peak_theta"});
  auto qrad = ctx.out.csv("husimi_radial.csv", {"t", "r", "marginal"});

  std::vector<double> ts, lp, lm;
  std::size_t sample = 0;
  double sup_dev = 0.0;
  const auto observer = [&](const twomode::NumberSuperposition& s, const twomode::SliceInfo& info) {
    const auto o = twomode::obdm(s);
    const auto nd = twomode::number_distribution(s);
    const double e = twomode::energy(info.coeffs, s);
    obs->row({info.t, o.lambda_plus, o.lambda_minus, nd.mean, nd.variance, e});
    const auto la = analysis::lambda_analytic(info.t, cfg.n_sol, chi);
    ana->row({info.t, la.plus, la.minus, la.gaussian_plus, la.gaussian_minus});
    sup_dev = std::max(sup_dev, std::abs(o.lambda_plus - la.plus));
    ts.push_back(info.t);
    lp.push_back(o.lambda_plus);
    lm.push_back(o.lambda_minus);

    const bool last = info.t >= cfg.t_final - 1e-12;
    if (sample % cfg.snapshot_stride == 0 || last) {
      const auto& sec = central_sector(s, n_tot);
      for (std::size_t n = 0; n < sec.amplitudes.size(); ++n)
        snap->row({info.t, static_cast<double>(n), sec.amplitudes[n].real(), sec.amplitudes[n].imag()});
    }
    ++sample;

    for (auto it = q_pending.begin(); it != q_pending.end();) {
      if (std::abs(*it - info.t) > 1e-6 * std::max(1.0, cfg.dt)) {
        ++it;
        continue;
      }
      const auto grid = twomode::default_polar_grid(s.mean_total(), cfg.q_radial, cfg.q_angular);
      const auto q = twomode::husimi_polar(s, grid, cfg.threads);
      for (const auto& w : q.warnings) m.warnings.push_back(w);
      const std::string name = "husimi_t" + time_tag(*it) + ".csv";
      auto f = ctx.out.csv(name, {"re_alpha", "im_alpha", "q"});
      for (std::size_t i = 0; i < grid.n_radial; ++i)
        for (std::size_t k = 0; k < grid.n_angular; ++k) {
          const auto a = grid.alpha(i, k);
          f->row({a.real(), a.imag(), q.at(i, k)});
        }
      f->close();
      ctx.out.record(*f);
      const auto d = twomode::diagnose(q);
      qdiag->row({*it, d.normalization, d.circular_variance, d.half_max_circular_variance, d.peak_r,
                  d.peak_theta});
      for (std::size_t i = 0; i < grid.n_radial; ++i) qrad->row({*it, grid.r(i), d.radial_marginal[i]});
      m.summary["circular_variance_t" + time_tag(*it)] = d.circular_variance;
      it = q_pending.erase(it);
    }
  };

  twomode::PropagationOptions opt;
  opt.threads = cfg.threads;
  const auto stats = twomode::propagate(state, schedule, coeffs, cfg.dt, cfg.t_final, 1, observer, opt);
  for (double tq : q_pending) m.warnings.push_back("q_time " + time_tag(tq) + " was never sampled");

  for (auto* w : {obs.get(), ana.get(), snap.get(), qdiag.get(), qrad.get()}) {
    w->close();
    ctx.out.record(*w);
  }

  auto report = analysis::fragmentation_time(cfg.n_sol, chi);
  report.lambda_series = "observables.csv";
  const double t_series = analysis::first_threshold_crossing(ts, lp, lm, report.threshold);
  auto rep = ctx.out.csv("fragmentation_report.csv",
                         {"n_sol", "chi", "threshold", "t_frag_analytic", "t_threshold", "ratio",
                          "t_threshold_series"});
  rep->row({static_cast<double>(cfg.n_sol), chi, report.threshold, report.t_frag_analytic,
            report.t_threshold, report.ratio(), t_series});
  rep->close();
  ctx.out.record(*rep);

  m.summary["t_frag_analytic"] = report.t_frag_analytic;
  m.summary["t_threshold"] = report.t_threshold;
  m.summary["t_threshold_series"] = t_series;
  m.summary["lambda_sup_deviation"] = sup_dev;
  m.summary["max_norm_drift"] = stats.max_norm_drift;
  m.summary["krylov_steps"] = static_cast<double>(stats.krylov_steps);
  m.summary["weak_steps"] = static_cast<double>(stats.weak_steps);
  if (cfg.number_statistics == "fixed")
    m.warnings.push_back("fixed total number: lambda(t) deviates from the Poissonian closed form");
}

}  // namespace solcoll::scenario::detail
