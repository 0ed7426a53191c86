#include <cmath>
#include <numbers>
#include <numeric>
#include <optional>

#include "output.hpp"
#include "solcoll/analysis/fragmentation.hpp"
#include "solcoll/analysis/kinematics.hpp"
#include "solcoll/analysis/reduced_model.hpp"
#include "solcoll/core/error.hpp"
#include "solcoll/core/units.hpp"
#include "solcoll/gpe/mean_field.hpp"
#include "solcoll/gpe/snapshot_io.hpp"
#include "solcoll/gpe/split_step.hpp"
#include "solcoll/gpe/tracking.hpp"
#include "solcoll/twomode/observables.hpp"
#include "solcoll/twomode/propagator.hpp"

namespace solcoll::scenario::detail {

namespace {

constexpr double kTrackSpacing = 0.05;  // time between peak-tracking samples

struct GpeRun {
  gpe::Trajectory traj;
  std::vector<gpe::Snapshot> saved;
  double norm_drift = 0.0;
  double energy_drift = 0.0;
};

std::size_t gpe_steps(const ScenarioConfig& cfg) {
  const double k = cfg.t_final / cfg.dt;
  const auto n = static_cast<std::size_t>(std::llround(k));
  if (std::abs(k - static_cast<double>(n)) > 1e-6)
    throw InvalidArgument("collision pipeline: t_final must be a multiple of dt");
  return n;
}

GpeRun run_gpe(const ScenarioConfig& cfg, double phi, bool keep_snapshots, RunManifest& m) {
  auto pair = gpe::build_soliton_pair(cfg.grid, cfg.n_sol, cfg.u0, cfg.d_ini, cfg.v_ini, phi);
  for (const auto& w : pair.warnings) m.warnings.push_back(w);
  gpe::SplitStepEvolver evolver(cfg.grid, cfg.u0, cfg.dt);
  const std::size_t n_steps = gpe_steps(cfg);
  const std::size_t track = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(kTrackSpacing / cfg.dt)));
  const std::size_t stride = std::gcd(track, cfg.snapshot_stride);

  GpeRun run;
  const double n0 = gpe::norm(pair.field);
  const double e0 = gpe::energy(pair.field, cfg.u0);
  std::vector<double> rho(cfg.grid.size());
  evolver.evolve(pair.field, n_steps, stride, [&](const gpe::MeanField& f, std::size_t step) {
    const bool last = step == n_steps;
    if (step % track == 0 || last) {
      for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = std::norm(f.psi[i]);
      const auto p = gpe::locate_peaks(cfg.grid, rho);
      run.traj.times.push_back(f.time);
      run.traj.x_left.push_back(p.x_left);
      run.traj.x_right.push_back(p.x_right);
      run.traj.d.push_back(p.resolved ? p.x_right - p.x_left : 0.0);
      run.traj.resolved.push_back(p.resolved ? 1 : 0);
    }
    if (keep_snapshots && (step % cfg.snapshot_stride == 0 || last))
      run.saved.push_back({f.time, f.psi});
  });
  gpe::compute_separation_rate(run.traj);
  run.norm_drift = std::abs(gpe::norm(pair.field) - n0) / n0;
  run.energy_drift = std::abs(gpe::energy(pair.field, cfg.u0) - e0) / std::abs(e0);
  return run;
}

twomode::NumberSuperposition initial_state(const ScenarioConfig& cfg, double phi) {
  if (cfg.number_statistics == "poissonian") return twomode::dual_coherent_state(cfg.n_sol, phi);
  return twomode::single_sector(twomode::initial_relative_coherent_state(2 * cfg.n_sol, phi));
}

struct TwoModeRun {
  std::vector<double> t, lambda_plus, lambda_minus, variance;
  std::optional<twomode::NumberDistribution> pre, post;
  twomode::PropagationStats stats;
  bool any_qualitative = false;
  bool any_filled = false;
};

// Observables at every slice; writes observables and snapshot CSVs when a
// tag is given.
TwoModeRun run_twomode(PipelineContext& ctx, const twomode::SeparationSchedule& schedule,
                       double phi, double t_pre, const std::string& tag) {
  const auto& cfg = ctx.cfg;
  const int n_tot = 2 * cfg.n_sol;
  const auto coeffs = twomode::make_coeff_provider(cfg.n_sol, cfg.u0, cfg.grid);
  auto state = initial_state(cfg, phi);

  std::unique_ptr<io::CsvWriter> obs, snap;
  if (!tag.empty()) {
    obs = ctx.out.csv("observables_" + tag + ".csv",
                      {"t", "lambda_plus", "lambda_minus", "mean_nL", "var_nL", "energy", "d",
                       "d_filled", "qualitative_only"});
    snap = ctx.out.csv("twomode_snapshots_" + tag + ".csv", {"t", "n", "re_c", "im_c"});
  }
  TwoModeRun run;
  std::size_t sample = 0;
  const double half = 0.5 * cfg.twomode_dt;
  twomode::PropagationOptions opt;
  opt.threads = cfg.threads;
  run.stats = twomode::propagate(
      state, schedule, coeffs, cfg.twomode_dt, cfg.t_final, 1,
      [&](const twomode::NumberSuperposition& s, const twomode::SliceInfo& info) {
        const auto o = twomode::obdm(s);
        const auto nd = twomode::number_distribution(s);
        run.t.push_back(info.t);
        run.lambda_plus.push_back(o.lambda_plus);
        run.lambda_minus.push_back(o.lambda_minus);
        run.variance.push_back(nd.variance);
        run.any_qualitative |= info.coeffs.qualitative_only;
        run.any_filled |= info.filled;
        if (!run.pre && info.t >= t_pre - half) run.pre = nd;
        if (info.t >= cfg.t_final - 1e-12) run.post = nd;
        if (obs) {
          obs->row({info.t, o.lambda_plus, o.lambda_minus, nd.mean, nd.variance,
                    twomode::energy(info.coeffs, s), info.d, info.filled ? 1.0 : 0.0,
                    info.coeffs.qualitative_only ? 1.0 : 0.0});
          const bool last = info.t >= cfg.t_final - 1e-12;
          if (sample % cfg.snapshot_stride == 0 || last) {
            const twomode::TwoModeState* sec = &s.sectors.front();
            for (const auto& x : s.sectors)
              if (x.n_tot == n_tot) sec = &x;
            for (std::size_t n = 0; n < sec->amplitudes.size(); ++n)
              snap->row({info.t, static_cast<double>(n), sec->amplitudes[n].real(),
                         sec->amplitudes[n].imag()});
          }
        }
        ++sample;
      },
      opt);
  if (obs) {
    obs->close();
    ctx.out.record(*obs);
    snap->close();
    ctx.out.record(*snap);
  }
  return run;
}

double mean_over(const std::vector<double>& t, const std::vector<double>& a,
                 const std::vector<double>& b, double from) {
  double s = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < t.size() && i < b.size(); ++i) {
    if (t[i] < from - 1e-9) continue;
    s += a[i] - b[i];
    ++n;
  }
  return n ? s / static_cast<double>(n) : std::numeric_limits<double>::quiet_NaN();
}

double value_at(const std::vector<double>& t, const std::vector<double>& v, double at) {
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] >= at - 1e-9) return v[i];
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

void run_collision(PipelineContext& ctx, bool kinematics) {
  const auto& cfg = ctx.cfg;
  auto& m = ctx.manifest;
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  if (!(cfg.v_ini > 0)) throw InvalidArgument("collision pipelines need v_ini > 0 (approaching pair)");

  std::vector<double> phases = cfg.phases.empty() ? std::vector<double>{cfg.phi} : cfg.phases;
  const double t_coll = analysis::collision_time(cfg.d_ini, cfg.v_ini);
  const double chi = twomode::compute_coeffs(cfg.d_ini, cfg.n_sol, cfg.u0, cfg.grid).chi;
  const auto frag = analysis::fragmentation_time(cfg.n_sol, chi);
  const auto regime = analysis::classify_collision(t_coll, frag.t_threshold);
  m.summary["t_coll"] = t_coll;
  m.summary["t_threshold"] = frag.t_threshold;
  m.summary["t_frag_analytic"] = frag.t_frag_analytic;
  m.labels["regime"] = analysis::regime_name(regime);
  m.labels["d_source"] = cfg.d_source == "gpe" ? "gpe peak tracking" : "linear ramp (fallback)";
  m.labels["number_statistics"] = cfg.number_statistics;
  if (cfg.number_statistics == "poissonian")
    m.warnings.push_back("poissonian statistics multiply the two-mode cost by the sector count");
  const bool has_post = cfg.t_final >= t_coll + cfg.collision_window;
  if (!has_post)
    m.warnings.push_back("t_final < t_coll + collision_window: post-collision metrics skipped");
  const double t_pre = std::max(0.0, t_coll - cfg.collision_window);
  const double t_after = t_coll + cfg.collision_window;

  // Mean-field runs; the phi = pi one also calibrates the reduced model.
  std::vector<GpeRun> gpe_runs;
  std::optional<std::size_t> pi_run;
  for (std::size_t p = 0; p < phases.size(); ++p) {
    const std::string tag = phase_tag(phases[p]);
    gpe_runs.push_back(run_gpe(cfg, phases[p], true, m));
    auto& run = gpe_runs.back();
    const auto rows_d = gpe::write_snapshot_csv(ctx.out.path("gpe_density_" + tag + ".csv"), cfg.grid, run.saved);
    ctx.out.record("gpe_density_" + tag + ".csv", rows_d);
    gpe::write_snapshot_cache(ctx.out.path("gpe_snapshots_" + tag + ".bin"), cfg.grid, run.saved);
    ctx.out.record("gpe_snapshots_" + tag + ".bin", run.saved.size());
    const auto rows_t = gpe::write_trajectory_csv(ctx.out.path("gpe_trajectory_" + tag + ".csv"), run.traj);
    ctx.out.record("gpe_trajectory_" + tag + ".csv", rows_t);
    run.saved.clear();
    run.saved.shrink_to_fit();
    if (std::abs(phases[p] - std::numbers::pi) < 1e-12) pi_run = p;
  }

  analysis::ReducedModelCalibration cal;
  std::string cal_note;
  const double xi = soliton_width(cfg.n_sol, cfg.u0);
  if (cfg.d_ini > 2 * xi) {
    try {
      if (pi_run) {
        cal = analysis::calibrate_reduced_model(gpe_runs[*pi_run].traj, cfg.d_ini, cfg.v_ini, cfg.n_sol, cfg.u0);
      } else {
        const auto extra = run_gpe(cfg, std::numbers::pi, false, m);
        const auto rows = gpe::write_trajectory_csv(ctx.out.path("gpe_trajectory_calibration.csv"), extra.traj);
        ctx.out.record("gpe_trajectory_calibration.csv", rows);
        cal = analysis::calibrate_reduced_model(extra.traj, cfg.d_ini, cfg.v_ini, cfg.n_sol, cfg.u0);
      }
    } catch (const InvalidArgument& ex) {
      m.warnings.push_back(std::string("reduced model not calibrated: ") + ex.what());
    }
  } else {
    m.warnings.push_back("d_ini <= 2 xi: reduced model skipped");
  }
  if (cal.valid()) m.summary["ode_amplitude"] = cal.amplitude;

  // Two-mode runs, plus a no-collision baseline at fixed d_ini.
  TwoModeRun baseline;
  if (has_post)
    baseline = run_twomode(ctx, twomode::SeparationSchedule::constant(cfg.d_ini), 0.0, t_pre, "");

  auto summary = ctx.out.csv(
      "collision_summary.csv",
      {"phi", "merged", "t_first_merge", "d_min", "t_closest", "ode_max_rel_dev", "var_pre",
       "var_post", "lambda_plus_pre", "lambda_plus_after", "lambda_minus_excess", "pre_fragmentation"});
  std::unique_ptr<io::CsvWriter> gain;
  if (kinematics)
    gain = ctx.out.csv("kinetic_gain.csv", {"phi", "p0", "mean_gain_pre", "mean_gain_post"});

  for (std::size_t p = 0; p < phases.size(); ++p) {
    const double phi = phases[p];
    const std::string tag = phase_tag(phi);
    const auto& traj = gpe_runs[p].traj;
    double t_merge = nan;
    for (std::size_t i = 0; i < traj.size(); ++i)
      if (!traj.resolved[i]) {
        t_merge = traj.times[i];
        break;
      }
    const std::size_t ic = traj.closest_approach();
    const double d_min = ic < traj.size() ? traj.d[ic] : nan;
    const double t_closest = ic < traj.size() ? traj.times[ic] : nan;
    m.summary["gpe_norm_drift_" + tag] = gpe_runs[p].norm_drift;
    m.summary["gpe_energy_drift_" + tag] = gpe_runs[p].energy_drift;

    double ode_dev = nan;
    if (cal.valid()) {
      const auto ode = analysis::effective_separation_ode(cfg.d_ini, cfg.v_ini, phi, cfg.n_sol, cfg.u0,
                                                          cfg.t_final, kTrackSpacing, cal);
      auto f = ctx.out.csv("ode_" + tag + ".csv", {"t", "d", "v", "phi"});
      for (std::size_t i = 0; i < ode.times.size(); ++i) f->row({ode.times[i], ode.d[i], ode.v[i], ode.phi[i]});
      f->close();
      ctx.out.record(*f);
      if (ic < traj.size()) ode_dev = analysis::max_relative_deviation_before_bounce(ode, traj);
    }

    const auto schedule = cfg.d_source == "gpe"
                              ? twomode::SeparationSchedule::from_trajectory(traj)
                              : twomode::SeparationSchedule::ramp(cfg.d_ini, cfg.v_ini);
    const auto tm = run_twomode(ctx, schedule, phi, t_pre, tag);
    if (tm.any_qualitative)
      m.warnings.push_back(tag + ": d(t) < 2 xi during the run; two-mode results there are qualitative only");
    if (tm.any_filled)
      m.warnings.push_back(tag + ": merged GPE peaks; d(t) gap-filled through d = 0");

    double var_pre = nan, var_post = nan, excess = nan;
    if (has_post && tm.pre && tm.post) {
      var_pre = tm.pre->variance;
      var_post = tm.post->variance;
      excess = mean_over(tm.t, tm.lambda_minus, baseline.lambda_minus, t_after);
      auto f = ctx.out.csv("number_distribution_" + tag + ".csv", {"n", "rho_pre", "rho_post"});
      for (std::size_t n = 0; n < tm.post->probabilities.size(); ++n)
        f->row({static_cast<double>(n), tm.pre->probabilities[n], tm.post->probabilities[n]});
      f->close();
      ctx.out.record(*f);

      if (kinematics) {
        const auto curve = analysis::v_of_n_curve(cfg.n_sol, cfg.v_ini, chi, 1, 2 * cfg.n_sol - 1);
        auto v = ctx.out.csv("v_of_n_" + tag + ".csv", {"n", "v", "rho_n", "contribution"});
        for (const auto& pt : curve) {
          const double rho = tm.post->probabilities[static_cast<std::size_t>(pt.n)];
          const double a = pt.n - cfg.n_sol;
          v->row({static_cast<double>(pt.n), pt.v, rho, rho * std::abs(chi) * a * a});
        }
        v->close();
        ctx.out.record(*v);
        const double g_pre = analysis::mean_kinetic_gain(tm.pre->probabilities, cfg.n_sol, chi);
        const double g_post = analysis::mean_kinetic_gain(tm.post->probabilities, cfg.n_sol, chi);
        gain->row({phi, cfg.v_ini, g_pre, g_post});
        m.summary["mean_gain_pre_" + tag] = g_pre;
        m.summary["mean_gain_post_" + tag] = g_post;
      }
    }
    const double lp_pre = value_at(tm.t, tm.lambda_plus, t_pre);
    const double lp_after = value_at(tm.t, tm.lambda_plus, t_after);
    summary->row({phi, traj.any_unresolved() ? 1.0 : 0.0, t_merge, d_min, t_closest, ode_dev, var_pre,
                  var_post, lp_pre, lp_after, excess,
                  regime == analysis::CollisionRegime::PreFragmentation ? 1.0 : 0.0});
    m.summary["merged_" + tag] = traj.any_unresolved() ? 1.0 : 0.0;
    m.summary["t_first_merge_" + tag] = t_merge;
    m.summary["d_min_" + tag] = d_min;
    m.summary["ode_max_rel_dev_" + tag] = ode_dev;
    m.summary["var_pre_" + tag] = var_pre;
    m.summary["var_post_" + tag] = var_post;
    m.summary["lambda_minus_excess_" + tag] = excess;
    m.summary["krylov_steps_" + tag] = static_cast<double>(tm.stats.krylov_steps);
  }
  summary->close();
  ctx.out.record(*summary);
  if (gain) {
    gain->close();
    ctx.out.record(*gain);
  }
}

}  // namespace solcoll::scenario::detail
