#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <utility>

#include "solcoll/analysis/fragmentation.hpp"
#include "solcoll/core/error.hpp"
#include "solcoll/twomode/coeffs.hpp"
#include "solcoll/twomode/hamiltonian.hpp"
#include "solcoll/twomode/husimi.hpp"
#include "solcoll/twomode/observables.hpp"
#include "solcoll/twomode/propagator.hpp"
#include "solcoll/twomode/state.hpp"

using namespace solcoll;
using namespace solcoll::twomode;

namespace {

// Sparse vector over (n_a, n_b) with ladder operators acting on it. Used only
// as an oracle for the banded matrix.
using Ket = std::map<std::pair<int, int>, double>;

enum class Op { A, Ad, B, Bd };

Ket apply_op(Op op, const Ket& k) {
  Ket out;
  for (const auto& [occ, amp] : k) {
    auto [na, nb] = occ;
    double f = 0.0;
    switch (op) {
      case Op::A:
        if (na == 0) continue;
        f = std::sqrt(na);
        --na;
        break;
      case Op::Ad:
        f = std::sqrt(na + 1);
        ++na;
        break;
      case Op::B:
        if (nb == 0) continue;
        f = std::sqrt(nb);
        --nb;
        break;
      case Op::Bd:
        f = std::sqrt(nb + 1);
        ++nb;
        break;
    }
    out[{na, nb}] += f * amp;
  }
  return out;
}

// word is applied right to left, like the written operator product
Ket apply_word(std::initializer_list<Op> word, const Ket& k) {
  Ket r = k;
  for (auto it = std::rbegin(word); it != std::rend(word); ++it) r = apply_op(*it, r);
  return r;
}

void accumulate(Ket& acc, const Ket& k, double w) {
  for (const auto& [occ, amp] : k) acc[occ] += w * amp;
}

Eigen::MatrixXd brute_force_hamiltonian(const TwoModeCoeffs& c, int n_tot) {
  using enum Op;
  const int dim = n_tot + 1;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (int col = 0; col < dim; ++col) {
    Ket basis{{{col, n_tot - col}, 1.0}};
    Ket out;
    accumulate(out, apply_word({Ad, A}, basis), c.E0);
    accumulate(out, apply_word({Bd, B}, basis), c.E0);
    accumulate(out, apply_word({Ad, Ad, A, A}, basis), 0.5 * c.chi);
    accumulate(out, apply_word({Bd, Bd, B, B}, basis), 0.5 * c.chi);
    accumulate(out, apply_word({Bd, A}, basis), c.J);
    accumulate(out, apply_word({Ad, B}, basis), c.J);
    accumulate(out, apply_word({Ad, A, Bd, B}, basis), 4.0 * c.Ubar);
    accumulate(out, apply_word({Ad, Ad, B, B}, basis), c.Ubar);
    accumulate(out, apply_word({Bd, Bd, A, A}, basis), c.Ubar);
    // 2 Jbar (a^+a + b^+b - 1)(b^+a + a^+b)
    Ket hop = apply_word({Bd, A}, basis);
    accumulate(hop, apply_word({Ad, B}, basis), 1.0);
    Ket num = apply_word({Ad, A}, hop);
    accumulate(num, apply_word({Bd, B}, hop), 1.0);
    accumulate(num, hop, -1.0);
    accumulate(out, num, 2.0 * c.Jbar);
    for (const auto& [occ, amp] : out) {
      REQUIRE(occ.first + occ.second == n_tot);
      h(occ.first, col) += amp;
    }
  }
  return h;
}

TwoModeCoeffs some_coeffs() {
  TwoModeCoeffs c;
  c.E0 = 0.37;
  c.chi = -0.013;
  c.J = -0.021;
  c.Ubar = 0.0041;
  c.Jbar = -0.0017;
  return c;
}

CoeffProvider fixed_coeffs(TwoModeCoeffs c) {
  return [c](double d) {
    TwoModeCoeffs r = c;
    r.d = d;
    return r;
  };
}

TwoModeCoeffs kerr_only(double chi) {
  TwoModeCoeffs c;
  c.chi = chi;
  return c;
}

double max_abs_diff(const TwoModeState& a, const Eigen::VectorXcd& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) m = std::max(m, std::abs(a.amplitudes[i] - b(i)));
  return m;
}

}  // namespace

TEST_CASE("banded Hamiltonian equals the ladder-operator construction") {
  const auto c = some_coeffs();
  for (int n = 2; n <= 6; ++n) {
    const auto h = build_hamiltonian(c, n).dense();
    const auto ref = brute_force_hamiltonian(c, n);
    CHECK((h - ref).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((h - h.transpose()).cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK_THROWS_AS(build_hamiltonian(c, -1), InvalidArgument);
  CHECK(build_hamiltonian(c, 0).dim() == 1);
  CHECK(build_hamiltonian(c, 1).off2.empty());
}

TEST_CASE("without overlap the Hamiltonian is diagonal") {
  TwoModeCoeffs c;
  c.E0 = 0.25;
  c.chi = -0.01;
  const int n = 10;
  const auto h = build_hamiltonian(c, n);
  CHECK(h.offdiag_bound() == 0.0);
  for (int k = 0; k <= n; ++k)
    CHECK(h.diag[k] == doctest::Approx(c.E0 * n + 0.5 * c.chi * (k * (k - 1.0) + (n - k) * (n - k - 1.0))));
  CHECK(h.off1.size() == static_cast<std::size_t>(n));
  CHECK(h.off2.size() == static_cast<std::size_t>(n - 1));
}

TEST_CASE("relative coherent state") {
  const auto s = initial_relative_coherent_state(2, 0.0);
  REQUIRE(s.dim() == 3);
  CHECK(std::abs(s.amplitudes[0] - 0.5) < 1e-15);
  CHECK(std::abs(s.amplitudes[1] - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(s.amplitudes[2] - 0.5) < 1e-15);
  CHECK_THROWS_AS(initial_relative_coherent_state(7, 0.0), InvalidArgument);

  for (double phi : {0.0, 1.1, std::numbers::pi}) {
    const auto st = initial_relative_coherent_state(2000, phi);
    CHECK(st.norm_sq() == doctest::Approx(1.0).epsilon(1e-12));
    const auto o = obdm(st);
    CHECK(std::abs(o.lambda_plus - 1.0) < 1e-12);
    CHECK(std::abs(o.lambda_minus) < 1e-12);
    const auto nd = number_distribution(st);
    CHECK(nd.mean == doctest::Approx(1000.0).epsilon(1e-12));
    CHECK(nd.variance == doctest::Approx(500.0).epsilon(1e-10));
  }
  // binomial weights with phase e^{i n_R phi}
  const double phi = 0.8;
  const auto st = initial_relative_coherent_state(12, phi);
  for (int k = 0; k <= 12; ++k) {
    const double b = std::exp(std::lgamma(13.0) - std::lgamma(k + 1.0) - std::lgamma(13.0 - k)) / 4096.0;
    CHECK(std::norm(st.amplitudes[k]) == doctest::Approx(b).epsilon(1e-12));
    CHECK(std::abs(std::arg(st.amplitudes[k] * std::polar(1.0, -(12 - k) * phi))) < 1e-12);
  }
}

TEST_CASE("one-body density matrix of Fock states") {
  const auto even = obdm(fock_state(20, 10));
  CHECK(std::abs(even.ab) == 0.0);
  CHECK(even.lambda_plus == doctest::Approx(0.5));
  CHECK(even.lambda_minus == doctest::Approx(0.5));
  const auto all_left = obdm(fock_state(20, 20));
  CHECK(all_left.lambda_plus == doctest::Approx(1.0));
  CHECK(all_left.lambda_minus == doctest::Approx(0.0));
  const auto nd = number_distribution(fock_state(20, 10));
  for (int k = 0; k <= 20; ++k) CHECK(nd.probabilities[k] == (k == 10 ? 1.0 : 0.0));
  CHECK_THROWS_AS(fock_state(4, 5), InvalidArgument);
  const auto m = mirror(fock_state(20, 3));
  CHECK(std::abs(m.amplitudes[17]) == 1.0);
}

TEST_CASE("dual coherent state") {
  const auto s = dual_coherent_state(100, 0.0);
  CHECK(s.total_weight() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(s.mean_total() == doctest::Approx(200.0).epsilon(1e-10));
  const auto o = obdm(s);
  CHECK(std::abs(o.lambda_plus - 1.0) < 1e-12);
  CHECK(o.aa == doctest::Approx(100.0).epsilon(1e-10));
  // Poissonian left occupation: variance = mean
  const auto nd = number_distribution(s);
  CHECK(nd.variance == doctest::Approx(100.0).epsilon(1e-8));
  CHECK_THROWS_AS(dual_coherent_state(0, 0.0), InvalidArgument);
}

TEST_CASE("expectation and energy agree") {
  const auto c = some_coeffs();
  const auto h = build_hamiltonian(c, 30);
  const auto s = initial_relative_coherent_state(30, 0.4);
  CHECK(energy(c, s) == doctest::Approx(expectation(h, s)).epsilon(1e-13));
}

TEST_CASE("Krylov step matches a dense eigendecomposition") {
  const auto c = some_coeffs();
  const int n = 24;
  const auto h = build_hamiltonian(c, n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.dense());
  auto s = initial_relative_coherent_state(n, 0.3);
  Eigen::VectorXcd v0(n + 1);
  for (int k = 0; k <= n; ++k) v0(k) = s.amplitudes[k];
  const double t = 7.5;
  const Eigen::VectorXcd phase =
      (es.eigenvalues().cast<cplx>() * cplx(0.0, -t)).array().exp().matrix();
  const Eigen::MatrixXcd vecs = es.eigenvectors().cast<cplx>();
  const Eigen::VectorXcd ref = vecs * phase.asDiagonal() * vecs.adjoint() * v0;

  KrylovPropagator prop;
  prop.advance(s, h, t);
  CHECK(max_abs_diff(s, ref) < 1e-10);
  CHECK(s.norm_sq() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(prop.stats().krylov_steps > 0);
}

TEST_CASE("weak coupling path matches the dense exponential") {
  TwoModeCoeffs c = kerr_only(-0.02);
  c.J = 1e-13;
  const int n = 40;
  const auto h = build_hamiltonian(c, n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.dense());
  auto s = initial_relative_coherent_state(n, 0.0);
  Eigen::VectorXcd v0(n + 1);
  for (int k = 0; k <= n; ++k) v0(k) = s.amplitudes[k];
  const double t = 0.5;
  const Eigen::VectorXcd phase =
      (es.eigenvalues().cast<cplx>() * cplx(0.0, -t)).array().exp().matrix();
  const Eigen::MatrixXcd vecs = es.eigenvectors().cast<cplx>();
  const Eigen::VectorXcd ref = vecs * phase.asDiagonal() * vecs.adjoint() * v0;
  KrylovPropagator prop;
  prop.advance(s, h, t);
  CHECK(prop.stats().weak_steps > 0);
  CHECK(max_abs_diff(s, ref) < 1e-12);
}

TEST_CASE("Kerr dynamics of a dual coherent state follows the closed form") {
  for (int n_sol : {10, 100}) {
    const double chi = -0.05;
    auto s = dual_coherent_state(n_sol, 0.0);
    double worst = 0.0;
    std::size_t samples = 0;
    propagate(
        s, SeparationSchedule::constant(32.0), fixed_coeffs(kerr_only(chi)), 0.05, 40.0, 4,
        [&](const NumberSuperposition& st, const SliceInfo& info) {
          const auto o = obdm(st);
          const auto ref = analysis::lambda_analytic(info.t, n_sol, chi);
          worst = std::max({worst, std::abs(o.lambda_plus - ref.plus), std::abs(o.lambda_minus - ref.minus)});
          ++samples;
        });
    INFO("n_sol = " << n_sol);
    CHECK(samples == 201);
    CHECK(worst < 1e-9);
  }
}

TEST_CASE("fixed-N Kerr dynamics: lambda = (1 +- |cos chi t|^(N-1))/2") {
  const int n = 60;
  const double chi = -0.03;
  auto s = initial_relative_coherent_state(n, 0.0);
  double worst = 0.0;
  propagate(s, SeparationSchedule::constant(40.0), fixed_coeffs(kerr_only(chi)), 0.1, 30.0, 1,
            [&](const TwoModeState& st, const SliceInfo& info) {
              const auto o = obdm(st);
              const double ref = 0.5 * (1.0 + std::pow(std::abs(std::cos(chi * info.t)), n - 1));
              worst = std::max(worst, std::abs(o.lambda_plus - ref));
            });
  CHECK(worst < 1e-10);
}

TEST_CASE("revival after 2 pi / |chi|") {
  const double chi = -0.01;
  const double t_rev = 2.0 * std::numbers::pi / std::abs(chi);
  auto s = dual_coherent_state(50, 0.0);
  const double dt = t_rev / 2000.0;
  propagate(s, SeparationSchedule::constant(32.0), fixed_coeffs(kerr_only(chi)), dt, t_rev, 0,
            {});
  CHECK(std::abs(obdm(s).lambda_plus - 1.0) < 1e-6);
  CHECK(s.time() == doctest::Approx(t_rev).epsilon(1e-12));
}

TEST_CASE("energy and norm conservation at constant separation") {
  const auto c = some_coeffs();
  auto s = initial_relative_coherent_state(40, 0.0);
  const double e0 = energy(c, s);
  PropagationOptions opt;
  double worst_e = 0.0;
  const auto stats = propagate(
      s, SeparationSchedule::constant(3.0), fixed_coeffs(c), 0.01, 100.0, 500,
      [&](const TwoModeState& st, const SliceInfo&) {
        worst_e = std::max(worst_e, std::abs(energy(c, st) - e0) / std::abs(e0));
      },
      opt);
  CHECK(stats.slices == 10000);
  CHECK(worst_e < 1e-8);
  CHECK(std::abs(s.norm_sq() - 1.0) < 1e-10);
  CHECK(stats.max_norm_drift < 1e-10);
}

TEST_CASE("time-dependent separation keeps the norm") {
  // synthetic overlap that switches on near d = 0
  CoeffProvider prov = [](double d) {
    TwoModeCoeffs c = kerr_only(-0.01);
    c.J = -0.05 * std::exp(-std::abs(d));
    c.Ubar = 0.002 * std::exp(-2 * std::abs(d));
    c.d = d;
    return c;
  };
  auto s = initial_relative_coherent_state(50, 0.0);
  const auto pre = number_distribution(s).variance;
  propagate(s, SeparationSchedule::ramp(10.0, 0.5), prov, 0.01, 20.0, 0, {});
  CHECK(std::abs(s.norm_sq() - 1.0) < 1e-10);
  CHECK(number_distribution(s).variance != doctest::Approx(pre));
}

TEST_CASE("separation schedules") {
  const auto cst = SeparationSchedule::constant(5.0);
  CHECK(cst.at(123.0) == 5.0);
  const auto ramp = SeparationSchedule::ramp(32.0, 0.4);
  CHECK(ramp.at(10.0) == doctest::Approx(24.0));
  CHECK(ramp.at(50.0) == doctest::Approx(8.0));

  gpe::Trajectory tr;
  tr.times = {0, 1, 2, 3, 4, 5, 6};
  tr.d = {6, 4, 0, 0, 0, 4, 6};
  tr.resolved = {1, 1, 0, 0, 0, 1, 1};
  tr.x_left = tr.x_right = tr.v = std::vector<double>(7, 0.0);
  const auto tab = SeparationSchedule::from_trajectory(tr);
  CHECK(tab.at(0.5) == doctest::Approx(5.0));
  CHECK(tab.at(3.0) == doctest::Approx(0.0));
  CHECK(tab.at(2.0) == doctest::Approx(2.0));
  CHECK(tab.filled(3.0));
  CHECK_FALSE(tab.filled(0.5));
  CHECK_THROWS_AS(tab.at(7.5), InvalidArgument);
  CHECK(tab.t_end() == 6.0);

  auto s = initial_relative_coherent_state(10, 0.0);
  CHECK_THROWS_AS(propagate(s, tab, fixed_coeffs(kerr_only(-0.01)), 0.1, 10.0, 0, {}),
                  InvalidArgument);
  CHECK_THROWS_AS(SeparationSchedule::from_trajectory(gpe::Trajectory{}), InvalidArgument);
}

TEST_CASE("coefficients from quadrature") {
  const Grid1D grid(-64.0, 64.0, 1024);
  const auto c = compute_coeffs(32.0, 1000, -0.002, grid);
  const double chi0 = chi_closed_form(1000, -0.002);
  CHECK(chi0 == doctest::Approx(-6.6666666666666e-4).epsilon(1e-12));
  CHECK(std::abs(c.chi - chi0) / std::abs(chi0) < 1e-3);
  CHECK(std::abs(c.Ubar) < 1e-10 * std::abs(c.chi));
  CHECK(std::abs(c.Jbar) < 1e-10 * std::abs(c.chi));
  // e^{-32} overlap: |J| lands at 5.7e-10 |chi|, above the 1e-10 aim
  CHECK(std::abs(c.J) < 1e-9 * std::abs(c.chi));
  // sech kinetic energy 1/(6 xi^2)
  CHECK(c.E0 == doctest::Approx(1.0 / 6.0).epsilon(1e-8));
  CHECK_FALSE(c.qualitative_only);

  for (double d : {0.5, 3.0, 10.0, 32.0}) {
    const auto p = compute_coeffs(d, 1000, -0.002, grid);
    const auto m = compute_coeffs(-d, 1000, -0.002, grid);
    CHECK(p.J == m.J);
    CHECK(p.Ubar == m.Ubar);
    CHECK(p.Jbar == m.Jbar);
    CHECK(p.chi == m.chi);
  }
  CHECK(compute_coeffs(1.0, 1000, -0.002, grid).qualitative_only);

  // overlap grows as the modes approach
  CHECK(std::abs(compute_coeffs(4.0, 1000, -0.002, grid).Ubar) >
        std::abs(compute_coeffs(8.0, 1000, -0.002, grid).Ubar));

  const Grid1D coarse(-512.0, 512.0, 256);
  CHECK_THROWS_AS(compute_coeffs(32.0, 1000, -0.002, coarse), NumericalError);
  CHECK_THROWS_AS(compute_coeffs(std::nan(""), 1000, -0.002, grid), InvalidArgument);

  auto prov = make_coeff_provider(1000, -0.002, grid);
  CHECK(prov(32.0).chi == c.chi);
}

TEST_CASE("Husimi function of a coherent pair is a displaced Gaussian") {
  const int n_sol = 40;
  const double phi = 0.7;
  const auto s = dual_coherent_state(n_sol, phi);
  const cplx beta = std::polar(std::sqrt(double(n_sol)), -phi);
  std::vector<cplx> pts = {beta, beta + 0.5, beta * 0.8, cplx(0, 0), cplx(-3.0, 2.0)};
  const auto q = husimi_q(s, pts);
  for (std::size_t i = 0; i < pts.size(); ++i)
    CHECK(q[i] == doctest::Approx(std::exp(-std::norm(pts[i] - beta))).epsilon(1e-9));

  const auto grid = default_polar_grid(s.mean_total());
  const auto hg = husimi_polar(s, grid, 2);
  const auto dg = diagnose(hg);
  CHECK(dg.normalization == doctest::Approx(1.0).epsilon(2e-3));
  CHECK(dg.peak_theta == doctest::Approx(-phi).epsilon(grid.dtheta()));
  CHECK(std::abs(dg.peak_r - std::abs(beta)) <= grid.dr());
  CHECK(dg.circular_variance < 0.02);

  // polar grid against direct evaluation
  std::vector<cplx> row;
  for (std::size_t k = 0; k < grid.n_angular; ++k) row.push_back(grid.alpha(10, k));
  const auto direct = husimi_q(s, row);
  double worst = 0.0;
  for (std::size_t k = 0; k < grid.n_angular; ++k) worst = std::max(worst, std::abs(direct[k] - hg.at(10, k)));
  CHECK(worst < 1e-12);

  // threads must not change the numbers
  const auto one = husimi_polar(s, grid, 1);
  CHECK(one.q == hg.q);
}

TEST_CASE("Husimi phase spreads under Kerr dynamics") {
  auto s = dual_coherent_state(40, 0.0);
  const auto grid = default_polar_grid(s.mean_total());
  double last = diagnose(husimi_polar(s, grid)).circular_variance;
  for (int k = 0; k < 5; ++k) {
    propagate(s, SeparationSchedule::constant(32.0), fixed_coeffs(kerr_only(-0.02)), 0.1, 2.0,
              0, {});
    const double cv = diagnose(husimi_polar(s, grid)).circular_variance;
    CHECK(cv > last);
    last = cv;
  }
}
