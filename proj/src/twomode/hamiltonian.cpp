#include "solcoll/twomode/hamiltonian.hpp"

#include <algorithm>
#include <cmath>

#include "solcoll/core/error.hpp"

namespace solcoll::twomode {

BandedHamiltonian build_hamiltonian(const TwoModeCoeffs& c, int n_tot) {
  if (n_tot < 0) throw InvalidArgument("build_hamiltonian: n_tot must be >= 0");
  BandedHamiltonian h;
  h.n_tot = n_tot;
  const auto dim = static_cast<std::size_t>(n_tot) + 1;
  h.diag.resize(dim);
  h.off1.assign(dim - 1, 0.0);
  h.off2.assign(dim > 1 ? dim - 2 : 0, 0.0);
  for (std::size_t i = 0; i < dim; ++i) {
    const double n = static_cast<double>(i);
    h.diag[i] = diag_element(c, n_tot, n);
    if (i + 1 < dim) h.off1[i] = off1_element(c, n_tot, n);
    if (i + 2 < dim) h.off2[i] = off2_element(c, n_tot, n);
  }
  return h;
}

void BandedHamiltonian::apply(std::span<const cplx> x, std::span<cplx> y, std::size_t lo,
                              std::size_t hi) const {
  const std::size_t w = hi - lo + 1;
  if (x.size() < w || y.size() < w) throw InvalidArgument("BandedHamiltonian::apply: size");
  for (std::size_t r = 0; r < w; ++r) {
    const std::size_t i = lo + r;
    cplx acc = diag[i] * x[r];
    if (r >= 1) acc += off1[i - 1] * x[r - 1];
    if (r + 1 < w) acc += off1[i] * x[r + 1];
    if (r >= 2) acc += off2[i - 2] * x[r - 2];
    if (r + 2 < w) acc += off2[i] * x[r + 2];
    y[r] = acc;
  }
}

void BandedHamiltonian::apply(std::span<const cplx> x, std::span<cplx> y) const {
  apply(x, y, 0, dim() - 1);
}

double BandedHamiltonian::offdiag_bound(std::size_t lo, std::size_t hi) const noexcept {
  double best = 0.0;
  for (std::size_t i = lo; i <= hi && i < dim(); ++i) {
    double s = 0.0;
    if (i >= 1) s += std::abs(off1[i - 1]);
    if (i + 1 < dim()) s += std::abs(off1[i]);
    if (i >= 2) s += std::abs(off2[i - 2]);
    if (i + 2 < dim()) s += std::abs(off2[i]);
    best = std::max(best, s);
  }
  return best;
}

double BandedHamiltonian::offdiag_bound() const noexcept { return offdiag_bound(0, dim() - 1); }

Eigen::MatrixXd BandedHamiltonian::dense() const {
  const auto n = static_cast<Eigen::Index>(dim());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i, i) = diag[static_cast<std::size_t>(i)];
    if (i + 1 < n) m(i, i + 1) = m(i + 1, i) = off1[static_cast<std::size_t>(i)];
    if (i + 2 < n) m(i, i + 2) = m(i + 2, i) = off2[static_cast<std::size_t>(i)];
  }
  return m;
}

}  // namespace solcoll::twomode
