#include "solcoll/core/spectral.hpp"

#include <fftw3.h>

#include <mutex>
#include <numeric>
#include <utility>

#include "solcoll/core/error.hpp"

namespace solcoll {

namespace {

// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

FftPair::FftPair(std::size_t n) : n_(n) {
  if (n == 0) throw InvalidArgument("FftPair: empty transform");
  buf_ = reinterpret_cast<cplx*>(fftw_alloc_complex(n));
  if (buf_ == nullptr) throw std::bad_alloc();
  std::lock_guard lock(planner_mutex());
  auto* raw = reinterpret_cast<fftw_complex*>(buf_);
  fwd_ = fftw_plan_dft_1d(static_cast<int>(n), raw, raw, FFTW_FORWARD, FFTW_ESTIMATE);
  bwd_ = fftw_plan_dft_1d(static_cast<int>(n), raw, raw, FFTW_BACKWARD, FFTW_ESTIMATE);
  std::fill(buf_, buf_ + n, cplx{});
}

FftPair::~FftPair() { release(); }

FftPair::FftPair(FftPair&& other) noexcept
    : n_(std::exchange(other.n_, 0)),
      buf_(std::exchange(other.buf_, nullptr)),
      fwd_(std::exchange(other.fwd_, nullptr)),
      bwd_(std::exchange(other.bwd_, nullptr)) {}

FftPair& FftPair::operator=(FftPair&& other) noexcept {
  if (this != &other) {
    release();
    n_ = std::exchange(other.n_, 0);
    buf_ = std::exchange(other.buf_, nullptr);
    fwd_ = std::exchange(other.fwd_, nullptr);
    bwd_ = std::exchange(other.bwd_, nullptr);
  }
  return *this;
}

void FftPair::release() noexcept {
  if (fwd_ != nullptr || bwd_ != nullptr) {
    std::lock_guard lock(planner_mutex());
    if (fwd_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
    if (bwd_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
  }
  if (buf_ != nullptr) fftw_free(buf_);
  fwd_ = bwd_ = nullptr;
  buf_ = nullptr;
}

void FftPair::forward() { fftw_execute(static_cast<fftw_plan>(fwd_)); }
void FftPair::backward() { fftw_execute(static_cast<fftw_plan>(bwd_)); }

std::vector<cplx> spectral_derivative(const Grid1D& grid, std::span<const cplx> f, int order) {
  if (f.size() != grid.size()) throw InvalidArgument("spectral_derivative: size mismatch");
  if (order < 0) throw InvalidArgument("spectral_derivative: negative order");
  FftPair fft(grid.size());
  auto buf = fft.buffer();
  std::copy(f.begin(), f.end(), buf.begin());
  fft.forward();
  const auto k = grid.wavenumbers();
  const double inv_n = 1.0 / static_cast<double>(grid.size());
  const std::size_t nyquist = grid.size() / 2;
  for (std::size_t j = 0; j < buf.size(); ++j) {
    cplx factor{1.0, 0.0};
    for (int o = 0; o < order; ++o) factor *= cplx{0.0, k[j]};
    // The Nyquist mode has no well-defined odd derivative.
    if (order % 2 == 1 && j == nyquist) factor = 0.0;
    buf[j] *= factor * inv_n;
  }
  fft.backward();
  return {buf.begin(), buf.end()};
}

std::vector<double> spectral_derivative(const Grid1D& grid, std::span<const double> f, int order) {
  std::vector<cplx> fc(f.begin(), f.end());
  const auto dc = spectral_derivative(grid, std::span<const cplx>(fc), order);
  std::vector<double> out(dc.size());
  for (std::size_t i = 0; i < dc.size(); ++i) out[i] = dc[i].real();
  return out;
}

double integrate(const Grid1D& grid, std::span<const double> f) {
  if (f.size() != grid.size()) throw InvalidArgument("integrate: size mismatch");
  return std::accumulate(f.begin(), f.end(), 0.0) * grid.dx();
}

}  // namespace solcoll
