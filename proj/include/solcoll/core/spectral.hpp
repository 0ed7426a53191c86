#pragma once

#include <complex>
#include <span>
#include <vector>

#include "solcoll/core/grid.hpp"

namespace solcoll {

using cplx = std::complex<double>;

// In-place complex FFT pair of fixed length backed by FFTW. Plans use
// FFTW_ESTIMATE so the arithmetic is reproducible run to run. Transforms are
// unnormalised; forward followed by backward multiplies by size().
class FftPair {
 public:
  explicit FftPair(std::size_t n);
  ~FftPair();
  FftPair(const FftPair&) = delete;
  FftPair& operator=(const FftPair&) = delete;
  FftPair(FftPair&& other) noexcept;
  FftPair& operator=(FftPair&& other) noexcept;

  std::size_t size() const noexcept { return n_; }
  std::span<cplx> buffer() noexcept { return {buf_, n_}; }
  std::span<const cplx> buffer() const noexcept { return {buf_, n_}; }

  void forward();
  void backward();

 private:
  void release() noexcept;

  std::size_t n_ = 0;
  cplx* buf_ = nullptr;
  void* fwd_ = nullptr;
  void* bwd_ = nullptr;
};

// d^m f / dx^m of a periodic grid function, computed spectrally.
std::vector<double> spectral_derivative(const Grid1D& grid, std::span<const double> f, int order);
std::vector<cplx> spectral_derivative(const Grid1D& grid, std::span<const cplx> f, int order);

// Trapezoidal (= rectangle on a periodic grid) quadrature.
double integrate(const Grid1D& grid, std::span<const double> f);

}  // namespace solcoll
