#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "spectral/tensor.hpp"

namespace spectral {

using Complex = std::complex<double>;

/// N x N complex grid, row-major, frequency (0,0) at index 0.
class ComplexGrid {
 public:
  ComplexGrid() = default;
  explicit ComplexGrid(std::size_t n) : n_(n), v_(n * n) {}

  std::size_t n() const noexcept { return n_; }
  std::vector<Complex>& values() noexcept { return v_; }
  const std::vector<Complex>& values() const noexcept { return v_; }

  Complex& operator()(std::size_t r, std::size_t c) noexcept { return v_[r * n_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const noexcept { return v_[r * n_ + c]; }

 private:
  std::size_t n_ = 0;
  std::vector<Complex> v_;
};

/// Signed frequency (or lag) for grid index i on an n-point axis, in [-n/2, n/2).
inline long signed_index(std::size_t i, std::size_t n) noexcept {
  const long li = static_cast<long>(i);
  const long ln = static_cast<long>(n);
  return 2 * li < ln ? li : li - ln;
}

/// 1D transform plan for a fixed length. Power-of-two lengths use an
/// iterative radix-2 transform; every other length goes through Bluestein's
/// chirp-z reformulation on a padded power-of-two plan.
class FftPlan {
 public:
  explicit FftPlan(std::size_t n);

  std::size_t size() const noexcept { return n_; }

  /// In-place unnormalized transform. inverse=true flips the exponent sign
  /// and does NOT scale.
  void transform(std::span<Complex> data, bool inverse) const;

 private:
  void radix2(std::span<Complex> data, bool inverse) const;

  std::size_t n_;
  bool pow2_;
  std::vector<Complex> twiddle_;       // radix-2 twiddles, length n_/2 (pow2 only)
  std::vector<std::size_t> bitrev_;
  // Bluestein state
  std::size_t m_ = 0;
  std::vector<Complex> chirp_;         // exp(-i pi j^2 / n)
  std::vector<Complex> chirp_fft_;     // transform of the conjugate chirp filter
  std::unique_ptr<FftPlan> inner_;
};

/// Unnormalized forward 2D DFT of a square real map, rows parallelized.
ComplexGrid dft2(const Tensor& t);
ComplexGrid dft2(const ComplexGrid& g);
/// Inverse with the 1/N^2 normalization.
ComplexGrid idft2(const ComplexGrid& g);
/// Real part of idft2.
Tensor idft2_real(const ComplexGrid& g);

/// Elementwise |g|^2 as an N x N tensor.
Tensor power_grid(const ComplexGrid& g);

}  // namespace spectral
