#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "spectral/fft.hpp"
#include "spectral/spectrum.hpp"
#include "spectral/tensor.hpp"

namespace spectral {

/// 3x3 convolution kernel addressed by offsets x, y in {-1, 0, 1}. x runs
/// along columns, y along rows; (0, 0) is the center.
class Kernel3x3 {
 public:
  Kernel3x3() = default;
  /// Row-major 3x3 block in matrix layout: rows top to bottom are
  /// y = +1, 0, -1 and columns left to right are x = -1, 0, +1.
  static Kernel3x3 from_rows(const std::array<std::array<double, 3>, 3>& rows);
  static Kernel3x3 identity();
  static Kernel3x3 box();  // every weight 1/9

  double at(int x, int y) const noexcept { return w_[(y + 1) * 3 + (x + 1)]; }
  double& at(int x, int y) noexcept { return w_[(y + 1) * 3 + (x + 1)]; }

  /// Rotation by 90 degrees: (x, y) -> (-y, x).
  Kernel3x3 rotated90() const;

 private:
  std::array<double, 9> w_{};
};

/// Weights grouped by distance from the center: 0, 1, sqrt(2).
struct KernelModes {
  double w00 = 0.0;
  double w1 = 0.0;
  double wsqrt2 = 0.0;
};

KernelModes kernel_radial_modes(const Kernel3x3& k);

/// Kernel embedded in an N x N periodic grid with its center at the origin,
/// offset (x, y) stored at row y mod N, column x mod N.
Tensor zero_padded_kernel(const Kernel3x3& k, std::size_t n);

/// Transform of the zero-padded kernel evaluated from its nine-term closed
/// form at grid frequencies 2 pi u / N. Same sign convention as dft2.
ComplexGrid kernel_spectrum_grid(const Kernel3x3& k, std::size_t n);

/// Rotational mode model: r * [ (w00^2 + W1^2 + Wsqrt2^2)
///   + W1 Wsqrt2 cos((1 - sqrt2) r) + w00 W1 cos(r) + w00 Wsqrt2 cos(r / sqrt2) ] * input(r)
/// with |k| taken as the integer bin radius r.
RadialSpectrum predicted_log_power(const KernelModes& m, const RadialSpectrum& input);

/// Circular 3x3 convolution: g(r, c) = sum w(x, y) f(r - y, c - x), indices mod N.
Tensor convolve_periodic(const Tensor& t, const Kernel3x3& k);

struct DepthReport {
  std::vector<std::size_t> depths;
  std::vector<PowerLawFit> fits;
  FitRange range;
  /// log P_{d+1} - log P_d averaged over the fit range, one per step.
  std::vector<double> step_log_deltas;
  double per_layer_log_delta = 0.0;
  double linear_r2 = 0.0;
  /// Alphas had no variance; linear_r2 is 1 by convention.
  bool degenerate = false;
};

/// Default depth-simulation fit range: [floor(k_max/4), floor(k_max/2)]. It
/// stays below N/3, where box-like 3x3 kernels have their first spectral zero
/// and the annulus mean stops being log-additive.
FitRange default_depth_fit_range(std::size_t bins) noexcept;

/// Applies the kernel 0..layers times to every map (linear, periodic, no
/// nonlinearity) and fits the ensemble spectrum at each depth.
DepthReport depth_simulation(std::span<const Tensor> seed_ensemble, const Kernel3x3& k,
                             std::size_t layers, FitRange range = {});

}  // namespace spectral
