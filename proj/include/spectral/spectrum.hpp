#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "spectral/fft.hpp"
#include "spectral/tensor.hpp"

namespace spectral {

/// Annulus-averaged power for integer radii 1..floor(N/2). Index i of each
/// vector is radius i + 1; DC is never stored.
struct RadialSpectrum {
  std::size_t grid_size = 0;
  std::vector<double> power;
  std::vector<std::size_t> counts;
  bool jacobian_applied = false;

  std::size_t k_max() const noexcept { return power.size(); }
  double at(std::size_t k) const { return power.at(k - 1); }
};

struct PowerLawFit {
  double alpha = 0.0;
  double log_amplitude = 0.0;
  double r2 = 0.0;
  std::size_t k_min = 0;
  std::size_t k_max = 0;
  /// Bins inside the range skipped because their power was exactly zero.
  std::size_t dropped_bins = 0;
};

/// Radially averaged correlation for lags 0..floor(N/2).
struct RadialCorrelation {
  std::vector<double> corr;
  std::vector<std::size_t> counts;

  std::size_t r_max() const noexcept { return corr.empty() ? 0 : corr.size() - 1; }
};

/// C(r) = c1 + c2 * r^exponent
struct CorrelationFit {
  double c1 = 0.0;
  double c2 = 0.0;
  double exponent = 0.0;
  double residual = 0.0;
};

/// Annulus index for a grid point: round(|k|) with k centered on [-N/2, N/2).
std::size_t radial_bin(std::size_t row, std::size_t col, std::size_t n) noexcept;

RadialSpectrum radial_average(const Tensor& power, bool jacobian = false);

/// Annulus mean of the real part of conj(F(x)) * F(y), DC excluded.
RadialSpectrum radial_average_real(const ComplexGrid& a, const ComplexGrid& b);

/// radial_average(power_grid(dft2(t))), optionally after removing the map mean.
RadialSpectrum map_spectrum(const Tensor& t, bool jacobian = false, bool subtract_mean = false);

struct EnsembleOptions {
  bool jacobian = false;
  bool subtract_mean = false;
};

/// Mean radial spectrum of a set of equal-size square maps. Per-item work runs
/// in parallel; the reduction is always in item order so results are
/// bit-identical regardless of thread count.
RadialSpectrum ensemble_spectrum(std::span<const Tensor> items, const EnsembleOptions& opts = {});

/// High-frequency half of the spectrum: [floor(k_max/2), k_max].
struct FitRange {
  std::size_t k_min = 0;  // 0 selects the default
  std::size_t k_max = 0;
};
FitRange default_fit_range(std::size_t bins) noexcept;

/// OLS of log(power) against log(k) on [k_min, k_max]. Zero-power bins are
/// skipped and counted in dropped_bins.
PowerLawFit fit_power_law(const RadialSpectrum& s, std::size_t k_min, std::size_t k_max);
PowerLawFit fit_power_law(const RadialSpectrum& s, FitRange range = {});

/// Periodic autocorrelation through the power grid (Wiener-Khinchin),
/// normalized to a per-pixel mean, then radially averaged.
RadialCorrelation autocorrelation(const Tensor& t, bool subtract_mean = true);

/// Lag-by-lag mean of autocorrelation() over equal-size maps.
RadialCorrelation ensemble_autocorrelation(std::span<const Tensor> items, bool subtract_mean = true);

struct ExponentGrid {
  double lo = -4.0;
  double hi = 0.0;
  double step = 0.01;
};

/// Grid search over the exponent with linear least squares for c1, c2.
CorrelationFit fit_correlation(const RadialCorrelation& c, std::size_t r_min, std::size_t r_max,
                               const ExponentGrid& grid = {});

}  // namespace spectral
