#pragma once

#include <cstddef>
#include <span>

#include "spectral/spectrum.hpp"
#include "spectral/tensor.hpp"

namespace spectral {

/// Non-overlapping block mean; output side is N / factor.
Tensor average_pool(const Tensor& t, std::size_t factor);

struct InvarianceReport {
  RadialSpectrum pre;
  RadialSpectrum post;
  /// Mean |log P_pre - log P_post| over k <= floor(k_max_post / 2), with each
  /// spectrum expressed per unit amplitude (divided by its pixel count squared)
  /// so that the pooled and unpooled transforms share one scale.
  double low_freq_log_gap = 0.0;
  PowerLawFit alpha_pre;
  PowerLawFit alpha_post;
  /// 2^(2 + alpha_pre): expected shrink of correlation lengths under pooling.
  double predicted_corr_factor = 0.0;
};

/// Factor 2^(2 + alpha) by which halving the resolution rescales correlation
/// lengths for a spectrum with exponent alpha.
double predicted_corr_factor(double alpha);

InvarianceReport pooling_invariance_report(std::span<const Tensor> items, std::size_t factor,
                                           FitRange pre_range = {}, FitRange post_range = {});

}  // namespace spectral
