#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "spectral/tensor.hpp"

namespace spectral {

/// Real N x N image whose Fourier magnitudes are exactly |k|^(alpha/2)
/// (zero at DC) with uniformly random phases. Conjugate pairs share one
/// phase so the inverse transform is real.
Tensor power_law_image(std::size_t n, double alpha, std::mt19937_64& rng);

std::vector<Tensor> power_law_ensemble(std::size_t count, std::size_t n, double alpha,
                                       std::uint64_t seed);

/// Independent unit-variance Gaussian pixels.
std::vector<Tensor> white_noise_ensemble(std::size_t count, std::size_t n, std::uint64_t seed);

}  // namespace spectral
