#pragma once

// Straightforward serial versions of the parallel kernels. They are kept for
// the equivalence tests and as the baseline in bench/.

#include <cstddef>
#include <span>

#include "spectral/fft.hpp"
#include "spectral/spectrum.hpp"
#include "spectral/tensor.hpp"
#include "spectral/theory.hpp"

namespace spectral::reference {

/// Separable direct DFT, O(N^3), single thread.
ComplexGrid dft2(const Tensor& t);

Tensor convolve_periodic(const Tensor& t, const Kernel3x3& k);

Tensor average_pool(const Tensor& t, std::size_t factor);

/// Same reduction order as the parallel version, computed in one loop.
RadialSpectrum ensemble_spectrum(std::span<const Tensor> items, const EnsembleOptions& opts = {});

}  // namespace spectral::reference
