#include <doctest.h>

#include <random>
#include <vector>

#include <omp.h>

#include "oracles.hpp"
#include "spectral/reference.hpp"
#include "spectral/scaling.hpp"
#include "spectral/synthetic.hpp"

using namespace spectral;

namespace {

/// Runs f with the given OpenMP thread count, restoring the previous setting.
template <typename F>
auto with_threads(int n, F f) {
  const int before = omp_get_max_threads();
  omp_set_num_threads(n);
  auto result = f();
  omp_set_num_threads(before);
  return result;
}

Kernel3x3 random_kernel(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Kernel3x3 k;
  for (int y = -1; y <= 1; ++y)
    for (int x = -1; x <= 1; ++x) k.at(x, y) = u(rng);
  return k;
}

}  // namespace

TEST_CASE("parallel dft2 matches the serial direct transform") {
  std::mt19937_64 rng(1);
  for (std::size_t n : {4u, 6u, 16u, 30u, 64u}) {
    const Tensor t = oracle::random_map(n, rng);
    const ComplexGrid a = with_threads(4, [&] { return dft2(t); });
    const ComplexGrid b = reference::dft2(t);
    double worst = 0.0;
    for (std::size_t i = 0; i < n * n; ++i) worst = std::max(worst, std::abs(a.values()[i] - b.values()[i]));
    CAPTURE(n);
    CHECK(worst < 1e-9 * static_cast<double>(n));
  }
}

TEST_CASE("parallel dft2 does not depend on the thread count") {
  std::mt19937_64 rng(2);
  const Tensor t = oracle::random_map(48, rng);
  const ComplexGrid a = with_threads(1, [&] { return dft2(t); });
  const ComplexGrid b = with_threads(4, [&] { return dft2(t); });
  CHECK(a.values() == b.values());
}

TEST_CASE("convolution and pooling are bit-identical to the serial versions") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const Tensor t = oracle::random_map(32, rng);
    const Kernel3x3 k = random_kernel(rng);
    CHECK(with_threads(4, [&] { return convolve_periodic(t, k); }) == reference::convolve_periodic(t, k));
    CHECK(with_threads(4, [&] { return average_pool(t, 4); }) == reference::average_pool(t, 4));
  }
}

TEST_CASE("ensemble spectrum is bit-identical to the serial reduction") {
  const auto items = power_law_ensemble(17, 32, -2.0, 9);
  const EnsembleOptions opts{true, false};
  const RadialSpectrum serial = reference::ensemble_spectrum(items, opts);
  for (int threads : {1, 2, 3, 8}) {
    const RadialSpectrum par = with_threads(threads, [&] { return ensemble_spectrum(items, opts); });
    CAPTURE(threads);
    CHECK(par.power == serial.power);
    CHECK(par.counts == serial.counts);
  }
}
