#include "spectral/synthetic.hpp"

#include <cmath>
#include <numbers>

#include "spectral/errors.hpp"
#include "spectral/fft.hpp"

namespace spectral {

Tensor power_law_image(std::size_t n, double alpha, std::mt19937_64& rng) {
  if (n < 4) throw ShapeError("power_law_image: side must be at least 4");
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);

  ComplexGrid g(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      const std::size_t pr = (n - r) % n;
      const std::size_t pc = (n - c) % n;
      const std::size_t self = r * n + c;
      const std::size_t partner = pr * n + pc;
      if (self == 0) continue;  // DC stays zero
      if (partner < self) {
        g(r, c) = std::conj(g(pr, pc));
        continue;
      }
      const double kx = static_cast<double>(signed_index(c, n));
      const double ky = static_cast<double>(signed_index(r, n));
      const double mag = std::pow(std::hypot(kx, ky), alpha / 2.0);
      const double phi = phase(rng);
      // self-conjugate frequencies must be real: keep the magnitude, pick a sign
      g(r, c) = partner == self ? Complex(phi < std::numbers::pi ? mag : -mag, 0.0) : std::polar(mag, phi);
    }
  }

  Tensor img = idft2_real(g);
  // Parseval makes the RMS phase-independent, so this is a fixed rescaling.
  double ss = 0.0;
  for (double v : img.values()) ss += v * v;
  const double scale = 1.0 / std::sqrt(ss / static_cast<double>(img.size()));
  for (double& v : img.values()) v *= scale;
  return img;
}

std::vector<Tensor> power_law_ensemble(std::size_t count, std::size_t n, double alpha, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Tensor> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(power_law_image(n, alpha, rng));
  return out;
}

std::vector<Tensor> white_noise_ensemble(std::size_t count, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<Tensor> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Tensor t = Tensor::square(n);
    for (double& v : t.values()) v = noise(rng);
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace spectral
