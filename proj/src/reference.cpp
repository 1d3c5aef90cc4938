#include "spectral/reference.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "spectral/errors.hpp"

namespace spectral::reference {

ComplexGrid dft2(const Tensor& t) {
  require_square_map(t, 4, "reference::dft2");
  const std::size_t n = t.rows();
  std::vector<Complex> w(n);
  for (std::size_t k = 0; k < n; ++k) {
    w[k] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
  }
  // rows, then columns; exponent index reduced mod n
  ComplexGrid rows(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t u = 0; u < n; ++u) {
      Complex s{};
      for (std::size_t c = 0; c < n; ++c) s += t(r, c) * w[(u * c) % n];
      rows(r, u) = s;
    }
  }
  ComplexGrid out(n);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      Complex s{};
      for (std::size_t r = 0; r < n; ++r) s += rows(r, u) * w[(v * r) % n];
      out(v, u) = s;
    }
  }
  return out;
}

Tensor convolve_periodic(const Tensor& t, const Kernel3x3& k) {
  require_square_map(t, 4, "reference::convolve_periodic");
  const long n = static_cast<long>(t.rows());
  Tensor out({t.rows(), t.cols()}, t.dtype());
  for (long r = 0; r < n; ++r) {
    for (long c = 0; c < n; ++c) {
      double sum = 0.0;
      for (int y = -1; y <= 1; ++y) {
        for (int x = -1; x <= 1; ++x) {
          const auto sr = static_cast<std::size_t>(((r - y) % n + n) % n);
          const auto sc = static_cast<std::size_t>(((c - x) % n + n) % n);
          sum += k.at(x, y) * t(sr, sc);
        }
      }
      out(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = sum;
    }
  }
  return out;
}

Tensor average_pool(const Tensor& t, std::size_t factor) {
  require_square_map(t, 1, "reference::average_pool");
  if (factor < 2 || t.rows() % factor != 0) throw ShapeError("reference::average_pool: bad factor");
  const std::size_t m = t.rows() / factor;
  Tensor out({m, m}, t.dtype());
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < m; ++c) {
      double sum = 0.0;
      for (std::size_t dr = 0; dr < factor; ++dr) {
        for (std::size_t dc = 0; dc < factor; ++dc) sum += t(r * factor + dr, c * factor + dc);
      }
      out(r, c) = sum / static_cast<double>(factor * factor);
    }
  }
  return out;
}

RadialSpectrum ensemble_spectrum(std::span<const Tensor> items, const EnsembleOptions& opts) {
  if (items.empty()) throw EmptyEnsembleError("reference::ensemble_spectrum: ensemble is empty");
  RadialSpectrum out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].shape() != items.front().shape()) throw ShapeError("reference::ensemble_spectrum: mixed shapes");
    const RadialSpectrum s = map_spectrum(items[i], opts.jacobian, opts.subtract_mean);
    if (i == 0) {
      out = s;
      continue;
    }
    for (std::size_t b = 0; b < out.power.size(); ++b) out.power[b] += s.power[b];
  }
  for (double& p : out.power) p /= static_cast<double>(items.size());
  return out;
}

}  // namespace spectral::reference
