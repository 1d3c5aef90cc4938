#include "spectral/theory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "spectral/errors.hpp"

namespace spectral {

Kernel3x3 Kernel3x3::from_rows(const std::array<std::array<double, 3>, 3>& rows) {
  Kernel3x3 k;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double w = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (!std::isfinite(w)) throw DataError("kernel weights must be finite");
      k.at(j - 1, 1 - i) = w;
    }
  }
  return k;
}

Kernel3x3 Kernel3x3::identity() {
  Kernel3x3 k;
  k.at(0, 0) = 1.0;
  return k;
}

Kernel3x3 Kernel3x3::box() {
  Kernel3x3 k;
  k.w_.fill(1.0 / 9.0);
  return k;
}

Kernel3x3 Kernel3x3::rotated90() const {
  Kernel3x3 out;
  for (int y = -1; y <= 1; ++y) {
    for (int x = -1; x <= 1; ++x) out.at(-y, x) = at(x, y);
  }
  return out;
}

KernelModes kernel_radial_modes(const Kernel3x3& k) {
  return {k.at(0, 0),
          k.at(0, 1) + k.at(0, -1) + k.at(1, 0) + k.at(-1, 0),
          k.at(1, 1) + k.at(1, -1) + k.at(-1, 1) + k.at(-1, -1)};
}

Tensor zero_padded_kernel(const Kernel3x3& k, std::size_t n) {
  if (n < 4) throw ShapeError("zero_padded_kernel: grid side must be at least 4");
  Tensor t = Tensor::square(n);
  for (int y = -1; y <= 1; ++y) {
    for (int x = -1; x <= 1; ++x) {
      const auto row = static_cast<std::size_t>((y + static_cast<long>(n)) % static_cast<long>(n));
      const auto col = static_cast<std::size_t>((x + static_cast<long>(n)) % static_cast<long>(n));
      t(row, col) = k.at(x, y);
    }
  }
  return t;
}

ComplexGrid kernel_spectrum_grid(const Kernel3x3& k, std::size_t n) {
  if (n < 4) throw ShapeError("kernel_spectrum_grid: grid side must be at least 4");
  ComplexGrid g(n);
  const double step = 2.0 * std::numbers::pi / static_cast<double>(n);
  const long ln = static_cast<long>(n);
#pragma omp parallel for schedule(static)
  for (long v = 0; v < ln; ++v) {
    const double ky = step * static_cast<double>(v);
    for (std::size_t u = 0; u < n; ++u) {
      const double kx = step * static_cast<double>(u);
      Complex sum{};
      for (int y = -1; y <= 1; ++y) {
        for (int x = -1; x <= 1; ++x) {
          sum += k.at(x, y) * std::polar(1.0, -(kx * x + ky * y));
        }
      }
      g(static_cast<std::size_t>(v), u) = sum;
    }
  }
  return g;
}

RadialSpectrum predicted_log_power(const KernelModes& m, const RadialSpectrum& input) {
  const double base = m.w00 * m.w00 + m.w1 * m.w1 + m.wsqrt2 * m.wsqrt2;
  RadialSpectrum out = input;
  for (std::size_t i = 0; i < input.power.size(); ++i) {
    const double r = static_cast<double>(i + 1);
    const double modes = base + m.w1 * m.wsqrt2 * std::cos((1.0 - std::numbers::sqrt2) * r) +
                         m.w00 * m.w1 * std::cos(r) + m.w00 * m.wsqrt2 * std::cos(r / std::numbers::sqrt2);
    out.power[i] = r * modes * input.power[i];
  }
  out.jacobian_applied = true;
  return out;
}

Tensor convolve_periodic(const Tensor& t, const Kernel3x3& k) {
  require_square_map(t, 4, "convolve_periodic");
  const std::size_t n = t.rows();
  Tensor out({n, n}, t.dtype());
  const long ln = static_cast<long>(n);
#pragma omp parallel for schedule(static)
  for (long lr = 0; lr < ln; ++lr) {
    const auto r = static_cast<std::size_t>(lr);
    for (std::size_t c = 0; c < n; ++c) {
      double sum = 0.0;
      for (int y = -1; y <= 1; ++y) {
        const std::size_t sr = (r + n - static_cast<std::size_t>(y + 1) + 1) % n;  // r - y
        for (int x = -1; x <= 1; ++x) {
          const std::size_t sc = (c + n - static_cast<std::size_t>(x + 1) + 1) % n;  // c - x
          sum += k.at(x, y) * t(sr, sc);
        }
      }
      out(r, c) = sum;
    }
  }
  return out;
}

namespace {

double mean_log_step(const RadialSpectrum& a, const RadialSpectrum& b, const FitRange& range) {
  double sum = 0.0;
  std::size_t used = 0;
  for (std::size_t k = range.k_min; k <= range.k_max; ++k) {
    if (a.at(k) <= 0.0 || b.at(k) <= 0.0) continue;
    sum += std::log(b.at(k)) - std::log(a.at(k));
    ++used;
  }
  return used ? sum / static_cast<double>(used) : 0.0;
}

void require_nonsingular(const Kernel3x3& k, std::size_t n, const FitRange& range) {
  const Tensor p = power_grid(kernel_spectrum_grid(k, n));
  const auto v = p.values();
  const double peak = *std::max_element(v.begin(), v.end());
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      const std::size_t b = radial_bin(r, c, n);
      if (b < range.k_min || b > range.k_max) continue;
      if (!(p(r, c) > 1e-12 * peak)) {
        throw SingularKernelError("kernel spectrum vanishes at radius " + std::to_string(b) +
                                  " inside the fit range");
      }
    }
  }
}

}  // namespace

FitRange default_depth_fit_range(std::size_t bins) noexcept {
  return {std::max<std::size_t>(1, bins / 4), std::max<std::size_t>(2, bins / 2)};
}

DepthReport depth_simulation(std::span<const Tensor> seed_ensemble, const Kernel3x3& k, std::size_t layers,
                             FitRange range) {
  if (layers < 1) throw RangeError("depth_simulation: need at least one layer");
  if (seed_ensemble.empty()) throw EmptyEnsembleError("depth_simulation: ensemble is empty");

  std::vector<Tensor> maps(seed_ensemble.begin(), seed_ensemble.end());
  RadialSpectrum spec = ensemble_spectrum(maps);
  if (range.k_min == 0 && range.k_max == 0) range = default_depth_fit_range(spec.k_max());
  require_nonsingular(k, spec.grid_size, range);

  DepthReport rep;
  rep.range = range;
  rep.depths.push_back(0);
  rep.fits.push_back(fit_power_law(spec, range));
  for (std::size_t d = 1; d <= layers; ++d) {
    for (auto& m : maps) m = convolve_periodic(m, k);
    RadialSpectrum next = ensemble_spectrum(maps);
    rep.step_log_deltas.push_back(mean_log_step(spec, next, range));
    rep.depths.push_back(d);
    rep.fits.push_back(fit_power_law(next, range));
    spec = std::move(next);
  }

  double sum = 0.0;
  for (double s : rep.step_log_deltas) sum += s;
  rep.per_layer_log_delta = sum / static_cast<double>(rep.step_log_deltas.size());

  const double n = static_cast<double>(rep.depths.size());
  double md = 0.0, ma = 0.0;
  for (std::size_t i = 0; i < rep.depths.size(); ++i) {
    md += static_cast<double>(rep.depths[i]);
    ma += rep.fits[i].alpha;
  }
  md /= n;
  ma /= n;
  double sdd = 0.0, saa = 0.0, sda = 0.0;
  for (std::size_t i = 0; i < rep.depths.size(); ++i) {
    const double dd = static_cast<double>(rep.depths[i]) - md;
    const double da = rep.fits[i].alpha - ma;
    sdd += dd * dd;
    saa += da * da;
    sda += dd * da;
  }
  if (saa <= 1e-24 * std::max(1.0, ma * ma)) {
    rep.degenerate = true;
    rep.linear_r2 = 1.0;
  } else {
    rep.linear_r2 = std::clamp(sda * sda / (sdd * saa), 0.0, 1.0);
  }
  return rep;
}

}  // namespace spectral
