#include "spectral/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "spectral/errors.hpp"

namespace spectral {

namespace {

void require_same_square_shape(std::span<const Tensor> items, const char* what) {
  if (items.empty()) throw EmptyEnsembleError(std::string(what) + ": ensemble is empty");
  for (const auto& t : items) {
    require_square_map(t, 4, what);
    if (t.shape() != items.front().shape()) {
      throw ShapeError(std::string(what) + ": ensemble mixes map sizes " +
                       std::to_string(items.front().rows()) + " and " + std::to_string(t.rows()));
    }
  }
}

Tensor without_mean(const Tensor& t) {
  Tensor out = t;
  auto v = out.values();
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  for (double& x : v) x -= mean;
  return out;
}

}  // namespace

std::size_t radial_bin(std::size_t row, std::size_t col, std::size_t n) noexcept {
  const long ky = signed_index(row, n);
  const long kx = signed_index(col, n);
  const auto d2 = static_cast<std::size_t>(kx * kx + ky * ky);
  // round(sqrt(d2)) without floating ties: r rounds up iff d2 > r^2 + r.
  auto r = static_cast<std::size_t>(std::sqrt(static_cast<double>(d2)));
  while (r * r > d2) --r;
  while ((r + 1) * (r + 1) <= d2) ++r;
  return d2 > r * r + r ? r + 1 : r;
}

RadialSpectrum radial_average(const Tensor& power, bool jacobian) {
  require_square_map(power, 4, "radial_average");
  const std::size_t n = power.rows();
  const std::size_t bins = n / 2;

  RadialSpectrum s;
  s.grid_size = n;
  s.power.assign(bins, 0.0);
  s.counts.assign(bins, 0);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      const double p = power(r, c);
      if (p < 0.0) throw DataError("radial_average: power grid has a negative entry");
      const std::size_t b = radial_bin(r, c, n);
      if (b == 0 || b > bins) continue;
      s.power[b - 1] += p;
      ++s.counts[b - 1];
    }
  }
  for (std::size_t i = 0; i < bins; ++i) {
    s.power[i] /= static_cast<double>(s.counts[i]);
    if (jacobian) s.power[i] *= static_cast<double>(i + 1);
  }
  s.jacobian_applied = jacobian;
  return s;
}

RadialSpectrum radial_average_real(const ComplexGrid& a, const ComplexGrid& b) {
  if (a.n() != b.n()) throw ShapeError("radial_average_real: grid sizes differ");
  if (a.n() < 4) throw ShapeError("radial_average_real: grid side must be at least 4");
  const std::size_t n = a.n();
  const std::size_t bins = n / 2;

  RadialSpectrum s;
  s.grid_size = n;
  s.power.assign(bins, 0.0);
  s.counts.assign(bins, 0);
  std::vector<Complex> sums(bins);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      const std::size_t k = radial_bin(r, c, n);
      if (k == 0 || k > bins) continue;
      sums[k - 1] += std::conj(a(r, c)) * b(r, c);
      ++s.counts[k - 1];
    }
  }
  for (std::size_t i = 0; i < bins; ++i) s.power[i] = sums[i].real() / static_cast<double>(s.counts[i]);
  return s;
}

RadialSpectrum map_spectrum(const Tensor& t, bool jacobian, bool subtract_mean) {
  require_square_map(t, 4, "spectrum");
  return radial_average(power_grid(dft2(subtract_mean ? without_mean(t) : t)), jacobian);
}

RadialSpectrum ensemble_spectrum(std::span<const Tensor> items, const EnsembleOptions& opts) {
  require_same_square_shape(items, "ensemble_spectrum");

  std::vector<RadialSpectrum> per_item(items.size());
  const long count = static_cast<long>(items.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    per_item[static_cast<std::size_t>(i)] =
        map_spectrum(items[static_cast<std::size_t>(i)], opts.jacobian, opts.subtract_mean);
  }

  RadialSpectrum out = per_item.front();
  for (std::size_t i = 1; i < per_item.size(); ++i) {
    for (std::size_t b = 0; b < out.power.size(); ++b) out.power[b] += per_item[i].power[b];
  }
  for (double& p : out.power) p /= static_cast<double>(items.size());
  return out;
}

FitRange default_fit_range(std::size_t bins) noexcept {
  return {std::max<std::size_t>(1, bins / 2), bins};
}

PowerLawFit fit_power_law(const RadialSpectrum& s, FitRange range) {
  if (range.k_min == 0 && range.k_max == 0) range = default_fit_range(s.k_max());
  return fit_power_law(s, range.k_min, range.k_max);
}

PowerLawFit fit_power_law(const RadialSpectrum& s, std::size_t k_min, std::size_t k_max) {
  if (k_min < 1 || k_min >= k_max || k_max > s.k_max()) {
    throw RangeError("fit range [" + std::to_string(k_min) + ", " + std::to_string(k_max) +
                     "] must satisfy 1 <= kmin < kmax <= " + std::to_string(s.k_max()));
  }
  PowerLawFit fit;
  fit.k_min = k_min;
  fit.k_max = k_max;

  std::vector<double> xs, ys;
  for (std::size_t k = k_min; k <= k_max; ++k) {
    const double p = s.at(k);
    if (p > 0.0) {
      xs.push_back(std::log(static_cast<double>(k)));
      ys.push_back(std::log(p));
    } else {
      ++fit.dropped_bins;
    }
  }
  if (xs.size() < 3) {
    throw InsufficientDataError("power-law fit needs at least 3 positive bins in [" + std::to_string(k_min) +
                                ", " + std::to_string(k_max) + "], found " + std::to_string(xs.size()));
  }

  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  fit.alpha = sxy / sxx;
  fit.log_amplitude = my - fit.alpha * mx;

  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (fit.log_amplitude + fit.alpha * xs[i]);
    ss_res += e * e;
  }
  // A perfectly flat spectrum is fit exactly; call that r2 = 1.
  fit.r2 = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  return fit;
}

RadialCorrelation autocorrelation(const Tensor& t, bool subtract_mean) {
  require_square_map(t, 4, "autocorrelation");
  const std::size_t n = t.rows();
  const Tensor f = subtract_mean ? without_mean(t) : t;

  // inverse transform of |F|^2 is the circular sum_x f(x) f(x + d)
  ComplexGrid spec = dft2(f);
  for (auto& v : spec.values()) v = std::norm(v);
  const Tensor lag = idft2_real(spec);

  const std::size_t bins = n / 2;
  RadialCorrelation out;
  out.corr.assign(bins + 1, 0.0);
  out.counts.assign(bins + 1, 0);
  const double norm = static_cast<double>(n * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      const std::size_t b = radial_bin(r, c, n);
      if (b > bins) continue;
      out.corr[b] += lag(r, c) / norm;
      ++out.counts[b];
    }
  }
  for (std::size_t b = 0; b <= bins; ++b) out.corr[b] /= static_cast<double>(out.counts[b]);
  return out;
}

RadialCorrelation ensemble_autocorrelation(std::span<const Tensor> items, bool subtract_mean) {
  require_same_square_shape(items, "ensemble_autocorrelation");
  std::vector<RadialCorrelation> per_item(items.size());
  const long count = static_cast<long>(items.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    per_item[static_cast<std::size_t>(i)] = autocorrelation(items[static_cast<std::size_t>(i)], subtract_mean);
  }
  RadialCorrelation out = per_item.front();
  for (std::size_t i = 1; i < per_item.size(); ++i) {
    for (std::size_t b = 0; b < out.corr.size(); ++b) out.corr[b] += per_item[i].corr[b];
  }
  for (double& c : out.corr) c /= static_cast<double>(items.size());
  return out;
}

CorrelationFit fit_correlation(const RadialCorrelation& c, std::size_t r_min, std::size_t r_max,
                               const ExponentGrid& grid) {
  if (r_min < 1 || r_min > r_max || r_max > c.r_max()) {
    throw RangeError("correlation fit range [" + std::to_string(r_min) + ", " + std::to_string(r_max) +
                     "] must satisfy 1 <= rmin <= rmax <= " + std::to_string(c.r_max()));
  }
  const std::size_t m = r_max - r_min + 1;
  if (m < 4) throw InsufficientDataError("correlation fit needs at least 4 radii");
  if (!(grid.step > 0.0) || grid.hi < grid.lo) throw RangeError("invalid exponent grid");

  std::vector<double> rs(m), ys(m);
  for (std::size_t i = 0; i < m; ++i) {
    rs[i] = static_cast<double>(r_min + i);
    ys[i] = c.corr[r_min + i];
  }
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(m);
  double var = 0.0;
  for (double y : ys) var += (y - my) * (y - my);
  var /= static_cast<double>(m);
  if (var < 1e-12) throw DegenerateInputError("correlation is flat over the fit range (variance < 1e-12)");

  const auto steps = static_cast<std::size_t>(std::llround((grid.hi - grid.lo) / grid.step));
  CorrelationFit best;
  best.residual = std::numeric_limits<double>::infinity();
  std::vector<double> u(m);
  for (std::size_t s = 0; s <= steps; ++s) {
    const double e = grid.lo + static_cast<double>(s) * grid.step;
    for (std::size_t i = 0; i < m; ++i) u[i] = std::pow(rs[i], e);
    const double mu = std::accumulate(u.begin(), u.end(), 0.0) / static_cast<double>(m);
    double suu = 0.0, suy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      suu += (u[i] - mu) * (u[i] - mu);
      suy += (u[i] - mu) * (ys[i] - my);
    }
    // r^0 is collinear with the constant term; fall back to c2 = 0
    const double c2 = suu > 1e-14 * static_cast<double>(m) ? suy / suu : 0.0;
    const double c1 = my - c2 * mu;
    double ssr = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double e2 = ys[i] - (c1 + c2 * u[i]);
      ssr += e2 * e2;
    }
    if (ssr < best.residual) best = {c1, c2, e, ssr};
  }
  return best;
}

}  // namespace spectral
