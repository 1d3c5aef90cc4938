#include "spectral/scaling.hpp"

#include <cmath>
#include <string>

#include "spectral/errors.hpp"

namespace spectral {

Tensor average_pool(const Tensor& t, std::size_t factor) {
  require_square_map(t, 1, "average_pool");
  if (factor < 2) throw ShapeError("average_pool: factor must be at least 2");
  const std::size_t n = t.rows();
  if (n % factor != 0) {
    throw ShapeError("average_pool: factor " + std::to_string(factor) + " does not divide " + std::to_string(n));
  }
  const std::size_t m = n / factor;
  Tensor out({m, m}, t.dtype());
  const long lm = static_cast<long>(m);
#pragma omp parallel for schedule(static)
  for (long orow = 0; orow < lm; ++orow) {
    const auto r0 = static_cast<std::size_t>(orow) * factor;
    for (std::size_t oc = 0; oc < m; ++oc) {
      double sum = 0.0;
      for (std::size_t dr = 0; dr < factor; ++dr) {
        for (std::size_t dc = 0; dc < factor; ++dc) sum += t(r0 + dr, oc * factor + dc);
      }
      out(static_cast<std::size_t>(orow), oc) = sum / static_cast<double>(factor * factor);
    }
  }
  return out;
}

double predicted_corr_factor(double alpha) { return std::pow(2.0, 2.0 + alpha); }

InvarianceReport pooling_invariance_report(std::span<const Tensor> items, std::size_t factor,
                                           FitRange pre_range, FitRange post_range) {
  if (items.empty()) throw EmptyEnsembleError("pooling_invariance_report: ensemble is empty");

  double variance = 0.0;
  for (const auto& t : items) {
    const auto v = t.values();
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    for (double x : v) variance += (x - mean) * (x - mean) / static_cast<double>(v.size());
  }
  if (variance < 1e-12) {
    throw DegenerateInputError("pooling_invariance_report: every map is constant, spectrum is zero beyond DC");
  }

  std::vector<Tensor> pooled;
  pooled.reserve(items.size());
  for (const auto& t : items) {
    require_square_map(t, 4, "pooling_invariance_report");
    pooled.push_back(average_pool(t, factor));
  }

  InvarianceReport rep;
  rep.pre = ensemble_spectrum(items);
  rep.post = ensemble_spectrum(pooled);
  rep.alpha_pre = fit_power_law(rep.pre, pre_range);
  rep.alpha_post = fit_power_law(rep.post, post_range);
  rep.predicted_corr_factor = predicted_corr_factor(rep.alpha_pre.alpha);

  // Unnormalized transforms scale with pixel count; compare per-unit-amplitude.
  const double n_pre = static_cast<double>(rep.pre.grid_size);
  const double n_post = static_cast<double>(rep.post.grid_size);
  const double shift = 4.0 * (std::log(n_pre) - std::log(n_post));
  const std::size_t shared = rep.post.k_max() / 2;
  double gap = 0.0;
  std::size_t used = 0;
  for (std::size_t k = 1; k <= shared; ++k) {
    const double a = rep.pre.at(k);
    const double b = rep.post.at(k);
    if (a <= 0.0 || b <= 0.0) continue;
    gap += std::abs((std::log(a) - std::log(b)) - shift);
    ++used;
  }
  if (used == 0) throw InsufficientDataError("pooling_invariance_report: no shared positive low-frequency bins");
  rep.low_freq_log_gap = gap / static_cast<double>(used);
  return rep;
}

}  // namespace spectral
