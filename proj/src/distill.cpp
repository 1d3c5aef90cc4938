#include "spectral/distill.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spectral/errors.hpp"
#include "spectral/fft.hpp"

namespace spectral {

namespace {

Tensor as_channels(const Tensor& t) {
  if (t.rank() == 2) return Tensor({1, t.rows(), t.cols()}, std::vector<double>(t.values().begin(), t.values().end()),
                                   t.dtype());
  if (t.rank() != 3) throw ShapeError("feature map must be rank 2 or 3 (C x H x W)");
  return t;
}

void require_compatible(const ReducedFeatureMap& t, const ReducedFeatureMap& s, const char* what) {
  if (t.tensor.shape() != s.tensor.shape()) {
    throw ShapeError(std::string(what) + ": teacher and student reduced maps differ in shape");
  }
  if (t.tensor.rank() != 3 || !t.tensor.is_square()) {
    throw ShapeError(std::string(what) + ": reduced maps must be M x N x N");
  }
}

}  // namespace

ReducedFeatureMap channel_reduce(const Tensor& input, std::size_t m, ReduceMethod method, Role role) {
  const Tensor t = as_channels(input);
  const std::size_t c = t.shape()[0];
  const std::size_t h = t.rows();
  const std::size_t w = t.cols();
  if (h != w) throw ShapeError("channel_reduce: spatial dims must be square");
  if (m < 1 || m > c) {
    throw ShapeError("channel_reduce: cannot reduce " + std::to_string(c) + " channels to " + std::to_string(m));
  }
  if (method == ReduceMethod::MeanGroup && c % m != 0) {
    throw ShapeError("channel_reduce: mean-group needs M to divide C (" + std::to_string(m) + " vs " +
                     std::to_string(c) + ")");
  }

  const std::size_t plane = h * w;
  Tensor out({m, h, w}, t.dtype());
  const auto src = t.values();
  auto dst = out.values();
  if (method == ReduceMethod::FirstM) {
    std::copy(src.begin(), src.begin() + static_cast<std::ptrdiff_t>(m * plane), dst.begin());
  } else {
    const std::size_t group = c / m;
    for (std::size_t g = 0; g < m; ++g) {
      for (std::size_t i = 0; i < plane; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < group; ++j) sum += src[(g * group + j) * plane + i];
        dst[g * plane + i] = sum / static_cast<double>(group);
      }
    }
  }
  return {std::move(out), role};
}

double fourier_l1(const ReducedFeatureMap& t, const ReducedFeatureMap& s) {
  require_compatible(t, s, "fourier_l1");
  const std::size_t m = t.channels();
  std::vector<double> per_channel(m);
  const long lm = static_cast<long>(m);
#pragma omp parallel for schedule(static)
  for (long i = 0; i < lm; ++i) {
    const auto ch = static_cast<std::size_t>(i);
    const ComplexGrid ft = dft2(t.tensor.map(ch));
    const ComplexGrid fs = dft2(s.tensor.map(ch));
    double sum = 0.0;
    for (std::size_t k = 0; k < ft.values().size(); ++k) sum += std::abs(ft.values()[k] - fs.values()[k]);
    per_channel[ch] = sum;
  }
  double total = 0.0;
  for (double v : per_channel) total += v;
  return total / static_cast<double>(m);
}

RadialSpectrum cross_power(const Tensor& x, const Tensor& y) {
  require_square_map(x, 4, "cross_power");
  if (x.shape() != y.shape()) throw ShapeError("cross_power: inputs differ in shape");
  return radial_average_real(dft2(x), dft2(y));
}

double cps_loss(const ReducedFeatureMap& t, const ReducedFeatureMap& s, CpsVariant variant, double epsilon) {
  if (!(epsilon > 0.0)) throw NonPositiveEpsilonError("cps_loss: epsilon must be positive");
  require_compatible(t, s, "cps_loss");
  const std::size_t m = t.channels();
  std::vector<double> per_channel(m);
  const long lm = static_cast<long>(m);
#pragma omp parallel for schedule(static)
  for (long i = 0; i < lm; ++i) {
    const auto ch = static_cast<std::size_t>(i);
    const ComplexGrid ft = dft2(t.tensor.map(ch));
    const ComplexGrid fs = dft2(s.tensor.map(ch));
    const RadialSpectrum pts = radial_average_real(ft, fs);
    const RadialSpectrum ptt = radial_average_real(ft, ft);
    const RadialSpectrum pss = radial_average_real(fs, fs);
    double sum = 0.0;
    for (std::size_t b = 0; b < pts.power.size(); ++b) {
      const double prod = ptt.power[b] * pss.power[b];
      const double denom = variant == CpsVariant::Paper ? prod + epsilon : std::sqrt(prod) + epsilon;
      sum += 1.0 - pts.power[b] / denom;
    }
    per_channel[ch] = sum / static_cast<double>(pts.power.size());
  }
  double total = 0.0;
  for (double v : per_channel) total += v;
  return total / static_cast<double>(m);
}

LossReport total_loss(std::optional<double> ce, std::optional<double> overhaul, double l1, double cps,
                      const LossWeights& w) {
  LossReport r;
  r.l1_fourier = l1;
  r.cps = cps;
  r.ce = ce;
  r.overhaul = overhaul;
  r.weights = w;
  r.total = ce.value_or(0.0) + w.alpha * overhaul.value_or(0.0) + w.beta * l1 + w.gamma * cps;
  return r;
}

const char* to_string(CpsVariant v) noexcept { return v == CpsVariant::Paper ? "paper" : "normalized"; }

CpsVariant parse_cps_variant(const std::string& s) {
  if (s == "paper") return CpsVariant::Paper;
  if (s == "normalized") return CpsVariant::Normalized;
  throw RangeError("unknown cps variant '" + s + "'");
}

ReduceMethod parse_reduce_method(const std::string& s) {
  if (s == "mean-group") return ReduceMethod::MeanGroup;
  if (s == "first-M" || s == "first-m") return ReduceMethod::FirstM;
  throw RangeError("unknown reduction '" + s + "'");
}

}  // namespace spectral
