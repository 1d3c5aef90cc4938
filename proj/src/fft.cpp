#include "spectral/fft.hpp"

#include <cmath>
#include <numbers>

#include <omp.h>

#include "spectral/errors.hpp"

namespace spectral {

namespace {

bool is_pow2(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_pow2(std::size_t n) noexcept {
  std::size_t m = 1;
  while (m < n) m <<= 1;
  return m;
}

// Runs fn(row_span) over every row, then fn(column) over every column using a
// per-thread scratch buffer.
template <typename Fn>
void for_rows_then_cols(ComplexGrid& g, Fn&& fn) {
  const std::size_t n = g.n();
  auto& v = g.values();
  const long ln = static_cast<long>(n);

#pragma omp parallel for schedule(static)
  for (long r = 0; r < ln; ++r) {
    fn(std::span<Complex>(v.data() + static_cast<std::size_t>(r) * n, n));
  }

#pragma omp parallel
  {
    std::vector<Complex> col(n);
#pragma omp for schedule(static)
    for (long c = 0; c < ln; ++c) {
      for (std::size_t r = 0; r < n; ++r) col[r] = v[r * n + static_cast<std::size_t>(c)];
      fn(std::span<Complex>(col));
      for (std::size_t r = 0; r < n; ++r) v[r * n + static_cast<std::size_t>(c)] = col[r];
    }
  }
}

}  // namespace

FftPlan::FftPlan(std::size_t n) : n_(n), pow2_(is_pow2(n)) {
  if (n == 0) throw ShapeError("FFT length must be positive");
  if (pow2_) {
    twiddle_.resize(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
      const double a = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
      twiddle_[k] = {std::cos(a), std::sin(a)};
    }
    bitrev_.resize(n);
    std::size_t bits = 0;
    while ((std::size_t{1} << bits) < n) ++bits;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t r = 0;
      for (std::size_t b = 0; b < bits; ++b) r |= ((i >> b) & 1u) << (bits - 1 - b);
      bitrev_[i] = r;
    }
    return;
  }

  // Bluestein: nk = (n^2 + k^2 - (k - n)^2) / 2 turns the DFT into a
  // convolution with the chirp exp(i pi j^2 / N).
  m_ = next_pow2(2 * n - 1);
  inner_ = std::make_unique<FftPlan>(m_);
  chirp_.resize(n);
  const std::size_t two_n = 2 * n;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t jj = (j * j) % two_n;  // exact phase reduction
    const double a = -std::numbers::pi * static_cast<double>(jj) / static_cast<double>(n);
    chirp_[j] = {std::cos(a), std::sin(a)};
  }
  std::vector<Complex> filter(m_, Complex{});
  filter[0] = std::conj(chirp_[0]);
  for (std::size_t j = 1; j < n; ++j) {
    filter[j] = std::conj(chirp_[j]);
    filter[m_ - j] = std::conj(chirp_[j]);
  }
  inner_->transform(filter, false);
  chirp_fft_ = std::move(filter);
}

void FftPlan::radix2(std::span<Complex> a, bool inverse) const {
  const std::size_t n = n_;
  for (std::size_t i = 0; i < n; ++i) {
    if (i < bitrev_[i]) std::swap(a[i], a[bitrev_[i]]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t step = n / len;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t j = 0; j < half; ++j) {
        Complex w = twiddle_[j * step];
        if (inverse) w = std::conj(w);
        const Complex u = a[start + j];
        const Complex t = w * a[start + j + half];
        a[start + j] = u + t;
        a[start + j + half] = u - t;
      }
    }
  }
}

void FftPlan::transform(std::span<Complex> data, bool inverse) const {
  if (data.size() != n_) throw ShapeError("FFT buffer length does not match the plan");
  if (pow2_) {
    radix2(data, inverse);
    return;
  }
  // inverse(x) = conj(forward(conj(x)))
  std::vector<Complex> work(m_, Complex{});
  for (std::size_t j = 0; j < n_; ++j) {
    const Complex x = inverse ? std::conj(data[j]) : data[j];
    work[j] = x * chirp_[j];
  }
  inner_->transform(work, false);
  for (std::size_t j = 0; j < m_; ++j) work[j] *= chirp_fft_[j];
  inner_->transform(work, true);
  const double scale = 1.0 / static_cast<double>(m_);
  for (std::size_t k = 0; k < n_; ++k) {
    const Complex y = work[k] * scale * chirp_[k];
    data[k] = inverse ? std::conj(y) : y;
  }
}

ComplexGrid dft2(const ComplexGrid& g) {
  ComplexGrid out = g;
  const FftPlan plan(g.n());
  for_rows_then_cols(out, [&plan](std::span<Complex> s) { plan.transform(s, false); });
  return out;
}

ComplexGrid dft2(const Tensor& t) {
  require_square_map(t, 4, "dft2");
  ComplexGrid g(t.rows());
  const auto src = t.values();
  auto& dst = g.values();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = Complex(src[i], 0.0);
  return dft2(g);
}

ComplexGrid idft2(const ComplexGrid& g) {
  ComplexGrid out = g;
  const FftPlan plan(g.n());
  for_rows_then_cols(out, [&plan](std::span<Complex> s) { plan.transform(s, true); });
  const double scale = 1.0 / static_cast<double>(g.n() * g.n());
  for (auto& v : out.values()) v *= scale;
  return out;
}

Tensor idft2_real(const ComplexGrid& g) {
  const ComplexGrid c = idft2(g);
  Tensor t = Tensor::square(g.n());
  auto dst = t.values();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = c.values()[i].real();
  return t;
}

Tensor power_grid(const ComplexGrid& g) {
  Tensor t = Tensor::square(g.n());
  auto dst = t.values();
  const auto& src = g.values();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = std::norm(src[i]);
  return t;
}

}  // namespace spectral
