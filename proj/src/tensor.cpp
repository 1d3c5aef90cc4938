#include "spectral/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "spectral/errors.hpp"

namespace spectral {

namespace {

std::size_t checked_volume(const std::vector<std::size_t>& shape) {
  if (shape.size() < 2 || shape.size() > 4) {
    throw ShapeError("tensor rank must be 2..4, got " + std::to_string(shape.size()));
  }
  std::size_t n = 1;
  for (std::size_t d : shape) {
    if (d == 0) throw ShapeError("tensor dimensions must be positive");
    n *= d;
  }
  return n;
}

}  // namespace

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<double> data, DType dtype)
    : shape_(std::move(shape)), data_(std::move(data)), dtype_(dtype) {
  if (checked_volume(shape_) != data_.size()) {
    throw ShapeError("tensor data length " + std::to_string(data_.size()) +
                     " does not match its shape");
  }
}

Tensor::Tensor(std::vector<std::size_t> shape, DType dtype) : shape_(std::move(shape)), dtype_(dtype) {
  data_.assign(checked_volume(shape_), 0.0);
}

Tensor Tensor::map(std::size_t i) const {
  const std::size_t plane = rows() * cols();
  if (i >= map_count()) throw ShapeError("map index out of range");
  auto first = data_.begin() + static_cast<std::ptrdiff_t>(i * plane);
  return Tensor({rows(), cols()}, std::vector<double>(first, first + static_cast<std::ptrdiff_t>(plane)),
                dtype_);
}

bool Tensor::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

std::vector<Tensor> spatial_maps(const Tensor& t) {
  std::vector<Tensor> out;
  out.reserve(t.map_count());
  for (std::size_t i = 0; i < t.map_count(); ++i) out.push_back(t.map(i));
  return out;
}

void require_square_map(const Tensor& t, std::size_t min_n, const char* what) {
  if (t.rank() != 2) {
    throw ShapeError(std::string(what) + ": expected a rank-2 map, got rank " + std::to_string(t.rank()));
  }
  if (!t.is_square()) {
    throw ShapeError(std::string(what) + ": map must be square, got " + std::to_string(t.rows()) + "x" +
                     std::to_string(t.cols()));
  }
  if (t.rows() < min_n) {
    throw ShapeError(std::string(what) + ": map side must be at least " + std::to_string(min_n));
  }
}

}  // namespace spectral
