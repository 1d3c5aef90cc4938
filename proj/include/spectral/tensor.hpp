#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace spectral {

enum class DType { F32, F64 };

/// Dense real array of rank 2..4 in row-major order. The spatial axes are the
/// last two. Values are held as double regardless of dtype; the dtype only
/// records the on-disk precision so that I/O round-trips bit-exactly.
class Tensor {
 public:
  Tensor() = default;
  Tensor(std::vector<std::size_t> shape, std::vector<double> data, DType dtype = DType::F64);
  explicit Tensor(std::vector<std::size_t> shape, DType dtype = DType::F64);

  /// Square N x N map filled with zeros.
  static Tensor square(std::size_t n) { return Tensor({n, n}); }

  const std::vector<std::size_t>& shape() const noexcept { return shape_; }
  std::size_t rank() const noexcept { return shape_.size(); }
  std::size_t size() const noexcept { return data_.size(); }
  DType dtype() const noexcept { return dtype_; }
  void set_dtype(DType d) noexcept { dtype_ = d; }

  std::size_t rows() const noexcept { return shape_[rank() - 2]; }
  std::size_t cols() const noexcept { return shape_[rank() - 1]; }
  bool is_square() const noexcept { return rows() == cols(); }
  /// Number of 2D maps stacked in the leading axes.
  std::size_t map_count() const noexcept { return size() / (rows() * cols()); }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

  // rank-2 access
  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols() + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols() + c]; }

  /// Copy of the i-th 2D map (rank-2 result).
  Tensor map(std::size_t i) const;

  bool all_finite() const noexcept;

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  std::vector<std::size_t> shape_{};
  std::vector<double> data_{};
  DType dtype_ = DType::F64;
};

/// Splits a rank 2..4 tensor into its stack of 2D maps (H x W images,
/// C x H x W channels, N x C x H x W batch channels).
std::vector<Tensor> spatial_maps(const Tensor& t);

/// Throws ShapeError unless t is rank 2, square, and at least min_n per side.
void require_square_map(const Tensor& t, std::size_t min_n, const char* what);

}  // namespace spectral
