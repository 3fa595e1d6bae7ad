#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace geoinf {

/// Square row-major matrix; just enough linear algebra for rotated sets.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}
  SquareMatrix(std::size_t n, std::vector<double> row_major);

  static SquareMatrix identity(std::size_t n);

  std::size_t dim() const noexcept { return n_; }
  double& operator()(std::size_t r, std::size_t c) { return a_[r * n_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return a_[r * n_ + c]; }
  std::span<const double> row(std::size_t r) const { return {a_.data() + r * n_, n_}; }
  const std::vector<double>& data() const noexcept { return a_; }

  /// out = M x
  void apply(std::span<const double> x, std::span<double> out) const;
  /// out = Mᵀ x
  void apply_transpose(std::span<const double> x, std::span<double> out) const;
  std::vector<double> apply(std::span<const double> x) const;
  std::vector<double> apply_transpose(std::span<const double> x) const;

  SquareMatrix transposed() const;
  SquareMatrix operator*(const SquareMatrix& rhs) const;

 private:
  std::size_t n_ = 0;
  std::vector<double> a_;
};

}  // namespace geoinf
