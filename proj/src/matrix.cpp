#include "geoinf/matrix.hpp"

#include "geoinf/error.hpp"

namespace geoinf {

SquareMatrix::SquareMatrix(std::size_t n, std::vector<double> row_major) : n_(n), a_(std::move(row_major)) {
  if (a_.size() != n * n) throw DomainError("SquareMatrix: expected n*n entries");
}

SquareMatrix SquareMatrix::identity(std::size_t n) {
  SquareMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

void SquareMatrix::apply(std::span<const double> x, std::span<double> out) const {
  for (std::size_t r = 0; r < n_; ++r) {
    double acc = 0.0;
    const double* row = a_.data() + r * n_;
    for (std::size_t c = 0; c < n_; ++c) acc += row[c] * x[c];
    out[r] = acc;
  }
}

void SquareMatrix::apply_transpose(std::span<const double> x, std::span<double> out) const {
  for (std::size_t c = 0; c < n_; ++c) out[c] = 0.0;
  for (std::size_t r = 0; r < n_; ++r) {
    const double xr = x[r];
    const double* row = a_.data() + r * n_;
    for (std::size_t c = 0; c < n_; ++c) out[c] += row[c] * xr;
  }
}

std::vector<double> SquareMatrix::apply(std::span<const double> x) const {
  std::vector<double> out(n_);
  apply(x, out);
  return out;
}

std::vector<double> SquareMatrix::apply_transpose(std::span<const double> x) const {
  std::vector<double> out(n_);
  apply_transpose(x, out);
  return out;
}

SquareMatrix SquareMatrix::transposed() const {
  SquareMatrix t(n_);
  for (std::size_t r = 0; r < n_; ++r)
    for (std::size_t c = 0; c < n_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

SquareMatrix SquareMatrix::operator*(const SquareMatrix& rhs) const {
  if (rhs.n_ != n_) throw DomainError("SquareMatrix: dimension mismatch");
  SquareMatrix p(n_);
  for (std::size_t r = 0; r < n_; ++r)
    for (std::size_t k = 0; k < n_; ++k) {
      const double a = (*this)(r, k);
      for (std::size_t c = 0; c < n_; ++c) p(r, c) += a * rhs(k, c);
    }
  return p;
}

}  // namespace geoinf
