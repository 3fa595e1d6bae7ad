#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "geoinf/baselines.hpp"
#include "geoinf/bounds.hpp"
#include "geoinf/matrix.hpp"
#include "geoinf/monte_carlo.hpp"
#include "geoinf/set_model.hpp"

namespace geoinf {

struct OrthogonalMatrix {
  SquareMatrix m;
  std::uint64_t seed = 0;

  std::size_t dim() const noexcept { return m.dim(); }
};

/// Haar draw on O(n): QR of an n x n standard Gaussian matrix, with the
/// columns of Q flipped so that R has a positive diagonal.
OrthogonalMatrix haar_sample(std::size_t n, std::uint64_t seed);

/// max |(MᵀM - I)_{rc}|
double orthogonality_error(const SquareMatrix& m);
double determinant(const SquareMatrix& m);

/// g(A) = {M y : y in A}. Half-spaces and balls map to the same kind,
/// nested rotations compose, complements recurse; anything else is wrapped.
SetDescriptor rotate_set(const SetDescriptor& a, const SquareMatrix& m);

/// |u_i| phi(b) for a unit normal u under the standard Gaussian product.
/// Throws DomainError if |u|_2 differs from 1 by more than 1e-9.
std::vector<double> halfspace_influences_exact(std::span<const double> u, double b);

/// |M_j u|_1 phi(b) for the rotations M_j = haar_sample(n, derive(seed, j)).
std::vector<double> halfspace_rotation_sums(std::span<const double> u, double b, std::size_t rotations,
                                            std::uint64_t seed);

/// Seed of rotation j in a scan.
std::uint64_t rotation_seed(std::uint64_t seed, std::size_t j);

struct RotationScan {
  std::vector<Estimate> sums;  // sum_i I_i^G(M_j(A))
  double mean = 0.0;
  double mean_std_error = 0.0;
  double max = 0.0;
  std::size_t argmax = 0;
  Estimate measure;            // mu(A)
  BoundReport report;          // mean vs sqrt(n) t(1-t) sqrt(-log(t(1-t)))
};

/// Influence sums of Haar-rotated copies of a convex set under the standard
/// Gaussian product. Every rotation uses the same sample seed.
RotationScan rotation_scan(const SetDescriptor& a, std::size_t rotations, const McConfig& cfg,
                           const Baselines& baselines);

enum class CubeScale {
  regular,     // s = K n^{-1/2}, compared with A^{r/3}
  log_factor,  // s = K sqrt(log n) n^{-1/2}, compared with A^{r}
};

struct CubeEnlargement {
  double s = 0.0;
  Estimate lhs;               // E_M mu(A + Mᵀ(s [-r, r]^n))
  double measure = 0.0;       // mu(A), exact
  double neighbourhood = 0.0; // mu(A^{r/3}) or mu(A^r), exact (Euclidean)
  double rhs = 0.0;           // measure + (neighbourhood - measure) / 2
  bool pass = false;          // lhs >= rhs - 3 std_error
};

/// Supported for half-spaces (exact per rotation) and balls (Monte Carlo per
/// rotation); standard Gaussian product. CapabilityError otherwise.
CubeEnlargement random_cube_enlargement(const SetDescriptor& a, double r, double k_const, CubeScale scale,
                                        std::size_t rotations, const McConfig& cfg);

/// Exact standard Gaussian measure of a half-space or ball.
double gaussian_measure_exact(const SetDescriptor& a);

}  // namespace geoinf
