#pragma once

// Dense kernels used by the solvers. Matrices are row-major; every kernel is
// instantiated for double and std::complex<double>.

#include <complex>
#include <cstddef>
#include <span>
#include <type_traits>
#include <vector>

#include "rab/error.hpp"

namespace rab {

using cplx = std::complex<double>;

template <typename T>
class Matrix {
 public:
  using value_type = T;

  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<T> entries);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> diag);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<T> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const T> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  std::span<T> entries() noexcept { return data_; }
  std::span<const T> entries() const noexcept { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using ComplexMatrix = Matrix<cplx>;
using RealMatrix = Matrix<double>;
using ComplexVector = std::vector<cplx>;
using RealVector = std::vector<double>;

namespace linalg {

/// Conjugate for complex scalars, identity for reals.
template <typename T>
constexpr T conj(const T& x) {
  if constexpr (std::is_same_v<T, cplx>) {
    return std::conj(x);
  } else {
    return x;
  }
}

template <typename T>
constexpr double real_part(const T& x) {
  if constexpr (std::is_same_v<T, cplx>) {
    return x.real();
  } else {
    return x;
  }
}

/// Default relative pivot threshold: a Cholesky pivot at or below
/// `kPivotTolerance * max(diag(H))` means the input is not positive definite.
inline constexpr double kPivotTolerance = 1e-12;

/// A^H A for an M x N matrix with M >= N. The result is exactly Hermitian.
template <typename T>
Matrix<T> gram(const Matrix<T>& a);

/// Upper-triangular B with B^H B = H and a real positive diagonal. Only the
/// upper triangle and the real part of the diagonal of H are read.
/// Throws NotPositiveDefinite when a pivot falls to the relative tolerance.
template <typename T>
Matrix<T> cholesky_upper(const Matrix<T>& h, double rel_tolerance = kPivotTolerance);

template <typename T>
struct EigenDecomposition {
  Matrix<T> vectors;  // columns are eigenvectors
  RealVector values;  // nonincreasing
};

/// Eigen-decomposition H = U diag(lambda) U^H of a Hermitian (or real
/// symmetric) matrix. Eigenvalues come back in decreasing order and each
/// eigenvector is scaled so its largest-magnitude entry is real positive.
template <typename T>
EigenDecomposition<T> hermitian_evd(const Matrix<T>& h);

enum class Side { Plain, Adjoint };

/// Solves B x = y (Side::Plain) or B^H x = y (Side::Adjoint) for upper-triangular B.
template <typename T>
std::vector<T> solve_upper(const Matrix<T>& b, std::span<const T> y, Side side = Side::Plain);

/// X = B^{-H} M for upper-triangular B, column by column of M.
template <typename T>
Matrix<T> solve_upper_adjoint(const Matrix<T>& b, const Matrix<T>& m);

template <typename T>
Matrix<T> adjoint(const Matrix<T>& m);

template <typename T>
Matrix<T> multiply(const Matrix<T>& lhs, const Matrix<T>& rhs);

/// (M + M^H) / 2.
template <typename T>
Matrix<T> hermitian_part(const Matrix<T>& m);

template <typename T>
std::vector<T> matvec(const Matrix<T>& m, std::span<const T> x);

/// M^H x.
template <typename T>
std::vector<T> adjoint_matvec(const Matrix<T>& m, std::span<const T> x);

/// x^H y.
template <typename T>
T dot(std::span<const T> x, std::span<const T> y);

template <typename T>
double norm2(std::span<const T> x);

/// Induced infinity norm (maximum absolute row sum).
template <typename T>
double norm_inf(const Matrix<T>& m);

template <typename T>
bool is_hermitian(const Matrix<T>& m, double tolerance);

}  // namespace linalg
}  // namespace rab
