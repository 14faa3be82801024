#include "rab/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace rab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::SingularTriangular: return "SingularTriangular";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::InvalidProblem: return "InvalidProblem";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::BracketFailure: return "BracketFailure";
    case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::RootNotFound: return "RootNotFound";
    case ErrorCode::PoleHit: return "PoleHit";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

template <typename T>
Matrix<T>::Matrix(std::size_t rows, std::size_t cols, std::vector<T> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    throw Error(ErrorCode::DimensionMismatch,
                "matrix entries " + std::to_string(data_.size()) + " != " + std::to_string(rows) + "x" +
                    std::to_string(cols));
  }
}

template <typename T>
Matrix<T> Matrix<T>::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
  return m;
}

template <typename T>
Matrix<T> Matrix<T>::diagonal(std::span<const double> diag) {
  Matrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = T{diag[i]};
  return m;
}

template class Matrix<double>;
template class Matrix<cplx>;

namespace linalg {
namespace {

template <typename T>
void require_square(const Matrix<T>& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + ": matrix is " + std::to_string(m.rows()) +
                                                  "x" + std::to_string(m.cols()) + ", expected square");
  }
}

template <typename T>
double abs2(const T& x) {
  if constexpr (std::is_same_v<T, cplx>) {
    return std::norm(x);
  } else {
    return x * x;
  }
}

// Smallest usable |B_ii| relative to the largest one.
constexpr double kTriangularTolerance = 1e-15;

template <typename T>
void check_triangular_diagonal(const Matrix<T>& b) {
  double largest = 0.0;
  for (std::size_t i = 0; i < b.rows(); ++i) largest = std::max(largest, std::abs(b(i, i)));
  for (std::size_t i = 0; i < b.rows(); ++i) {
    const double d = std::abs(b(i, i));
    if (!(d > kTriangularTolerance * largest) || d == 0.0) {
      throw Error(ErrorCode::SingularTriangular, "diagonal entry " + std::to_string(i) + " is " + std::to_string(d));
    }
  }
}

}  // namespace

template <typename T>
Matrix<T> gram(const Matrix<T>& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (m < n) {
    throw Error(ErrorCode::DimensionMismatch,
                "gram: need rows >= cols, got " + std::to_string(m) + "x" + std::to_string(n));
  }
  // Accumulate the upper triangle as a sum of rank-one row updates.
  Matrix<T> g(n, n);
  for (std::size_t r = 0; r < m; ++r) {
    auto row = a.row(r);
    for (std::size_t i = 0; i < n; ++i) {
      const T ci = conj(row[i]);
      if (ci == T{}) continue;
      T* out = &g(i, 0);
      for (std::size_t j = i; j < n; ++j) out[j] += ci * row[j];
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    g(i, i) = T{real_part(g(i, i))};
    for (std::size_t j = i + 1; j < n; ++j) g(j, i) = conj(g(i, j));
  }
  return g;
}

template <typename T>
Matrix<T> cholesky_upper(const Matrix<T>& h, double rel_tolerance) {
  require_square(h, "cholesky_upper");
  const std::size_t n = h.rows();
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, real_part(h(i, i)));
  const double threshold = rel_tolerance * max_diag;

  // Right-looking variant on the upper triangle; each update is a row axpy.
  Matrix<T> b(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) b(i, j) = h(i, j);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double pivot = real_part(b(i, i));
    if (!(pivot > threshold) || max_diag <= 0.0) {
      throw Error(ErrorCode::NotPositiveDefinite,
                  "pivot " + std::to_string(i) + " = " + std::to_string(pivot) + " (threshold " +
                      std::to_string(threshold) + ")");
    }
    const double d = std::sqrt(pivot);
    T* bi = &b(i, 0);
    bi[i] = T{d};
    for (std::size_t j = i + 1; j < n; ++j) bi[j] /= d;
    for (std::size_t r = i + 1; r < n; ++r) {
      const T factor = conj(bi[r]);
      if (factor == T{}) continue;
      T* br = &b(r, 0);
      for (std::size_t j = r; j < n; ++j) br[j] -= factor * bi[j];
    }
  }
  return b;
}

template <typename T>
EigenDecomposition<T> hermitian_evd(const Matrix<T>& h) {
  require_square(h, "hermitian_evd");
  const auto n = static_cast<Eigen::Index>(h.rows());
  using EigenMatrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
  EigenMatrix work(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      work(i, j) = h(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    }
  }
  Eigen::SelfAdjointEigenSolver<EigenMatrix> solver(work, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NoConvergence, "hermitian_evd: QL iteration did not converge");
  }

  EigenDecomposition<T> out;
  out.values.resize(static_cast<std::size_t>(n));
  out.vectors = Matrix<T>(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  const auto& values = solver.eigenvalues();
  const auto& vectors = solver.eigenvectors();
  for (Eigen::Index k = 0; k < n; ++k) {
    // Eigen returns ascending order.
    const Eigen::Index src = n - 1 - k;
    out.values[static_cast<std::size_t>(k)] = values(src);

    Eigen::Index pivot = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double mag = std::abs(vectors(i, src));
      if (mag > best + 1e-14 * best) {
        best = mag;
        pivot = i;
      }
    }
    T phase{1};
    if (best > 0.0) phase = conj(vectors(pivot, src)) / best;
    for (Eigen::Index i = 0; i < n; ++i) {
      out.vectors(static_cast<std::size_t>(i), static_cast<std::size_t>(k)) = vectors(i, src) * phase;
    }
    out.vectors(static_cast<std::size_t>(pivot), static_cast<std::size_t>(k)) = T{best};
  }
  return out;
}

template <typename T>
std::vector<T> solve_upper(const Matrix<T>& b, std::span<const T> y, Side side) {
  require_square(b, "solve_upper");
  const std::size_t n = b.rows();
  if (y.size() != n) {
    throw Error(ErrorCode::DimensionMismatch,
                "solve_upper: rhs length " + std::to_string(y.size()) + " != " + std::to_string(n));
  }
  check_triangular_diagonal(b);
  std::vector<T> x(y.begin(), y.end());
  if (side == Side::Plain) {
    for (std::size_t ii = n; ii-- > 0;) {
      auto row = b.row(ii);
      T acc = x[ii];
      for (std::size_t j = ii + 1; j < n; ++j) acc -= row[j] * x[j];
      x[ii] = acc / row[ii];
    }
  } else {
    // B^H is lower triangular; sweep rows of B so the inner loop is contiguous.
    for (std::size_t i = 0; i < n; ++i) {
      auto row = b.row(i);
      x[i] /= conj(row[i]);
      const T xi = x[i];
      for (std::size_t j = i + 1; j < n; ++j) x[j] -= conj(row[j]) * xi;
    }
  }
  return x;
}

template <typename T>
Matrix<T> solve_upper_adjoint(const Matrix<T>& b, const Matrix<T>& m) {
  require_square(b, "solve_upper_adjoint");
  const std::size_t n = b.rows();
  if (m.rows() != n) {
    throw Error(ErrorCode::DimensionMismatch, "solve_upper_adjoint: rhs has " + std::to_string(m.rows()) +
                                                  " rows, expected " + std::to_string(n));
  }
  check_triangular_diagonal(b);
  const std::size_t p = m.cols();
  Matrix<T> x = m;
  for (std::size_t i = 0; i < n; ++i) {
    auto brow = b.row(i);
    T* xi = &x(i, 0);
    const T inv = T{1} / conj(brow[i]);
    for (std::size_t c = 0; c < p; ++c) xi[c] *= inv;
    for (std::size_t j = i + 1; j < n; ++j) {
      const T factor = conj(brow[j]);
      if (factor == T{}) continue;
      T* xj = &x(j, 0);
      for (std::size_t c = 0; c < p; ++c) xj[c] -= factor * xi[c];
    }
  }
  return x;
}

template <typename T>
Matrix<T> adjoint(const Matrix<T>& m) {
  Matrix<T> out(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out(j, i) = conj(m(i, j));
  }
  return out;
}

template <typename T>
Matrix<T> multiply(const Matrix<T>& lhs, const Matrix<T>& rhs) {
  if (lhs.cols() != rhs.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "multiply: inner dimensions " + std::to_string(lhs.cols()) +
                                                  " and " + std::to_string(rhs.rows()));
  }
  Matrix<T> out(lhs.rows(), rhs.cols());
  for (std::size_t i = 0; i < lhs.rows(); ++i) {
    T* oi = &out(i, 0);
    for (std::size_t k = 0; k < lhs.cols(); ++k) {
      const T lik = lhs(i, k);
      if (lik == T{}) continue;
      auto rk = rhs.row(k);
      for (std::size_t j = 0; j < rhs.cols(); ++j) oi[j] += lik * rk[j];
    }
  }
  return out;
}

template <typename T>
Matrix<T> hermitian_part(const Matrix<T>& m) {
  require_square(m, "hermitian_part");
  Matrix<T> out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    out(i, i) = T{real_part(m(i, i))};
    for (std::size_t j = i + 1; j < m.cols(); ++j) {
      const T avg = (m(i, j) + conj(m(j, i))) * 0.5;
      out(i, j) = avg;
      out(j, i) = conj(avg);
    }
  }
  return out;
}

template <typename T>
std::vector<T> matvec(const Matrix<T>& m, std::span<const T> x) {
  if (x.size() != m.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "matvec: vector length " + std::to_string(x.size()) + " != " +
                                                  std::to_string(m.cols()));
  }
  std::vector<T> out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto row = m.row(i);
    T acc{};
    for (std::size_t j = 0; j < row.size(); ++j) acc += row[j] * x[j];
    out[i] = acc;
  }
  return out;
}

template <typename T>
std::vector<T> adjoint_matvec(const Matrix<T>& m, std::span<const T> x) {
  if (x.size() != m.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "adjoint_matvec: vector length " + std::to_string(x.size()) +
                                                  " != " + std::to_string(m.rows()));
  }
  std::vector<T> out(m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto row = m.row(i);
    const T xi = x[i];
    for (std::size_t j = 0; j < row.size(); ++j) out[j] += conj(row[j]) * xi;
  }
  return out;
}

template <typename T>
T dot(std::span<const T> x, std::span<const T> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::DimensionMismatch, "dot: lengths differ");
  }
  T acc{};
  for (std::size_t i = 0; i < x.size(); ++i) acc += conj(x[i]) * y[i];
  return acc;
}

template <typename T>
double norm2(std::span<const T> x) {
  double scale = 0.0;
  for (const auto& v : x) scale = std::max(scale, std::abs(v));
  if (scale == 0.0 || !std::isfinite(scale)) return scale;
  double acc = 0.0;
  for (const auto& v : x) acc += abs2(v / scale);
  return scale * std::sqrt(acc);
}

template <typename T>
double norm_inf(const Matrix<T>& m) {
  double best = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double sum = 0.0;
    for (const auto& v : m.row(i)) sum += std::abs(v);
    best = std::max(best, sum);
  }
  return best;
}

template <typename T>
bool is_hermitian(const Matrix<T>& m, double tolerance) {
  if (m.rows() != m.cols()) return false;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = i; j < m.cols(); ++j) {
      if (std::abs(m(i, j) - conj(m(j, i))) > tolerance) return false;
    }
  }
  return true;
}

#define RAB_INSTANTIATE(T)                                                                 \
  template Matrix<T> gram(const Matrix<T>&);                                               \
  template Matrix<T> cholesky_upper(const Matrix<T>&, double);                             \
  template EigenDecomposition<T> hermitian_evd(const Matrix<T>&);                          \
  template std::vector<T> solve_upper(const Matrix<T>&, std::span<const T>, Side);         \
  template Matrix<T> solve_upper_adjoint(const Matrix<T>&, const Matrix<T>&);              \
  template Matrix<T> adjoint(const Matrix<T>&);                                            \
  template Matrix<T> multiply(const Matrix<T>&, const Matrix<T>&);                         \
  template Matrix<T> hermitian_part(const Matrix<T>&);                                     \
  template std::vector<T> matvec(const Matrix<T>&, std::span<const T>);                    \
  template std::vector<T> adjoint_matvec(const Matrix<T>&, std::span<const T>);            \
  template T dot(std::span<const T>, std::span<const T>);                                  \
  template double norm2(std::span<const T>);                                               \
  template double norm_inf(const Matrix<T>&);                                              \
  template bool is_hermitian(const Matrix<T>&, double);

RAB_INSTANTIATE(double)
RAB_INSTANTIATE(cplx)

#undef RAB_INSTANTIATE

}  // namespace linalg
}  // namespace rab
