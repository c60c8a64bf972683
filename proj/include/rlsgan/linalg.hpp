#ifndef RLSGAN_LINALG_HPP
#define RLSGAN_LINALG_HPP

#include <cstddef>
#include <vector>

namespace rlsgan::linalg {

// Dense row-major real matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  double* row(std::size_t i) { return data.data() + i * cols; }
  const double* row(std::size_t i) const { return data.data() + i * cols; }

  bool square() const { return rows == cols; }

  static Matrix identity(std::size_t n);
};

struct EigenDecomposition {
  std::vector<double> eigenvalues;  // descending
  Matrix eigenvectors;              // orthonormal columns, Q[:,j] <-> eigenvalues[j]
};

// C = A * B
Matrix matmul(const Matrix& a, const Matrix& b);
// C = A^T * B
Matrix matmul_tn(const Matrix& a, const Matrix& b);
// C = A * B^T
Matrix matmul_nt(const Matrix& a, const Matrix& b);

// A^T A, computed on the upper triangle and mirrored.
Matrix gram_tn(const Matrix& a);

Matrix transpose(const Matrix& a);

// y = A * x
std::vector<double> matvec(const Matrix& a, const std::vector<double>& x);

double max_abs(const Matrix& a);
double frobenius_norm(const Matrix& a);

// Throws unless |A_ij - A_ji| <= tol * max(1, |A_ij|) for all pairs.
void require_symmetric(const Matrix& a, double tol = 1e-12);

// Full eigendecomposition of a symmetric matrix by cyclic Jacobi
// rotations. Sweeps stop once the off-diagonal Frobenius norm falls
// below 1e-12 (scaled by max(1, ||A||_F)), capped at 100 sweeps.
EigenDecomposition sym_eig(const Matrix& a);

// Symmetric PSD square root via eigendecomposition. Eigenvalues below
// -1e-6 raise a numeric error; small negatives are clamped to `floor`.
Matrix psd_sqrt(const Matrix& a, double floor = 0.0);

// Solves A X = B for symmetric positive-definite A. Cholesky is the
// common path; if it breaks down, falls back to an eigendecomposition
// solve, raising a numeric error when A is singular within tolerance.
Matrix solve_spd(const Matrix& a, const Matrix& b);

// Lower-triangular Cholesky factor of an SPD matrix; returns false on
// a non-positive pivot instead of throwing.
bool cholesky(const Matrix& a, Matrix& lower);

// Solves L z = b for lower-triangular L, overwriting b columns in x.
Matrix forward_substitute(const Matrix& lower, const Matrix& b);

}  // namespace rlsgan::linalg

#endif  // RLSGAN_LINALG_HPP
