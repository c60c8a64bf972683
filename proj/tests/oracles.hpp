// Test-only reference implementations, kept independent of the library
// code paths they validate.
#ifndef RLSGAN_TESTS_ORACLES_HPP
#define RLSGAN_TESTS_ORACLES_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include "rlsgan/linalg.hpp"
#include "rlsgan/rng.hpp"

namespace oracles {

using rlsgan::linalg::Matrix;

// Gauss-Jordan inverse with partial pivoting.
inline Matrix gj_inverse(const Matrix& a) {
  const std::size_t n = a.rows;
  Matrix work = a;
  Matrix inv = Matrix::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(work(r, col)) > std::fabs(work(pivot, col))) pivot = r;
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(work(col, j), work(pivot, j));
        std::swap(inv(col, j), inv(pivot, j));
      }
    }
    const double d = work(col, col);
    for (std::size_t j = 0; j < n; ++j) {
      work(col, j) /= d;
      inv(col, j) /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = work(r, col);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        work(r, j) -= f * work(col, j);
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

inline Matrix naive_matmul(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < b.cols; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < a.cols; ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  return c;
}

// Leverage scores straight from the defining expression
// diag(K (K + n gamma I)^-1) using the explicit inverse.
inline std::vector<double> rls_by_inverse(const Matrix& kernel, double gamma) {
  const std::size_t n = kernel.rows;
  Matrix shifted = kernel;
  for (std::size_t i = 0; i < n; ++i)
    shifted(i, i) += static_cast<double>(n) * gamma;
  const Matrix prod = naive_matmul(kernel, gj_inverse(shifted));
  std::vector<double> scores(n);
  for (std::size_t i = 0; i < n; ++i) scores[i] = prod(i, i);
  return scores;
}

inline double rls_trace_by_inverse(const Matrix& kernel, double gamma) {
  const std::vector<double> scores = rls_by_inverse(kernel, gamma);
  double t = 0.0;
  for (double s : scores) t += s;
  return t;
}

// Classic two-sided Jacobi, written for the tests only.
inline void jacobi_eig(const Matrix& input, std::vector<double>& values,
                       Matrix& vectors) {
  const std::size_t n = input.rows;
  Matrix a = input;
  vectors = Matrix::identity(n);
  for (int sweep = 0; sweep < 200; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    if (off < 1e-26) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::fabs(a(p, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = vectors(k, p), vkq = vectors(k, q);
          vectors(k, p) = c * vkp - s * vkq;
          vectors(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  values.resize(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = a(i, i);
}

// PSD square root through the test-local eigensolver.
inline Matrix psd_sqrt_ref(const Matrix& a) {
  std::vector<double> values;
  Matrix q;
  jacobi_eig(a, values, q);
  const std::size_t n = a.rows;
  Matrix b(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k)
        s += q(i, k) * std::sqrt(std::max(values[k], 0.0)) * q(j, k);
      b(i, j) = s;
    }
  return b;
}

// Squared Bures distance via the alternative factorization order
// Tr(C_d) + Tr(C_g) - 2 Tr((C_d^1/2 C_g C_d^1/2)^1/2).
inline double bures_sq_ref(const Matrix& c_d, const Matrix& c_g) {
  const Matrix root = psd_sqrt_ref(c_d);
  const Matrix inner = naive_matmul(root, naive_matmul(c_g, root));
  std::vector<double> values;
  Matrix q;
  jacobi_eig(inner, values, q);
  double sqrt_sum = 0.0;
  for (double v : values) sqrt_sum += std::sqrt(std::max(v, 0.0));
  double tr = 0.0;
  for (std::size_t i = 0; i < c_d.rows; ++i) tr += c_d(i, i) + c_g(i, i);
  return tr - 2.0 * sqrt_sum;
}

// Random helpers shared by the test files.
inline Matrix random_matrix(std::size_t r, std::size_t c, rlsgan::Rng& rng,
                            double scale = 1.0) {
  Matrix m(r, c);
  for (double& v : m.data) v = rng.normal() * scale;
  return m;
}

inline Matrix random_spd(std::size_t n, rlsgan::Rng& rng, double ridge = 0.5) {
  const Matrix m = random_matrix(n, n, rng);
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += m(k, i) * m(k, j);
      a(i, j) = s;
    }
  for (std::size_t i = 0; i < n; ++i) a(i, i) += ridge;
  return a;
}

inline Matrix random_psd(std::size_t n, rlsgan::Rng& rng) {
  return random_spd(n, rng, 0.0);
}

}  // namespace oracles

#endif  // RLSGAN_TESTS_ORACLES_HPP
