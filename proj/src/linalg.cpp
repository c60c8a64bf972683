#include "rlsgan/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rlsgan/error.hpp"

namespace rlsgan::linalg {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols != b.rows)
    fail(ErrorCode::dimension_mismatch, "matmul: inner dimensions disagree");
  Matrix c(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i) {
    double* ci = c.row(i);
    const double* ai = a.row(i);
    for (std::size_t k = 0; k < a.cols; ++k) {
      const double aik = ai[k];
      const double* bk = b.row(k);
      for (std::size_t j = 0; j < b.cols; ++j) ci[j] += aik * bk[j];
    }
  }
  return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
  if (a.rows != b.rows)
    fail(ErrorCode::dimension_mismatch, "matmul_tn: inner dimensions disagree");
  Matrix c(a.cols, b.cols);
  for (std::size_t k = 0; k < a.rows; ++k) {
    const double* ak = a.row(k);
    const double* bk = b.row(k);
    for (std::size_t i = 0; i < a.cols; ++i) {
      const double aki = ak[i];
      double* ci = c.row(i);
      for (std::size_t j = 0; j < b.cols; ++j) ci[j] += aki * bk[j];
    }
  }
  return c;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
  if (a.cols != b.cols)
    fail(ErrorCode::dimension_mismatch, "matmul_nt: inner dimensions disagree");
  Matrix c(a.rows, b.rows);
  for (std::size_t i = 0; i < a.rows; ++i) {
    const double* ai = a.row(i);
    double* ci = c.row(i);
    for (std::size_t j = 0; j < b.rows; ++j) {
      const double* bj = b.row(j);
      double s = 0.0;
      for (std::size_t k = 0; k < a.cols; ++k) s += ai[k] * bj[k];
      ci[j] = s;
    }
  }
  return c;
}

Matrix gram_tn(const Matrix& a) {
  Matrix c(a.cols, a.cols);
  for (std::size_t k = 0; k < a.rows; ++k) {
    const double* ak = a.row(k);
    for (std::size_t i = 0; i < a.cols; ++i) {
      const double aki = ak[i];
      if (aki == 0.0) continue;
      double* ci = c.row(i);
      for (std::size_t j = i; j < a.cols; ++j) ci[j] += aki * ak[j];
    }
  }
  for (std::size_t i = 0; i < a.cols; ++i)
    for (std::size_t j = i + 1; j < a.cols; ++j) c(j, i) = c(i, j);
  return c;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols, a.rows);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j) t(j, i) = a(i, j);
  return t;
}

std::vector<double> matvec(const Matrix& a, const std::vector<double>& x) {
  if (a.cols != x.size())
    fail(ErrorCode::dimension_mismatch, "matvec: dimensions disagree");
  std::vector<double> y(a.rows, 0.0);
  for (std::size_t i = 0; i < a.rows; ++i) {
    const double* ai = a.row(i);
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols; ++j) s += ai[j] * x[j];
    y[i] = s;
  }
  return y;
}

double max_abs(const Matrix& a) {
  double m = 0.0;
  for (double v : a.data) m = std::max(m, std::fabs(v));
  return m;
}

double frobenius_norm(const Matrix& a) {
  double s = 0.0;
  for (double v : a.data) s += v * v;
  return std::sqrt(s);
}

void require_symmetric(const Matrix& a, double tol) {
  if (!a.square())
    fail(ErrorCode::dimension_mismatch, "symmetric operation on non-square matrix");
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = i + 1; j < a.cols; ++j) {
      const double d = std::fabs(a(i, j) - a(j, i));
      if (d > tol * std::max(1.0, std::fabs(a(i, j))))
        fail(ErrorCode::dimension_mismatch, "matrix is not symmetric within tolerance");
    }
}

namespace {

double off_diagonal_frobenius(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = i + 1; j < a.cols; ++j) s += a(i, j) * a(i, j);
  return std::sqrt(2.0 * s);
}

}  // namespace

EigenDecomposition sym_eig(const Matrix& input) {
  require_symmetric(input);
  const std::size_t n = input.rows;

  // Work on the symmetrized copy so rounding drift cannot accumulate.
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (input(i, j) + input(j, i));

  // Q is stored transposed (rows are eigenvector candidates) so rotations
  // touch contiguous memory.
  Matrix qt = Matrix::identity(n);

  const double threshold = 1e-12 * std::max(1.0, frobenius_norm(a));
  constexpr int kMaxSweeps = 100;

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_diagonal_frobenius(a) <= threshold) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::fabs(apq) == 0.0) continue;
        const double app = a(p, p);
        const double aqq = a(q, q);
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        // Rows p and q of J^T A, contiguous and vectorizable.
        double* rp = a.row(p);
        double* rq = a.row(q);
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = rp[k];
          const double akq = rq[k];
          rp[k] = c * akp - s * akq;
          rq[k] = s * akp + c * akq;
        }
        // Finish the 2x2 block, then mirror the rows onto the columns;
        // symmetry makes the column rotation a copy.
        {
          const double app = rp[p], apq2 = rp[q];
          rp[p] = c * app - s * apq2;
          rp[q] = s * app + c * apq2;
          const double aqp = rq[p], aqq2 = rq[q];
          rq[p] = c * aqp - s * aqq2;
          rq[q] = s * aqp + c * aqq2;
        }
        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          a(k, p) = rp[k];
          a(k, q) = rq[k];
        }
        double* qp = qt.row(p);
        double* qq = qt.row(q);
        for (std::size_t k = 0; k < n; ++k) {
          const double qkp = qp[k];
          const double qkq = qq[k];
          qp[k] = c * qkp - s * qkq;
          qq[k] = s * qkp + c * qkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

  EigenDecomposition e;
  e.eigenvalues.resize(n);
  e.eigenvectors = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    e.eigenvalues[j] = a(order[j], order[j]);
    const double* src = qt.row(order[j]);
    for (std::size_t i = 0; i < n; ++i) e.eigenvectors(i, j) = src[i];
  }
  return e;
}

Matrix psd_sqrt(const Matrix& a, double floor) {
  if (floor < 0.0) fail(ErrorCode::invalid_argument, "psd_sqrt: floor must be >= 0");
  EigenDecomposition e = sym_eig(a);
  const std::size_t n = a.rows;
  for (double& lambda : e.eigenvalues) {
    if (lambda < -1e-6)
      fail(ErrorCode::numeric, "psd_sqrt: matrix is not PSD (eigenvalue < -1e-6)");
    lambda = std::sqrt(std::max(lambda, floor));
  }
  // B = Q sqrt(L) Q^T, filled symmetric.
  Matrix b(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k)
        s += e.eigenvectors(i, k) * e.eigenvalues[k] * e.eigenvectors(j, k);
      b(i, j) = s;
      b(j, i) = s;
    }
  }
  return b;
}

bool cholesky(const Matrix& a, Matrix& lower) {
  const std::size_t n = a.rows;
  lower = Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = a(i, j);
      const double* li = lower.row(i);
      const double* lj = lower.row(j);
      for (std::size_t k = 0; k < j; ++k) s -= li[k] * lj[k];
      if (i == j) {
        if (!(s > 0.0) || !std::isfinite(s)) return false;
        lower(i, i) = std::sqrt(s);
      } else {
        lower(i, j) = s / lower(j, j);
      }
    }
  }
  return true;
}

Matrix forward_substitute(const Matrix& lower, const Matrix& b) {
  if (lower.rows != b.rows)
    fail(ErrorCode::dimension_mismatch, "forward_substitute: dimensions disagree");
  const std::size_t n = lower.rows;
  Matrix x = b;
  for (std::size_t i = 0; i < n; ++i) {
    const double* li = lower.row(i);
    double* xi = x.row(i);
    for (std::size_t k = 0; k < i; ++k) {
      const double lik = li[k];
      const double* xk = x.row(k);
      for (std::size_t j = 0; j < x.cols; ++j) xi[j] -= lik * xk[j];
    }
    const double d = li[i];
    for (std::size_t j = 0; j < x.cols; ++j) xi[j] /= d;
  }
  return x;
}

namespace {

Matrix back_substitute_transposed(const Matrix& lower, const Matrix& b) {
  // Solves L^T x = b.
  const std::size_t n = lower.rows;
  Matrix x = b;
  for (std::size_t ii = n; ii-- > 0;) {
    double* xi = x.row(ii);
    for (std::size_t k = ii + 1; k < n; ++k) {
      const double lki = lower(k, ii);
      const double* xk = x.row(k);
      for (std::size_t j = 0; j < x.cols; ++j) xi[j] -= lki * xk[j];
    }
    const double d = lower(ii, ii);
    for (std::size_t j = 0; j < x.cols; ++j) xi[j] /= d;
  }
  return x;
}

}  // namespace

Matrix solve_spd(const Matrix& a, const Matrix& b) {
  require_symmetric(a, 1e-9);
  if (a.rows != b.rows)
    fail(ErrorCode::dimension_mismatch, "solve_spd: right-hand side rows disagree");

  Matrix lower;
  if (cholesky(a, lower)) {
    Matrix y = forward_substitute(lower, b);
    return back_substitute_transposed(lower, y);
  }

  // Fallback: eigendecomposition solve for PD matrices Cholesky rejects.
  EigenDecomposition e = sym_eig(a);
  const double lambda_max = e.eigenvalues.empty() ? 0.0 : e.eigenvalues.front();
  if (!(lambda_max > 0.0))
    fail(ErrorCode::numeric, "solve_spd: matrix is singular within tolerance");
  const double cutoff = 1e-12 * lambda_max;
  for (double lambda : e.eigenvalues)
    if (lambda <= cutoff)
      fail(ErrorCode::numeric, "solve_spd: matrix is singular within tolerance");

  Matrix qtb = matmul_tn(e.eigenvectors, b);
  for (std::size_t i = 0; i < qtb.rows; ++i) {
    const double inv = 1.0 / e.eigenvalues[i];
    double* r = qtb.row(i);
    for (std::size_t j = 0; j < qtb.cols; ++j) r[j] *= inv;
  }
  return matmul(e.eigenvectors, qtb);
}

}  // namespace rlsgan::linalg
