#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "rlsgan/error.hpp"
#include "rlsgan/linalg.hpp"
#include "rlsgan/rng.hpp"

using namespace rlsgan;
using linalg::Matrix;

namespace {

double reconstruction_error(const Matrix& a, const linalg::EigenDecomposition& e) {
  const std::size_t n = a.rows;
  double err = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k)
        s += e.eigenvectors(i, k) * e.eigenvalues[k] * e.eigenvectors(j, k);
      err = std::max(err, std::fabs(s - a(i, j)));
    }
  return err;
}

double orthonormality_error(const Matrix& q) {
  const Matrix qtq = linalg::matmul_tn(q, q);
  double err = 0.0;
  for (std::size_t i = 0; i < q.cols; ++i)
    for (std::size_t j = 0; j < q.cols; ++j)
      err = std::max(err, std::fabs(qtq(i, j) - (i == j ? 1.0 : 0.0)));
  return err;
}

}  // namespace

TEST_CASE("sym_eig identity and diagonal") {
  const Matrix id = Matrix::identity(3);
  const auto e = linalg::sym_eig(id);
  for (double v : e.eigenvalues) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(orthonormality_error(e.eigenvectors) < 1e-9);

  Matrix d(2, 2);
  d(0, 0) = 4.0;
  d(1, 1) = 1.0;
  const auto ed = linalg::sym_eig(d);
  CHECK(ed.eigenvalues[0] == doctest::Approx(4.0));
  CHECK(ed.eigenvalues[1] == doctest::Approx(1.0));
  CHECK(std::fabs(ed.eigenvectors(0, 0)) == doctest::Approx(1.0));
  CHECK(std::fabs(ed.eigenvectors(1, 1)) == doctest::Approx(1.0));
}

TEST_CASE("sym_eig random reconstruction") {
  Rng rng(42);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 5;
    Matrix a = oracles::random_matrix(n, n, rng);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j) a(j, i) = a(i, j);
    const auto e = linalg::sym_eig(a);
    CHECK(reconstruction_error(a, e) <= 1e-8 * std::max(1.0, linalg::max_abs(a)));
    CHECK(orthonormality_error(e.eigenvectors) <= 1e-9);
    CHECK(std::is_sorted(e.eigenvalues.rbegin(), e.eigenvalues.rend()));
  }
}

TEST_CASE("sym_eig eigenvalues invariant under symmetric permutation") {
  Rng rng(7);
  const std::size_t n = 6;
  Matrix a = oracles::random_spd(n, rng);
  const auto e1 = linalg::sym_eig(a);

  // P^T A P for a cyclic permutation.
  Matrix p(n, n);
  for (std::size_t i = 0; i < n; ++i) p((i + 1) % n, i) = 1.0;
  const Matrix permuted = linalg::matmul_tn(p, linalg::matmul(a, p));
  const auto e2 = linalg::sym_eig(permuted);
  for (std::size_t i = 0; i < n; ++i)
    CHECK(std::fabs(e1.eigenvalues[i] - e2.eigenvalues[i]) <= 1e-9);
}

TEST_CASE("sym_eig rejects bad input") {
  CHECK_THROWS_AS(linalg::sym_eig(Matrix(2, 3)), Error);
  Matrix asym(2, 2);
  asym(0, 1) = 1.0;
  asym(1, 0) = 0.5;
  CHECK_THROWS_AS(linalg::sym_eig(asym), Error);
}

TEST_CASE("psd_sqrt identity and diagonal") {
  const Matrix id = Matrix::identity(4);
  const Matrix b = linalg::psd_sqrt(id);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      CHECK(b(i, j) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-10));

  Matrix d(2, 2);
  d(0, 0) = 4.0;
  d(1, 1) = 9.0;
  const Matrix bd = linalg::psd_sqrt(d);
  CHECK(bd(0, 0) == doctest::Approx(2.0));
  CHECK(bd(1, 1) == doctest::Approx(3.0));
}

TEST_CASE("psd_sqrt squares back to the input") {
  Rng rng(3);
  const Matrix a = oracles::random_psd(4, rng);
  const Matrix b = linalg::psd_sqrt(a);
  const Matrix bb = linalg::matmul(b, b);
  const double scale = std::max(1.0, linalg::max_abs(a));
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j)
      CHECK(std::fabs(bb(i, j) - a(i, j)) <= 1e-7 * scale);
}

TEST_CASE("psd_sqrt scaling property") {
  Rng rng(11);
  const Matrix a = oracles::random_psd(5, rng);
  const double c = 2.5;
  Matrix scaled = a;
  for (double& v : scaled.data) v *= c * c;
  const Matrix b1 = linalg::psd_sqrt(scaled);
  const Matrix b2 = linalg::psd_sqrt(a);
  for (std::size_t i = 0; i < a.data.size(); ++i)
    CHECK(std::fabs(b1.data[i] - c * b2.data[i]) <= 1e-8 * std::max(1.0, std::fabs(b1.data[i])));
}

TEST_CASE("psd_sqrt rejects indefinite input") {
  Matrix neg(2, 2);
  neg(0, 0) = 1.0;
  neg(1, 1) = -0.5;
  CHECK_THROWS_AS(linalg::psd_sqrt(neg), Error);
}

TEST_CASE("solve_spd identity and scalar cases") {
  Rng rng(5);
  const Matrix b = oracles::random_matrix(3, 2, rng);
  const Matrix x = linalg::solve_spd(Matrix::identity(3), b);
  for (std::size_t i = 0; i < b.data.size(); ++i)
    CHECK(x.data[i] == doctest::Approx(b.data[i]).epsilon(1e-12));

  Matrix two = Matrix::identity(3);
  for (std::size_t i = 0; i < 3; ++i) two(i, i) = 2.0;
  const Matrix y = linalg::solve_spd(two, Matrix::identity(3));
  for (std::size_t i = 0; i < 3; ++i)
    CHECK(y(i, i) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("solve_spd residual on random SPD") {
  Rng rng(9);
  const Matrix a = oracles::random_spd(6, rng);
  const Matrix b = oracles::random_matrix(6, 3, rng);
  const Matrix x = linalg::solve_spd(a, b);
  const Matrix ax = linalg::matmul(a, x);
  const double tol = 1e-8 * std::max(1.0, linalg::max_abs(b));
  for (std::size_t i = 0; i < b.data.size(); ++i)
    CHECK(std::fabs(ax.data[i] - b.data[i]) <= tol);
}

TEST_CASE("solve_spd recovers a known solution") {
  Rng rng(13);
  const Matrix a = oracles::random_spd(8, rng);
  const Matrix x_true = oracles::random_matrix(8, 2, rng);
  const Matrix b = linalg::matmul(a, x_true);
  const Matrix x = linalg::solve_spd(a, b);
  for (std::size_t i = 0; i < x.data.size(); ++i)
    CHECK(std::fabs(x.data[i] - x_true.data[i]) <=
          1e-8 * std::max(1.0, std::fabs(x_true.data[i])));
}

TEST_CASE("solve_spd rejects singular input") {
  const Matrix zeros(3, 3);
  CHECK_THROWS_AS(linalg::solve_spd(zeros, Matrix::identity(3)), Error);
  Matrix ones(3, 3, 1.0);
  CHECK_THROWS_AS(linalg::solve_spd(ones, Matrix::identity(3)), Error);
}

TEST_CASE("matmul agrees with the naive oracle") {
  Rng rng(17);
  const Matrix a = oracles::random_matrix(4, 7, rng);
  const Matrix b = oracles::random_matrix(7, 3, rng);
  const Matrix c = linalg::matmul(a, b);
  const Matrix ref = oracles::naive_matmul(a, b);
  for (std::size_t i = 0; i < c.data.size(); ++i)
    CHECK(c.data[i] == doctest::Approx(ref.data[i]).epsilon(1e-12));

  const Matrix at = linalg::transpose(a);
  const Matrix c2 = linalg::matmul_tn(at, b);
  for (std::size_t i = 0; i < c2.data.size(); ++i)
    CHECK(c2.data[i] == doctest::Approx(ref.data[i]).epsilon(1e-12));

  const Matrix bt = linalg::transpose(b);
  const Matrix c3 = linalg::matmul_nt(a, bt);
  for (std::size_t i = 0; i < c3.data.size(); ++i)
    CHECK(c3.data[i] == doctest::Approx(ref.data[i]).epsilon(1e-12));
}
