#include "ake/error.hpp"
#include "ake/numerics.hpp"

#include "check.hpp"
#include "gen.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using ake::Matrix;
using ake::Vector;

TEST_CASE("solve_spd on the identity returns the right-hand side") {
  const Vector x = ake::solve_spd(Matrix::Identity(2, 2), Vector{{3.0, -1.0}}, 0.0);
  CHECK(x[0] == doctest::Approx(3.0));
  CHECK(x[1] == doctest::Approx(-1.0));
}

TEST_CASE("solve_spd on the zero system returns the minimum-norm zero vector") {
  const ake::SolveResult r = ake::solve_spd_detailed(Matrix::Zero(2, 2), Vector::Zero(2), 0.0);
  CHECK(r.x.norm() == 0.0);
}

TEST_CASE("solve_spd matches Gaussian elimination on random SPD systems") {
  gen::Source src(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix A = src.spd(5, 1e3);
    const Vector c = src.normal_vector(5);
    const Vector x = ake::solve_spd(A, c, 0.0);
    const Vector ref = oracle::gauss_solve(A, c);
    CHECK((x - ref).norm() <= 1e-9 * (1.0 + ref.norm()));
  }
}

TEST_CASE("solve_spd residual bound holds up to condition number 1e8") {
  gen::Source src(12);
  for (double cond : {1.0, 1e2, 1e4, 1e6, 1e8}) {
    for (int trial = 0; trial < 5; ++trial) {
      const Eigen::Index n = src.integer(2, 12);
      const Matrix A = src.spd(n, cond);
      const Vector c = src.normal_vector(n);
      const double ridge = trial % 2 == 0 ? 0.0 : 1e-6;
      const Vector x = ake::solve_spd(A, c, ridge);
      const Matrix Ar = A + ridge * Matrix::Identity(n, n);
      CHECK((Ar * x - c).norm() <= 1e-8 * (1.0 + c.norm()));
    }
  }
}

TEST_CASE("solve_spd falls back to the pseudoinverse on singular systems") {
  Matrix A{{1.0, 1.0}, {1.0, 1.0}};
  const ake::SolveResult r = ake::solve_spd_detailed(A, Vector{{1.0, 3.0}}, 0.0);
  CHECK(r.path == ake::SolvePath::Pseudoinverse);
  // Least-squares minimum-norm solution of x0 + x1 = 2.
  CHECK(r.x[0] == doctest::Approx(1.0));
  CHECK(r.x[1] == doctest::Approx(1.0));
}

TEST_CASE("solve_spd rejects bad shapes and ridges") {
  CHECK(check::thrown_kind([] { ake::solve_spd(Matrix::Identity(2, 3), Vector::Zero(2), 0.0); }) ==
        ake::ErrorKind::DimensionMismatch);
  CHECK(check::thrown_kind([] { ake::solve_spd(Matrix::Identity(2, 2), Vector::Zero(3), 0.0); }) ==
        ake::ErrorKind::DimensionMismatch);
  CHECK(check::thrown_kind([] { ake::solve_spd(Matrix::Identity(2, 2), Vector::Zero(2), -1.0); }) ==
        ake::ErrorKind::InvalidArgument);
}

TEST_CASE("pinv examples") {
  CHECK(ake::pinv(Matrix::Identity(3, 3)).isApprox(Matrix::Identity(3, 3)));
  CHECK(ake::pinv(Matrix::Zero(2, 2)).norm() == 0.0);
  const Matrix p = ake::pinv(Matrix{{2.0, 0.0}, {0.0, 0.0}});
  CHECK(p(0, 0) == doctest::Approx(0.5));
  CHECK(std::abs(p(0, 1)) + std::abs(p(1, 0)) + std::abs(p(1, 1)) == 0.0);
}

TEST_CASE("pinv satisfies the four Penrose conditions on random 6x4 matrices") {
  gen::Source src(13);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix A = src.normal_matrix(6, 4);
    if (trial % 3 == 0) A.col(3) = A.col(0) + A.col(1);  // rank deficient
    const Matrix P = ake::pinv(A);
    CHECK(P.rows() == 4);
    CHECK(P.cols() == 6);
    CHECK((A * P * A - A).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK((P * A * P - P).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK(((A * P).transpose() - A * P).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK(((P * A).transpose() - P * A).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("sym_eig examples") {
  const ake::SymEig d = ake::sym_eig(Matrix{{1.0, 0.0}, {0.0, 3.0}});
  CHECK(d.values[0] == doctest::Approx(3.0));
  CHECK(d.values[1] == doctest::Approx(1.0));
  CHECK(std::abs(d.vectors(1, 0)) == doctest::Approx(1.0));

  const ake::SymEig s = ake::sym_eig(Matrix{{0.0, 1.0}, {1.0, 0.0}});
  CHECK(s.values[0] == doctest::Approx(1.0));
  CHECK(s.values[1] == doctest::Approx(-1.0));
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(s.vectors(0, 0)) == doctest::Approx(r));
  CHECK(s.vectors(0, 0) * s.vectors(1, 0) > 0.0);
  CHECK(s.vectors(0, 1) * s.vectors(1, 1) < 0.0);
}

TEST_CASE("sym_eig reconstructs random symmetric matrices with orthonormal vectors") {
  gen::Source src(14);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix M = src.normal_matrix(6, 6);
    const Matrix A = 0.5 * (M + M.transpose());
    const ake::SymEig e = ake::sym_eig(A);
    const Matrix V = e.vectors;
    CHECK((V.transpose() * V - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff() <= 1e-8);
    const Matrix back = oracle::matmul(oracle::matmul(V, Matrix(e.values.asDiagonal())), Matrix(V.transpose()));
    CHECK((back - A).cwiseAbs().maxCoeff() <= 1e-8);
    for (Eigen::Index k = 1; k < 6; ++k) CHECK(e.values[k - 1] >= e.values[k]);
    for (Eigen::Index k = 0; k < 6; ++k) {
      Eigen::Index arg = 0;
      V.col(k).cwiseAbs().maxCoeff(&arg);
      CHECK(V(arg, k) > 0.0);
    }
  }
}

TEST_CASE("sym_eig rejects asymmetric input") {
  CHECK(check::thrown_kind([] { ake::sym_eig(Matrix{{1.0, 2.0}, {0.0, 1.0}}); }) == ake::ErrorKind::NotSymmetric);
}

TEST_CASE("fix_sign makes the largest-magnitude entry positive, first on ties") {
  Vector v{{0.5, -2.0, 1.0}};
  ake::fix_sign(v);
  CHECK(v[1] == 2.0);
  Vector t{{-1.0, 1.0}};
  ake::fix_sign(t);
  CHECK(t[0] == 1.0);
  CHECK(t[1] == -1.0);
}

TEST_CASE("require_finite flags NaN and infinity") {
  Matrix m = Matrix::Zero(2, 2);
  m(1, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK(check::thrown_kind([&] { ake::require_finite(m, "m"); }) == ake::ErrorKind::InvalidArgument);
  Vector v = Vector::Zero(2);
  v[0] = std::numeric_limits<double>::infinity();
  CHECK(check::thrown_kind([&] { ake::require_finite(v, "v"); }) == ake::ErrorKind::InvalidArgument);
}
