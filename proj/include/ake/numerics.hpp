#pragma once

// Dense linear algebra used throughout: a row-major double matrix type,
// a ridge-stabilised symmetric solve, an SVD pseudoinverse and a sorted
// symmetric eigendecomposition.

#include <Eigen/Dense>

#include <string_view>

namespace ake {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// Default relative singular-value cutoff for pinv().
inline constexpr double kDefaultRankTol = 1e-12;

/// Throws InvalidArgument naming `what` if any entry is NaN or infinite.
void require_finite(const Matrix& m, std::string_view what);
void require_finite(const Vector& v, std::string_view what);

enum class SolvePath { Direct, Pseudoinverse };

std::string_view to_string(SolvePath path) noexcept;

struct SolveResult {
  Vector x;
  SolvePath path = SolvePath::Direct;
};

/// Solves (A + ridge*I) x = c for symmetric A.
///
/// A Cholesky (then LDLT) factorisation is tried first and accepted only if
/// the residual satisfies ||(A + ridge*I)x - c|| <= 1e-8 * (1 + ||c||).
/// Otherwise the minimum-norm solution (A + ridge*I)^+ c is returned.
SolveResult solve_spd_detailed(const Matrix& A, const Vector& c, double ridge);

inline Vector solve_spd(const Matrix& A, const Vector& c, double ridge) {
  return solve_spd_detailed(A, c, ridge).x;
}

/// Moore-Penrose pseudoinverse. Singular values <= rank_tol * sigma_max are
/// treated as zero.
Matrix pinv(const Matrix& A, double rank_tol = kDefaultRankTol);

struct SymEig {
  Vector values;   // descending
  Matrix vectors;  // column i pairs with values[i]
};

/// Eigendecomposition of a symmetric matrix with eigenvalues sorted
/// descending and each eigenvector sign-normalised (see fix_sign).
SymEig sym_eig(const Matrix& A);

/// Flips the sign of `v` so that its largest-magnitude entry is positive
/// (first such entry on ties).
void fix_sign(Eigen::Ref<Vector> v);

/// Largest absolute entry, 0 for an empty matrix.
double max_abs(const Matrix& m);

}  // namespace ake
