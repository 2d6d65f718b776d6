#include "ake/numerics.hpp"

#include "ake/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace ake {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::NumericalFailure: return "NumericalFailure";
    case ErrorKind::InsufficientRank: return "InsufficientRank";
    case ErrorKind::DegenerateData: return "DegenerateData";
    case ErrorKind::UnsupportedKernel: return "UnsupportedKernel";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::Io: return "Io";
    case ErrorKind::Format: return "Format";
  }
  return "Unknown";
}

std::string_view to_string(SolvePath path) noexcept {
  return path == SolvePath::Direct ? "direct" : "pseudoinverse";
}

void require_finite(const Matrix& m, std::string_view what) {
  if (!m.allFinite()) fail(ErrorKind::InvalidArgument, std::string(what) + " contains NaN or Inf");
}

void require_finite(const Vector& v, std::string_view what) {
  if (!v.allFinite()) fail(ErrorKind::InvalidArgument, std::string(what) + " contains NaN or Inf");
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

void fix_sign(Eigen::Ref<Vector> v) {
  if (v.size() == 0) return;
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (std::abs(v[i]) > std::abs(v[best])) best = i;
  }
  if (v[best] < 0) v = -v;
}

namespace {

bool residual_ok(const Matrix& M, const Vector& x, const Vector& c) {
  if (!x.allFinite()) return false;
  return (M * x - c).norm() <= 1e-8 * (1.0 + c.norm());
}

}  // namespace

SolveResult solve_spd_detailed(const Matrix& A, const Vector& c, double ridge) {
  require(A.rows() == A.cols(), ErrorKind::DimensionMismatch,
          "solve_spd: matrix is " + std::to_string(A.rows()) + "x" + std::to_string(A.cols()) +
              ", expected square");
  require(c.size() == A.rows(), ErrorKind::DimensionMismatch,
          "solve_spd: rhs length " + std::to_string(c.size()) + " != " + std::to_string(A.rows()));
  require(ridge >= 0.0 && std::isfinite(ridge), ErrorKind::InvalidArgument,
          "solve_spd: ridge must be finite and non-negative");

  Matrix M = A;
  M.diagonal().array() += ridge;

  Eigen::LLT<Matrix> llt(M);
  if (llt.info() == Eigen::Success) {
    Vector x = llt.solve(c);
    if (residual_ok(M, x, c)) return {std::move(x), SolvePath::Direct};
  }
  Eigen::LDLT<Matrix> ldlt(M);
  if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
    Vector x = ldlt.solve(c);
    if (residual_ok(M, x, c)) return {std::move(x), SolvePath::Direct};
  }

  Vector x = pinv(M) * c;
  if (!x.allFinite()) fail(ErrorKind::NumericalFailure, "solve_spd: direct and pseudoinverse paths both failed");
  return {std::move(x), SolvePath::Pseudoinverse};
}

Matrix pinv(const Matrix& A, double rank_tol) {
  require(rank_tol > 0.0, ErrorKind::InvalidArgument, "pinv: rank_tol must be positive");
  if (A.size() == 0) return Matrix(A.cols(), A.rows());
  require_finite(A, "pinv input");

  Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) fail(ErrorKind::NumericalFailure, "pinv: SVD did not converge");

  const Vector& s = svd.singularValues();
  const double cutoff = s.size() > 0 ? rank_tol * s[0] : 0.0;
  Vector inv = Vector::Zero(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] > cutoff && s[i] > 0.0) inv[i] = 1.0 / s[i];
  }
  Matrix out = svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
  return out;
}

SymEig sym_eig(const Matrix& A) {
  require(A.rows() == A.cols(), ErrorKind::DimensionMismatch, "sym_eig: matrix must be square");
  require_finite(A, "sym_eig input");
  const double scale = max_abs(A);
  const double asym = A.size() == 0 ? 0.0 : (A - A.transpose()).cwiseAbs().maxCoeff();
  require(asym <= 1e-10 * scale, ErrorKind::NotSymmetric,
          "sym_eig: max asymmetry " + std::to_string(asym) + " exceeds 1e-10*||A||");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  if (es.info() != Eigen::Success) fail(ErrorKind::NumericalFailure, "sym_eig: eigensolver did not converge");

  const Eigen::Index n = A.rows();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const auto& vals = es.eigenvalues();
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return vals[a] > vals[b]; });

  SymEig out{Vector(n), Matrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values[k] = vals[order[static_cast<std::size_t>(k)]];
    Vector col = es.eigenvectors().col(order[static_cast<std::size_t>(k)]);
    fix_sign(col);
    out.vectors.col(k) = col;
  }
  return out;
}

}  // namespace ake
