#include "ake/reconstruction.hpp"

#include "ake/error.hpp"

#include <cmath>
#include <string>

namespace ake {

namespace {

void check_gram(const GramMatrix& G) {
  require(G.full.rows() == G.full.cols() && G.zero_diag.rows() == G.full.rows() &&
              G.zero_diag.cols() == G.full.cols(),
          ErrorKind::DimensionMismatch, "build_quadratic: Gram and zero-diagonal companion must be square and equal size");
  require(G.size() >= 2, ErrorKind::InvalidArgument,
          "build_quadratic: need n >= 2 (a single point has nothing to be reconstructed from)");
}

}  // namespace

QuadraticForm build_quadratic(const GramMatrix& G) {
  Matrix sq;
  return build_quadratic(G, sq);
}

QuadraticForm build_quadratic(const GramMatrix& G, Matrix& sq) {
  check_gram(G);
  const Eigen::Index n = G.size();

  // G~ G~' == G~^2 for symmetric G~; the rank update yields an exactly symmetric result.
  sq = Matrix::Zero(n, n);
  sq.selfadjointView<Eigen::Lower>().rankUpdate(G.zero_diag);
  sq.triangularView<Eigen::StrictlyUpper>() = sq.transpose();

  QuadraticForm q;
  q.A = G.full.cwiseProduct(sq);
  q.c = G.zero_diag.cwiseAbs2().rowwise().sum();
  q.trace_G = G.full.trace();
  return q;
}

double reconstruction_loss(const QuadraticForm& q, const Vector& beta) {
  require(beta.size() == q.size(), ErrorKind::DimensionMismatch,
          "reconstruction_loss: beta has length " + std::to_string(beta.size()) + ", expected " +
              std::to_string(q.size()));
  return beta.dot(q.A * beta) - 2.0 * q.c.dot(beta) + q.trace_G;
}

double default_ridge(const QuadraticForm& q) {
  return q.size() == 0 ? 0.0 : 1e-8 * q.A.trace() / static_cast<double>(q.size());
}

ReconstructionWeights solve_beta(const QuadraticForm& q, std::optional<double> ridge) {
  require(q.size() >= 2, ErrorKind::InvalidArgument, "solve_beta: need n >= 2");
  const double r = ridge.value_or(default_ridge(q));
  require(std::isfinite(r) && r >= 0.0, ErrorKind::InvalidArgument, "solve_beta: ridge must be non-negative");

  SolveResult s = solve_spd_detailed(q.A, q.c, r);
  ReconstructionWeights w;
  w.loss = reconstruction_loss(q, s.x);
  w.beta = std::move(s.x);
  w.ridge_used = r;
  w.solver_path = s.path;
  if (!std::isfinite(w.loss)) fail(ErrorKind::NumericalFailure, "solve_beta: reconstruction loss is not finite");
  return w;
}

namespace serial {

QuadraticForm build_quadratic(const GramMatrix& G) {
  check_gram(G);
  const Eigen::Index n = G.size();
  const Matrix& K = G.full;
  const Matrix& Kt = G.zero_diag;

  QuadraticForm q;
  q.A = Matrix::Zero(n, n);
  q.c = Vector::Zero(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index l = 0; l < n; ++l) {
      double s = 0.0;
      for (Eigen::Index m = 0; m < n; ++m) s += Kt(j, m) * Kt(m, l);
      q.A(j, l) = K(j, l) * s;
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) q.c[i] += K(i, j) * K(i, j);
    }
    q.trace_G += K(i, i);
  }
  return q;
}

}  // namespace serial

}  // namespace ake
