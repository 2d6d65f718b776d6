#pragma once

// Stage A: closed-form reconstruction weights.
//
// Each feature-space point phi(x_i) is reconstructed from the others as
// sum_{j != i} beta_j G_ij phi(x_j). With D = diag(beta) and G~ the Gram
// matrix with its diagonal zeroed, the total squared reconstruction error is
//
//   L(beta) = tr[(I - G~ D) G (I - D G~)] = beta' A beta - 2 c' beta + tr(G)
//   A = G o (G~ G~)        (Hadamard product with the matrix square)
//   c_i = sum_{j != i} G_ij^2
//
// and its minimiser solves A beta = c.

#include "ake/kernels.hpp"
#include "ake/numerics.hpp"

#include <optional>

namespace ake {

struct QuadraticForm {
  Matrix A;
  Vector c;
  double trace_G = 0.0;

  Eigen::Index size() const { return c.size(); }
};

struct ReconstructionWeights {
  Vector beta;
  double loss = 0.0;
  double ridge_used = 0.0;
  SolvePath solver_path = SolvePath::Direct;
};

QuadraticForm build_quadratic(const GramMatrix& G);

/// Same, also handing back G~ G~ (reused by the alignment gradient).
QuadraticForm build_quadratic(const GramMatrix& G, Matrix& zero_diag_square);

/// beta' A beta - 2 c' beta + tr(G).
double reconstruction_loss(const QuadraticForm& q, const Vector& beta);

/// 1e-8 * tr(A) / n.
double default_ridge(const QuadraticForm& q);

/// Minimises the reconstruction loss; `ridge` defaults to default_ridge(q).
ReconstructionWeights solve_beta(const QuadraticForm& q, std::optional<double> ridge = std::nullopt);

namespace serial {

/// Literal triple-loop evaluation of A and c.
QuadraticForm build_quadratic(const GramMatrix& G);

}  // namespace serial

}  // namespace ake
