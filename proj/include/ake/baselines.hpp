#pragma once

#include "ake/kernels.hpp"
#include "ake/numerics.hpp"

namespace ake {

/// Kernel PCA on the double-centred Gram matrix.
struct KpcaModel {
  Matrix alpha_k;        // n x d, eigenvectors scaled by 1/sqrt(lambda)
  Vector eigenvalues;    // d leading eigenvalues of the centred Gram, descending
  Matrix X_train;
  KernelSpec kernel;     // resolved
  Vector column_means;   // mean of each training Gram column
  double grand_mean = 0.0;
  Matrix embedding;      // training scores

  Eigen::Index n() const { return alpha_k.rows(); }
  Eigen::Index latent_dim() const { return alpha_k.cols(); }
};

/// Eigenvalues below this fraction of the largest are treated as zero.
inline constexpr double kKpcaRankTol = 1e-10;

KpcaModel kpca_fit(const Matrix& X, const KernelSpec& kernel, Eigen::Index d);

Matrix kpca_transform(const KpcaModel& model, const Matrix& X_test);

}  // namespace ake
