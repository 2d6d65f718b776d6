#include "ake/baselines.hpp"

#include "ake/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace ake {

namespace {

// K* - 1_m K - K* 1_n + 1_m K 1_n, using training column means and the grand mean.
Matrix center_cross(const Matrix& K_star, const Vector& column_means, double grand_mean) {
  Matrix out = K_star;
  const Vector row_means = K_star.rowwise().mean();
  out.rowwise() -= column_means.transpose();
  out.colwise() -= row_means;
  out.array() += grand_mean;
  return out;
}

}  // namespace

KpcaModel kpca_fit(const Matrix& X, const KernelSpec& kernel, Eigen::Index d) {
  const Eigen::Index n = X.rows();
  require(n >= 2, ErrorKind::InvalidArgument, "kpca: need n >= 2 samples");
  require(d >= 1 && d < n, ErrorKind::InvalidArgument,
          "kpca: latent dimension must satisfy 1 <= d < n (got d = " + std::to_string(d) + ", n = " +
              std::to_string(n) + ")");

  KpcaModel m;
  m.kernel = resolve(kernel, X);
  m.X_train = X;
  const Matrix K = gram(m.kernel, X).full;
  m.column_means = K.colwise().mean().transpose();
  m.grand_mean = m.column_means.mean();

  const Matrix Kc = center_cross(K, m.column_means, m.grand_mean);
  const SymEig eig = sym_eig(0.5 * (Kc + Kc.transpose()));

  // Centring leaves O(n eps ||K||) round-off; anything below that is zero too.
  const double top = eig.values.size() > 0 ? eig.values[0] : 0.0;
  const double roundoff = 10.0 * static_cast<double>(n) * std::numeric_limits<double>::epsilon() * max_abs(K);
  const double floor = std::max(kKpcaRankTol * top, roundoff);
  Eigen::Index positive = 0;
  while (positive < eig.values.size() && eig.values[positive] > floor) ++positive;
  require(positive >= d, ErrorKind::InsufficientRank,
          "InsufficientRank: centred Gram has " + std::to_string(positive) + " positive eigenvalues, need d = " +
              std::to_string(d));

  m.eigenvalues = eig.values.head(d);
  m.alpha_k = eig.vectors.leftCols(d);
  for (Eigen::Index k = 0; k < d; ++k) m.alpha_k.col(k) /= std::sqrt(m.eigenvalues[k]);
  m.embedding = Kc * m.alpha_k;
  return m;
}

Matrix kpca_transform(const KpcaModel& model, const Matrix& X_test) {
  require(X_test.cols() == model.X_train.cols(), ErrorKind::DimensionMismatch,
          "feature count mismatch: model expects " + std::to_string(model.X_train.cols()) + " features, found " +
              std::to_string(X_test.cols()));
  const Matrix K_star = cross_gram(model.kernel, X_test, model.X_train);
  return center_cross(K_star, model.column_means, model.grand_mean) * model.alpha_k;
}

}  // namespace ake
