#include "ake/baselines.hpp"

#include "check.hpp"
#include "gen.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using ake::KernelSpec;
using ake::Matrix;

namespace {

// Max relative deviation between columns of a and b after aligning each column's sign.
double signed_match(const Matrix& a, const Matrix& b) {
  double worst = 0.0;
  for (Eigen::Index k = 0; k < a.cols(); ++k) {
    const double s = a.col(k).dot(b.col(k)) >= 0.0 ? 1.0 : -1.0;
    const double scale = std::max(1.0, b.col(k).cwiseAbs().maxCoeff());
    worst = std::max(worst, (a.col(k) - s * b.col(k)).cwiseAbs().maxCoeff() / scale);
  }
  return worst;
}

}  // namespace

TEST_CASE("identical rows have no positive spectrum") {
  CHECK(check::thrown_kind([] { ake::kpca_fit(Matrix::Ones(5, 3), KernelSpec::linear(), 1); }) ==
        ake::ErrorKind::InsufficientRank);
  CHECK(check::thrown_kind([] { ake::kpca_fit(Matrix::Ones(5, 3), KernelSpec::gaussian(1.0), 1); }) ==
        ake::ErrorKind::InsufficientRank);
}

TEST_CASE("d above the positive rank is rejected") {
  gen::Source src(71);
  // Linear kernel on 2-D data: centred Gram has rank 2.
  CHECK(check::thrown_kind([&] { ake::kpca_fit(src.normal_matrix(10, 2), KernelSpec::linear(), 3); }) ==
        ake::ErrorKind::InsufficientRank);
  CHECK(check::thrown_kind([&] { ake::kpca_fit(src.normal_matrix(10, 2), KernelSpec::linear(), 10); }) ==
        ake::ErrorKind::InvalidArgument);
}

TEST_CASE("two points, linear kernel: embedding is symmetric about zero") {
  const ake::KpcaModel m = ake::kpca_fit(Matrix{{0.0, 1.0}, {2.0, 3.0}}, KernelSpec::linear(), 1);
  CHECK(m.embedding(0, 0) == doctest::Approx(-m.embedding(1, 0)));
  CHECK(std::abs(m.embedding(0, 0)) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("transform of the training data reproduces the embedding") {
  gen::Source src(72);
  const Matrix X = src.normal_matrix(20, 4);
  const ake::KpcaModel m = ake::kpca_fit(X, KernelSpec::gaussian_auto(), 3);
  CHECK(m.kernel.sigma.has_value());
  CHECK((ake::kpca_transform(m, X) - m.embedding).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(check::thrown_kind([&] { ake::kpca_transform(m, Matrix::Zero(1, 2)); }) == ake::ErrorKind::DimensionMismatch);
}

TEST_CASE("the mean of a symmetric dataset maps to the origin") {
  const Matrix X{{1.0, 0.0}, {-1.0, 0.0}, {0.0, 2.0}, {0.0, -2.0}, {3.0, 1.0}, {-3.0, -1.0}};
  const ake::KpcaModel m = ake::kpca_fit(X, KernelSpec::linear(), 2);
  const Matrix z = ake::kpca_transform(m, Matrix::Zero(1, 2));
  CHECK(z.cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("linear kernel transform matches the explicit centred-feature projection") {
  gen::Source src(73);
  const Matrix X = src.normal_matrix(15, 4);
  const ake::KpcaModel m = ake::kpca_fit(X, KernelSpec::linear(), 2);
  const Matrix batch = src.normal_matrix(5, 4);

  // Principal axes in feature space: v_k = Xc' alpha_k, projection (x - mean)' v_k.
  Eigen::RowVectorXd mean = X.colwise().mean();
  const Matrix Xc = X.rowwise() - mean;
  const Matrix V = oracle::matmul(Matrix(Xc.transpose()), m.alpha_k);
  const Matrix ref = oracle::matmul(Matrix(batch.rowwise() - mean), V);
  CHECK((ake::kpca_transform(m, batch) - ref).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("property: linear KPCA equals covariance PCA up to sign") {
  gen::Source src(74);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = src.integer(6, 40);
    const Eigen::Index D = src.integer(2, 6);
    Matrix X = src.normal_matrix(n, D);
    for (Eigen::Index j = 0; j < D; ++j) X.col(j) *= static_cast<double>(D - j);  // separated spectrum
    const Eigen::Index d = src.integer(1, static_cast<int>(D) - 1);
    const ake::KpcaModel m = ake::kpca_fit(X, KernelSpec::linear(), d);
    CHECK(signed_match(m.embedding, oracle::pca_scores(X, d)) <= 1e-8);
  }
}

TEST_CASE("property: training components are uncorrelated") {
  gen::Source src(75);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix X = src.normal_matrix(src.integer(8, 30), 3);
    const ake::KpcaModel m = ake::kpca_fit(X, KernelSpec::gaussian(1.5), 3);
    const Matrix C = m.embedding.transpose() * m.embedding;
    const double scale = C.diagonal().cwiseAbs().maxCoeff();
    for (Eigen::Index a = 0; a < 3; ++a) {
      for (Eigen::Index b = 0; b < 3; ++b) {
        if (a != b) CHECK(std::abs(C(a, b)) <= 1e-8 * scale);
      }
      CHECK(C(a, a) == doctest::Approx(m.eigenvalues[a]).epsilon(1e-8));
    }
  }
}
