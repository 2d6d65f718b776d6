#include "ake/metrics.hpp"

#include "ake/error.hpp"
#include "ake/parallel.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <string>

namespace ake {

namespace {

struct Clusters {
  std::vector<Eigen::Index> index;  // compact cluster id per point
  Matrix centroids;                 // C x d
  std::vector<Eigen::Index> sizes;
};

Clusters group(const LabeledEmbedding& e) {
  const Eigen::Index n = e.points.rows();
  require(static_cast<Eigen::Index>(e.labels.size()) == n, ErrorKind::DimensionMismatch,
          "label vector has " + std::to_string(e.labels.size()) + " entries for " + std::to_string(n) + " points");
  require_finite(e.points, "embedding");

  // Clusters are numbered by first appearance, so renaming labels changes nothing.
  std::map<int, Eigen::Index> ids;
  Eigen::Index next = 0;
  for (int l : e.labels) {
    if (ids.emplace(l, next).second) ++next;
  }

  Clusters c;
  c.index.resize(static_cast<std::size_t>(n));
  c.centroids = Matrix::Zero(next, e.points.cols());
  c.sizes.assign(static_cast<std::size_t>(next), 0);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index id = ids.at(e.labels[static_cast<std::size_t>(i)]);
    c.index[static_cast<std::size_t>(i)] = id;
    c.centroids.row(id) += e.points.row(i);
    ++c.sizes[static_cast<std::size_t>(id)];
  }
  for (Eigen::Index k = 0; k < next; ++k) c.centroids.row(k) /= static_cast<double>(c.sizes[static_cast<std::size_t>(k)]);
  return c;
}

}  // namespace

int cluster_count(const std::vector<int>& labels) {
  std::vector<int> s = labels;
  std::sort(s.begin(), s.end());
  return static_cast<int>(std::unique(s.begin(), s.end()) - s.begin());
}

double davies_bouldin(const LabeledEmbedding& e) {
  const Clusters c = group(e);
  const Eigen::Index C = c.centroids.rows();
  require(C >= 2, ErrorKind::InvalidArgument, "SingleCluster: Davies-Bouldin needs at least 2 clusters");

  Vector scatter = Vector::Zero(C);
  for (Eigen::Index i = 0; i < e.points.rows(); ++i) {
    const Eigen::Index k = c.index[static_cast<std::size_t>(i)];
    scatter[k] += (e.points.row(i) - c.centroids.row(k)).norm();
  }
  for (Eigen::Index k = 0; k < C; ++k) scatter[k] /= static_cast<double>(c.sizes[static_cast<std::size_t>(k)]);

  double total = 0.0;
  for (Eigen::Index a = 0; a < C; ++a) {
    double worst = 0.0;
    for (Eigen::Index b = 0; b < C; ++b) {
      if (a == b) continue;
      const double gap = (c.centroids.row(a) - c.centroids.row(b)).norm();
      require(gap > 0.0, ErrorKind::DegenerateData,
              "DegenerateClusters: clusters " + std::to_string(a) + " and " + std::to_string(b) +
                  " have coincident centroids");
      worst = std::max(worst, (scatter[a] + scatter[b]) / gap);
    }
    total += worst;
  }
  return total / static_cast<double>(C);
}

double calinski_harabasz(const LabeledEmbedding& e) {
  const Clusters c = group(e);
  const Eigen::Index n = e.points.rows();
  const Eigen::Index C = c.centroids.rows();
  require(C >= 2, ErrorKind::InvalidArgument, "SingleCluster: Calinski-Harabasz needs at least 2 clusters");

  const Eigen::RowVectorXd mean = e.points.colwise().mean();
  double between = 0.0;
  for (Eigen::Index k = 0; k < C; ++k) {
    between += static_cast<double>(c.sizes[static_cast<std::size_t>(k)]) * (c.centroids.row(k) - mean).squaredNorm();
  }
  double within = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    within += (e.points.row(i) - c.centroids.row(c.index[static_cast<std::size_t>(i)])).squaredNorm();
  }
  // All-singleton clusterings land here too, so n - C > 0 below.
  if (within == 0.0) return std::numeric_limits<double>::infinity();
  return (between / static_cast<double>(C - 1)) / (within / static_cast<double>(n - C));
}

namespace {

using Orders = std::vector<std::vector<Eigen::Index>>;

void check_neighborhood_args(const Matrix& X, const Matrix& Z, int k) {
  require(X.rows() == Z.rows(), ErrorKind::DimensionMismatch,
          "original data has " + std::to_string(X.rows()) + " rows, embedding has " + std::to_string(Z.rows()));
  require_finite(X, "original data");
  require_finite(Z, "embedding");
  const Eigen::Index n = X.rows();
  require(k >= 1 && 2 * static_cast<Eigen::Index>(k) < n, ErrorKind::InvalidArgument,
          "KOutOfRange: k must satisfy 1 <= k < n/2 (k = " + std::to_string(k) + ", n = " + std::to_string(n) + ")");
}

// Sum over i of sum_{j in kNN_B(i) \ kNN_A(i)} (rank_A(i, j) - k), ranks 1-based.
std::int64_t rank_penalty(const Orders& a, const Orders& b, int k) {
  const std::size_t n = a.size();
  std::vector<std::int64_t> per_point(n, 0);
#pragma omp parallel
  {
    std::vector<std::int64_t> rank(n, 0);
#pragma omp for schedule(static)
    for (std::size_t i = 0; i < n; ++i) {
      const auto& oa = a[i];
      for (std::size_t r = 0; r < oa.size(); ++r) rank[static_cast<std::size_t>(oa[r])] = static_cast<std::int64_t>(r) + 1;
      std::int64_t s = 0;
      for (int r = 0; r < k; ++r) {
        const std::int64_t ra = rank[static_cast<std::size_t>(b[i][static_cast<std::size_t>(r)])];
        if (ra > k) s += ra - k;
      }
      per_point[i] = s;
    }
  }
  std::int64_t total = 0;
  for (std::int64_t s : per_point) total += s;
  return total;
}

double score(std::int64_t penalty, Eigen::Index n_idx, int k) {
  const double n = static_cast<double>(n_idx);
  const double kk = static_cast<double>(k);
  return 1.0 - 2.0 / (n * kk * (2.0 * n - 3.0 * kk - 1.0)) * static_cast<double>(penalty);
}

NeighborhoodReport report_from(const Orders& ox, const Orders& oz, Eigen::Index n, int k) {
  NeighborhoodReport r;
  r.k = k;
  r.trustworthiness = score(rank_penalty(ox, oz, k), n, k);
  r.continuity = score(rank_penalty(oz, ox, k), n, k);
  return r;
}

}  // namespace

double trustworthiness(const Matrix& X_orig, const Matrix& Z, int k) {
  check_neighborhood_args(X_orig, Z, k);
  return score(rank_penalty(par::neighbor_order(X_orig), par::neighbor_order(Z), k), X_orig.rows(), k);
}

double continuity(const Matrix& X_orig, const Matrix& Z, int k) {
  check_neighborhood_args(X_orig, Z, k);
  return score(rank_penalty(par::neighbor_order(Z), par::neighbor_order(X_orig), k), X_orig.rows(), k);
}

NeighborhoodReport neighborhood_report(const Matrix& X_orig, const Matrix& Z, int k) {
  check_neighborhood_args(X_orig, Z, k);
  return report_from(par::neighbor_order(X_orig), par::neighbor_order(Z), X_orig.rows(), k);
}

namespace serial {

NeighborhoodReport neighborhood_report(const Matrix& X_orig, const Matrix& Z, int k) {
  check_neighborhood_args(X_orig, Z, k);
  return report_from(serial::neighbor_order(X_orig), serial::neighbor_order(Z), X_orig.rows(), k);
}

}  // namespace serial

}  // namespace ake
