#include "ake/parallel.hpp"

#include <algorithm>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ake {

int kernel_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace {

double sq_dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

// Squared distances are enough for ordering and avoid sqrt rounding ties.
std::vector<Eigen::Index> order_for(const Matrix& X, Eigen::Index i, std::vector<double>& dist) {
  const Eigen::Index n = X.rows();
  dist.resize(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j) dist[static_cast<std::size_t>(j)] = sq_dist(row_span(X, i), row_span(X, j));
  std::vector<Eigen::Index> idx;
  idx.reserve(static_cast<std::size_t>(n - 1));
  for (Eigen::Index j = 0; j < n; ++j) {
    if (j != i) idx.push_back(j);
  }
  std::sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
    const double da = dist[static_cast<std::size_t>(a)];
    const double db = dist[static_cast<std::size_t>(b)];
    return da < db || (da == db && a < b);
  });
  return idx;
}

}  // namespace

namespace par {

std::vector<std::vector<Eigen::Index>> neighbor_order(const Matrix& X) {
  const Eigen::Index n = X.rows();
  std::vector<std::vector<Eigen::Index>> out(static_cast<std::size_t>(n));
#pragma omp parallel
  {
    std::vector<double> dist;
#pragma omp for schedule(static)
    for (Eigen::Index i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = order_for(X, i, dist);
  }
  return out;
}

}  // namespace par

namespace serial {

std::vector<std::vector<Eigen::Index>> neighbor_order(const Matrix& X) {
  std::vector<std::vector<Eigen::Index>> out;
  out.reserve(static_cast<std::size_t>(X.rows()));
  std::vector<double> dist;
  for (Eigen::Index i = 0; i < X.rows(); ++i) out.push_back(order_for(X, i, dist));
  return out;
}

}  // namespace serial

}  // namespace ake
