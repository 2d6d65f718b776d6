#pragma once

// OpenMP loop kernels shared by the Gram builders and the neighbourhood
// metrics. Every output element is written by exactly one iteration and
// depends only on its own inputs, so results do not depend on the thread
// count or schedule. The ake::serial namespace holds plain-loop versions of
// the same kernels; tests compare the two and bench/ times them.

#include "ake/numerics.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace ake {

inline std::span<const double> row_span(const Matrix& m, Eigen::Index i) {
  return {m.data() + i * m.cols(), static_cast<std::size_t>(m.cols())};
}

/// Number of OpenMP threads the kernels will use (1 when built without OpenMP).
int kernel_threads();

namespace par {

/// out(i, j) = f(i, j) for j >= i, mirrored into the lower triangle.
template <class F>
void fill_symmetric(Matrix& out, F&& f) {
  const Eigen::Index n = out.rows();
#pragma omp parallel for schedule(dynamic, 8)
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) out(i, j) = f(i, j);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) out(i, j) = out(j, i);
  }
}

/// out(i, j) = f(i, j) for every entry.
template <class F>
void fill_dense(Matrix& out, F&& f) {
  const Eigen::Index rows = out.rows();
  const Eigen::Index cols = out.cols();
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) out(i, j) = f(i, j);
  }
}

/// For every point i, the other points sorted by (distance to i, index).
/// Row i of the result has n - 1 entries.
std::vector<std::vector<Eigen::Index>> neighbor_order(const Matrix& X);

}  // namespace par

namespace serial {

template <class F>
void fill_symmetric(Matrix& out, F&& f) {
  const Eigen::Index n = out.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      out(i, j) = f(i, j);
      out(j, i) = out(i, j);
    }
  }
}

template <class F>
void fill_dense(Matrix& out, F&& f) {
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    for (Eigen::Index j = 0; j < out.cols(); ++j) out(i, j) = f(i, j);
  }
}

std::vector<std::vector<Eigen::Index>> neighbor_order(const Matrix& X);

}  // namespace serial

}  // namespace ake
