#pragma once

// Random instance generators for property tests.

#include "ake/numerics.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace gen {

class Source {
 public:
  explicit Source(std::uint64_t seed) : eng_(seed) {}

  double normal() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }

  ake::Matrix normal_matrix(Eigen::Index rows, Eigen::Index cols, double scale = 1.0) {
    ake::Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = scale * normal();
    }
    return m;
  }

  ake::Vector normal_vector(Eigen::Index n, double scale = 1.0) {
    ake::Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = scale * normal();
    return v;
  }

  ake::Matrix binary_matrix(Eigen::Index rows, Eigen::Index cols, double p_one = 0.4) {
    ake::Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = uniform(0.0, 1.0) < p_one ? 1.0 : 0.0;
    }
    return m;
  }

  /// Symmetric positive definite with eigenvalues log-spaced over [1/cond, 1].
  ake::Matrix spd(Eigen::Index n, double cond) {
    const ake::Matrix M = normal_matrix(n, n);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr{Eigen::MatrixXd(M)};
    const Eigen::MatrixXd Q = qr.householderQ();
    Eigen::VectorXd lam(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double t = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
      lam[i] = std::pow(cond, -t);
    }
    ake::Matrix A = Q * lam.asDiagonal() * Q.transpose();
    return 0.5 * (A + A.transpose());
  }

  /// Labels 0..clusters-1, every cluster non-empty.
  std::vector<int> labels(int n, int clusters) {
    std::vector<int> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = i < clusters ? i : integer(0, clusters - 1);
    return out;
  }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace gen
