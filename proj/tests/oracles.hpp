#pragma once

// Reference implementations written straight from the defining formulas,
// with plain loops and no shared code paths with the library.

#include "ake/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <utility>
#include <vector>

namespace oracle {

using ake::Matrix;
using ake::Vector;

inline Matrix matmul(const Matrix& A, const Matrix& B) {
  Matrix C = Matrix::Zero(A.rows(), B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = 0; j < B.cols(); ++j) {
      double s = 0.0;
      for (Eigen::Index k = 0; k < A.cols(); ++k) s += A(i, k) * B(k, j);
      C(i, j) = s;
    }
  }
  return C;
}

/// Gaussian elimination with partial pivoting.
inline Vector gauss_solve(Matrix A, Vector b) {
  const Eigen::Index n = A.rows();
  for (Eigen::Index col = 0; col < n; ++col) {
    Eigen::Index piv = col;
    for (Eigen::Index r = col + 1; r < n; ++r) {
      if (std::abs(A(r, col)) > std::abs(A(piv, col))) piv = r;
    }
    if (piv != col) {
      for (Eigen::Index j = 0; j < n; ++j) std::swap(A(col, j), A(piv, j));
      std::swap(b[col], b[piv]);
    }
    for (Eigen::Index r = col + 1; r < n; ++r) {
      const double f = A(r, col) / A(col, col);
      for (Eigen::Index j = col; j < n; ++j) A(r, j) -= f * A(col, j);
      b[r] -= f * b[col];
    }
  }
  Vector x(n);
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (Eigen::Index j = i + 1; j < n; ++j) s -= A(i, j) * x[j];
    x[i] = s / A(i, i);
  }
  return x;
}

inline double sq_dist(const Matrix& X, Eigen::Index i, const Matrix& Y, Eigen::Index j) {
  double s = 0.0;
  for (Eigen::Index k = 0; k < X.cols(); ++k) {
    const double d = X(i, k) - Y(j, k);
    s += d * d;
  }
  return s;
}

inline Matrix gaussian_cross(const Matrix& X, const Matrix& Y, double sigma) {
  Matrix K(X.rows(), Y.rows());
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    for (Eigen::Index j = 0; j < Y.rows(); ++j) K(i, j) = std::exp(-sq_dist(X, i, Y, j) / (2.0 * sigma * sigma));
  }
  return K;
}

inline Matrix gaussian_gram(const Matrix& X, double sigma) { return gaussian_cross(X, X, sigma); }

inline Matrix linear_gram(const Matrix& X) { return matmul(X, Matrix(X.transpose())); }

struct Quadratic {
  Matrix A;
  Vector c;
  double trace = 0.0;
};

/// A_kl = G_kl * sum_{i != k, i != l} G_ki G_il,  c_k = sum_{i != k} G_ik^2.
inline Quadratic triple_loop_quadratic(const Matrix& G) {
  const Eigen::Index n = G.rows();
  Quadratic q{Matrix::Zero(n, n), Vector::Zero(n), 0.0};
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index l = 0; l < n; ++l) {
      double s = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (i != k && i != l) s += G(k, i) * G(i, l);
      }
      q.A(k, l) = G(k, l) * s;
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i != k) q.c[k] += G(i, k) * G(i, k);
    }
    q.trace += G(k, k);
  }
  return q;
}

inline double quadratic_value(const Quadratic& q, const Vector& b) {
  double s = q.trace;
  for (Eigen::Index k = 0; k < b.size(); ++k) {
    s -= 2.0 * q.c[k] * b[k];
    for (Eigen::Index l = 0; l < b.size(); ++l) s += b[k] * q.A(k, l) * b[l];
  }
  return s;
}

/// tr[(I - G~ D) G (I - D G~)].
inline double trace_form(const Matrix& G, const Vector& b) {
  const Eigen::Index n = G.rows();
  Matrix L = Matrix::Identity(n, n);  // I - G~ D
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j) L(i, j) -= G(i, j) * b[j];
    }
  }
  const Matrix R = L.transpose();  // I - D G~
  const Matrix P = matmul(matmul(L, G), R);
  double t = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) t += P(i, i);
  return t;
}

/// sum_i || phi_i - sum_{j != i} b_j G_ij phi_j ||^2 expanded with <phi_a, phi_b> = G_ab.
inline double kernel_trick_loss(const Matrix& G, const Vector& b) {
  const Eigen::Index n = G.rows();
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double s = G(i, i);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      s -= 2.0 * b[j] * G(i, j) * G(i, j);
      for (Eigen::Index l = 0; l < n; ++l) {
        if (l == i) continue;
        s += b[j] * G(i, j) * b[l] * G(i, l) * G(j, l);
      }
    }
    total += s;
  }
  return total;
}

/// Explicit feature vectors: sum_i || x_i - sum_{j != i} b_j <x_i, x_j> x_j ||^2.
inline double feature_space_loss(const Matrix& X, const Vector& b) {
  const Eigen::Index n = X.rows();
  const Matrix G = linear_gram(X);
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    std::vector<double> r(static_cast<std::size_t>(X.cols()));
    for (Eigen::Index k = 0; k < X.cols(); ++k) r[static_cast<std::size_t>(k)] = X(i, k);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      for (Eigen::Index k = 0; k < X.cols(); ++k) r[static_cast<std::size_t>(k)] -= b[j] * G(i, j) * X(j, k);
    }
    for (double v : r) total += v * v;
  }
  return total;
}

/// Steepest descent with exact line search on b'Ab - 2c'b.
inline Vector descend_quadratic(const Quadratic& q, int max_iters, double grad_tol) {
  const Eigen::Index n = q.c.size();
  Vector b = Vector::Zero(n);
  for (int it = 0; it < max_iters; ++it) {
    Vector g(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      double s = -q.c[k];
      for (Eigen::Index l = 0; l < n; ++l) s += q.A(k, l) * b[l];
      g[k] = 2.0 * s;
    }
    const double gg = g.dot(g);
    if (std::sqrt(gg) < grad_tol) break;
    double gAg = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      for (Eigen::Index l = 0; l < n; ++l) gAg += g[k] * q.A(k, l) * g[l];
    }
    if (gAg <= 0.0) break;
    b -= (gg / (2.0 * gAg)) * g;
  }
  return b;
}

/// Central differences of f at x, step h.
inline Matrix central_difference(const std::function<double(const Matrix&)>& f, const Matrix& x, double h) {
  Matrix g(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      Matrix p = x;
      Matrix m = x;
      p(i, j) += h;
      m(i, j) -= h;
      g(i, j) = (f(p) - f(m)) / (2.0 * h);
    }
  }
  return g;
}

/// Classical PCA: eigenvectors of the sample covariance, scores of the centred data.
inline Matrix pca_scores(const Matrix& X, Eigen::Index d) {
  const Eigen::Index n = X.rows();
  Matrix Xc = X;
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    double mean = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) mean += X(i, j);
    mean /= static_cast<double>(n);
    for (Eigen::Index i = 0; i < n; ++i) Xc(i, j) -= mean;
  }
  Eigen::MatrixXd C = Eigen::MatrixXd(matmul(Matrix(Xc.transpose()), Xc)) / static_cast<double>(n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C);
  Matrix scores(n, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    const Eigen::VectorXd v = es.eigenvectors().col(X.cols() - 1 - k);
    for (Eigen::Index i = 0; i < n; ++i) {
      double s = 0.0;
      for (Eigen::Index j = 0; j < X.cols(); ++j) s += Xc(i, j) * v[j];
      scores(i, k) = s;
    }
  }
  return scores;
}

inline std::map<int, std::vector<Eigen::Index>> members(const std::vector<int>& labels) {
  std::map<int, std::vector<Eigen::Index>> m;
  for (std::size_t i = 0; i < labels.size(); ++i) m[labels[i]].push_back(static_cast<Eigen::Index>(i));
  return m;
}

inline std::vector<double> centroid(const Matrix& P, const std::vector<Eigen::Index>& idx) {
  std::vector<double> c(static_cast<std::size_t>(P.cols()), 0.0);
  for (Eigen::Index i : idx) {
    for (Eigen::Index k = 0; k < P.cols(); ++k) c[static_cast<std::size_t>(k)] += P(i, k);
  }
  for (double& v : c) v /= static_cast<double>(idx.size());
  return c;
}

inline double dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

inline std::vector<double> row(const Matrix& P, Eigen::Index i) {
  std::vector<double> r(static_cast<std::size_t>(P.cols()));
  for (Eigen::Index k = 0; k < P.cols(); ++k) r[static_cast<std::size_t>(k)] = P(i, k);
  return r;
}

inline double davies_bouldin(const Matrix& P, const std::vector<int>& labels) {
  std::vector<std::vector<double>> mu;
  std::vector<double> s;
  for (const auto& [label, idx] : members(labels)) {
    mu.push_back(centroid(P, idx));
    double t = 0.0;
    for (Eigen::Index i : idx) t += dist(row(P, i), mu.back());
    s.push_back(t / static_cast<double>(idx.size()));
  }
  double total = 0.0;
  for (std::size_t a = 0; a < mu.size(); ++a) {
    double worst = 0.0;
    for (std::size_t b = 0; b < mu.size(); ++b) {
      if (a != b) worst = std::max(worst, (s[a] + s[b]) / dist(mu[a], mu[b]));
    }
    total += worst;
  }
  return total / static_cast<double>(mu.size());
}

inline double calinski_harabasz(const Matrix& P, const std::vector<int>& labels) {
  const auto n = static_cast<double>(P.rows());
  std::vector<Eigen::Index> all;
  for (Eigen::Index i = 0; i < P.rows(); ++i) all.push_back(i);
  const std::vector<double> grand = centroid(P, all);
  double between = 0.0;
  double within = 0.0;
  const auto groups = members(labels);
  for (const auto& [label, idx] : groups) {
    const std::vector<double> mu = centroid(P, idx);
    between += static_cast<double>(idx.size()) * std::pow(dist(mu, grand), 2);
    for (Eigen::Index i : idx) within += std::pow(dist(row(P, i), mu), 2);
  }
  const auto C = static_cast<double>(groups.size());
  return (between / (C - 1.0)) / (within / (n - C));
}

/// rank[i][j] = 1 + #{l != i, j : d(i,l) < d(i,j) or (d(i,l) == d(i,j) and l < j)}; 0 on the diagonal.
inline std::vector<std::vector<int>> ranks(const Matrix& X) {
  const Eigen::Index n = X.rows();
  std::vector<std::vector<int>> r(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), 0));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double dij = sq_dist(X, i, X, j);
      int count = 1;
      for (Eigen::Index l = 0; l < n; ++l) {
        if (l == i || l == j) continue;
        const double dil = sq_dist(X, i, X, l);
        if (dil < dij || (dil == dij && l < j)) ++count;
      }
      r[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = count;
    }
  }
  return r;
}

/// 1 - 2/(nk(2n-3k-1)) sum_i sum_{j: rB(i,j) <= k, rA(i,j) > k} (rA(i,j) - k).
inline double rank_score(const Matrix& A, const Matrix& B, int k) {
  const auto ra = ranks(A);
  const auto rb = ranks(B);
  const auto n = static_cast<std::size_t>(A.rows());
  double penalty = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && rb[i][j] <= k && ra[i][j] > k) penalty += ra[i][j] - k;
    }
  }
  const double nn = static_cast<double>(n);
  const double kk = k;
  return 1.0 - 2.0 / (nn * kk * (2.0 * nn - 3.0 * kk - 1.0)) * penalty;
}

inline double trustworthiness(const Matrix& X, const Matrix& Z, int k) { return rank_score(X, Z, k); }
inline double continuity(const Matrix& X, const Matrix& Z, int k) { return rank_score(Z, X, k); }

}  // namespace oracle
