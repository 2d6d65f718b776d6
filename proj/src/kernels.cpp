#include "ake/kernels.hpp"

#include "ake/error.hpp"
#include "ake/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace ake {

std::string_view to_string(KernelKind kind) noexcept {
  switch (kind) {
    case KernelKind::Linear: return "linear";
    case KernelKind::Gaussian: return "gaussian";
    case KernelKind::Tanimoto: return "tanimoto";
  }
  return "unknown";
}

KernelKind parse_kernel_kind(std::string_view name) {
  if (name == "linear") return KernelKind::Linear;
  if (name == "gaussian" || name == "rbf") return KernelKind::Gaussian;
  if (name == "tanimoto") return KernelKind::Tanimoto;
  fail(ErrorKind::InvalidArgument, "unknown kernel '" + std::string(name) + "' (expected linear, gaussian, tanimoto)");
}

GramMatrix GramMatrix::from_full(Matrix full) {
  require(full.rows() == full.cols(), ErrorKind::DimensionMismatch,
          "Gram matrix must be square, got " + std::to_string(full.rows()) + "x" + std::to_string(full.cols()));
  GramMatrix g;
  g.zero_diag = full;
  g.zero_diag.diagonal().setZero();
  g.full = std::move(full);
  return g;
}

namespace {

double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s += x[k] * y[k];
  return s;
}

double tanimoto(std::span<const double> x, std::span<const double> y) {
  const double xy = dot(x, y);
  const double denom = dot(x, x) + dot(y, y) - xy;
  return denom > 0.0 ? xy / denom : 0.0;
}

double gaussian(double sigma, std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double d = x[k] - y[k];
    s += d * d;
  }
  return std::exp(-s / (2.0 * sigma * sigma));
}

void check_resolved(const KernelSpec& spec) {
  if (spec.kind != KernelKind::Gaussian) return;
  require(spec.sigma.has_value(), ErrorKind::InvalidArgument, "gaussian kernel bandwidth is unresolved (\"auto\")");
  require(std::isfinite(*spec.sigma) && *spec.sigma > 0.0, ErrorKind::InvalidArgument,
          "gaussian kernel bandwidth must be positive, got " + std::to_string(*spec.sigma));
}

void check_binary(const Matrix& X, std::string_view what) {
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
      const double v = X(i, j);
      if (v != 0.0 && v != 1.0) {
        fail(ErrorKind::InvalidArgument, "tanimoto kernel needs binary input; " + std::string(what) + "(" +
                                             std::to_string(i) + ", " + std::to_string(j) + ") = " + std::to_string(v));
      }
    }
  }
}

// Inner evaluation with validation already done by the caller.
double eval_unchecked(const KernelSpec& spec, std::span<const double> x, std::span<const double> y) {
  switch (spec.kind) {
    case KernelKind::Linear: return dot(x, y);
    case KernelKind::Gaussian: return gaussian(*spec.sigma, x, y);
    case KernelKind::Tanimoto: return tanimoto(x, y);
  }
  return 0.0;
}

void validate_gram_input(const KernelSpec& spec, const Matrix& X) {
  check_resolved(spec);
  require_finite(X, "kernel input");
  if (spec.kind == KernelKind::Tanimoto) check_binary(X, "X");
}

void validate_cross_input(const KernelSpec& spec, const Matrix& X_test, const Matrix& X_train) {
  require(X_test.cols() == X_train.cols(), ErrorKind::DimensionMismatch,
          "cross_gram: test points have " + std::to_string(X_test.cols()) + " features, training points have " +
              std::to_string(X_train.cols()));
  check_resolved(spec);
  require_finite(X_test, "kernel test input");
  require_finite(X_train, "kernel training input");
  if (spec.kind == KernelKind::Tanimoto) {
    check_binary(X_test, "X_test");
    check_binary(X_train, "X_train");
  }
}

}  // namespace

double eval_kernel(const KernelSpec& spec, std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size(), ErrorKind::DimensionMismatch,
          "eval_kernel: vector lengths " + std::to_string(x.size()) + " and " + std::to_string(y.size()) + " differ");
  check_resolved(spec);
  if (spec.kind == KernelKind::Tanimoto) {
    auto binary = [](std::span<const double> v) {
      return std::all_of(v.begin(), v.end(), [](double e) { return e == 0.0 || e == 1.0; });
    };
    require(binary(x) && binary(y), ErrorKind::InvalidArgument, "tanimoto kernel needs binary (0/1) input");
  }
  return eval_unchecked(spec, x, y);
}

GramMatrix gram(const KernelSpec& spec, const Matrix& X) {
  require(X.rows() >= 2, ErrorKind::InvalidArgument, "gram: need at least 2 points");
  validate_gram_input(spec, X);
  Matrix full(X.rows(), X.rows());
  par::fill_symmetric(full, [&](Eigen::Index i, Eigen::Index j) {
    return eval_unchecked(spec, row_span(X, i), row_span(X, j));
  });
  return GramMatrix::from_full(std::move(full));
}

Matrix cross_gram(const KernelSpec& spec, const Matrix& X_test, const Matrix& X_train) {
  validate_cross_input(spec, X_test, X_train);
  Matrix out(X_test.rows(), X_train.rows());
  par::fill_dense(out, [&](Eigen::Index i, Eigen::Index j) {
    return eval_unchecked(spec, row_span(X_test, i), row_span(X_train, j));
  });
  return out;
}

double median_heuristic_sigma(const Matrix& X) {
  const Eigen::Index n = X.rows();
  require(n >= 2, ErrorKind::InvalidArgument, "median heuristic: need at least 2 points");
  require_finite(X, "median heuristic input");
  std::vector<double> d;
  d.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) d.push_back((X.row(i) - X.row(j)).norm());
  }
  const std::size_t m = d.size();
  const std::size_t mid = m / 2;
  std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(mid), d.end());
  double med = d[mid];
  if (m % 2 == 0) {
    const double lower = *std::max_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(mid));
    med = 0.5 * (lower + med);
  }
  if (!(med > 0.0)) {
    const double top = *std::max_element(d.begin(), d.end());
    require(top > 0.0, ErrorKind::DegenerateData, "median heuristic: all pairwise distances are zero");
    fail(ErrorKind::DegenerateData, "median heuristic: median pairwise distance is zero (too many duplicate points)");
  }
  return med;
}

KernelSpec resolve(const KernelSpec& spec, const Matrix& X) {
  if (spec.resolved()) return spec;
  return KernelSpec::gaussian(median_heuristic_sigma(X));
}

bool check_psd(const GramMatrix& G, double tol) {
  const SymEig eig = sym_eig(G.full);
  if (eig.values.size() == 0) return true;
  const double top = eig.values[0];
  const double bottom = eig.values[eig.values.size() - 1];
  return bottom >= -tol * std::max(1.0, top);
}

namespace serial {

GramMatrix gram(const KernelSpec& spec, const Matrix& X) {
  require(X.rows() >= 2, ErrorKind::InvalidArgument, "gram: need at least 2 points");
  validate_gram_input(spec, X);
  Matrix full(X.rows(), X.rows());
  serial::fill_symmetric(full, [&](Eigen::Index i, Eigen::Index j) {
    return eval_unchecked(spec, row_span(X, i), row_span(X, j));
  });
  return GramMatrix::from_full(std::move(full));
}

Matrix cross_gram(const KernelSpec& spec, const Matrix& X_test, const Matrix& X_train) {
  validate_cross_input(spec, X_test, X_train);
  Matrix out(X_test.rows(), X_train.rows());
  serial::fill_dense(out, [&](Eigen::Index i, Eigen::Index j) {
    return eval_unchecked(spec, row_span(X_test, i), row_span(X_train, j));
  });
  return out;
}

}  // namespace serial

}  // namespace ake
