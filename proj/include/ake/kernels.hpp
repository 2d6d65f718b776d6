#pragma once

#include "ake/numerics.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace ake {

enum class KernelKind { Linear, Gaussian, Tanimoto };

std::string_view to_string(KernelKind kind) noexcept;
KernelKind parse_kernel_kind(std::string_view name);

/// A kernel function and its hyperparameters. For the Gaussian kernel an
/// empty `sigma` means "auto": it is resolved with the median heuristic
/// when a dataset is first seen and frozen from then on.
struct KernelSpec {
  KernelKind kind = KernelKind::Gaussian;
  std::optional<double> sigma;

  static KernelSpec linear() { return {KernelKind::Linear, std::nullopt}; }
  static KernelSpec gaussian(double s) { return {KernelKind::Gaussian, s}; }
  static KernelSpec gaussian_auto() { return {KernelKind::Gaussian, std::nullopt}; }
  static KernelSpec tanimoto() { return {KernelKind::Tanimoto, std::nullopt}; }

  bool resolved() const { return kind != KernelKind::Gaussian || sigma.has_value(); }
  bool differentiable() const { return kind != KernelKind::Tanimoto; }

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;
};

/// Gram matrix together with its zero-diagonal companion.
struct GramMatrix {
  Matrix full;
  Matrix zero_diag;

  /// Wraps an already-formed symmetric matrix (precomputed-Gram input, latent Gram).
  static GramMatrix from_full(Matrix full);

  Eigen::Index size() const { return full.rows(); }
};

/// k(x, y). Symmetric bit-for-bit: k(x, y) == k(y, x).
double eval_kernel(const KernelSpec& spec, std::span<const double> x, std::span<const double> y);

GramMatrix gram(const KernelSpec& spec, const Matrix& X);

/// Entry (i, j) = k(test_i, train_j).
Matrix cross_gram(const KernelSpec& spec, const Matrix& X_test, const Matrix& X_train);

/// Median of the pairwise Euclidean distances over i < j.
double median_heuristic_sigma(const Matrix& X);

/// Returns `spec` with an "auto" bandwidth replaced by the median heuristic on X.
KernelSpec resolve(const KernelSpec& spec, const Matrix& X);

/// True iff the smallest eigenvalue of G.full is >= -tol * max(1, lambda_max).
bool check_psd(const GramMatrix& G, double tol);

namespace serial {

/// Plain double-loop Gram builders (reference for the OpenMP versions).
GramMatrix gram(const KernelSpec& spec, const Matrix& X);
Matrix cross_gram(const KernelSpec& spec, const Matrix& X_test, const Matrix& X_train);

}  // namespace serial

}  // namespace ake
