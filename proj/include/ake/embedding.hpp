#pragma once

// Stage B: learn alpha (n x d) so that the latent Gram of Z = G_R alpha
// reproduces the stage-A reconstruction pattern. The alignment loss is the
// stage-A quadratic form evaluated on the latent Gram G_H with beta frozen:
//
//   L(alpha) = beta' A(G_H) beta - 2 c(G_H)' beta + tr(G_H)
//
// New points are embedded with the Nystrom-style map Z' = k(X', X_train) alpha.

#include "ake/kernels.hpp"
#include "ake/numerics.hpp"
#include "ake/reconstruction.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

namespace ake {

enum class OptimizerMethod { GradientDescent, Adam };
enum class InitKind { Gaussian, Uniform };

std::string_view to_string(OptimizerMethod m) noexcept;
std::string_view to_string(InitKind k) noexcept;
OptimizerMethod parse_optimizer_method(std::string_view name);
InitKind parse_init_kind(std::string_view name);

struct OptimizerConfig {
  int max_iters = 2000;
  double learning_rate = 1.0;  // initial trial step for gd, fixed step for adam
  OptimizerMethod method = OptimizerMethod::GradientDescent;
  double rel_tol = 1e-9;       // stop when |dL| / (1 + |L|) < rel_tol
  std::uint64_t seed = 0;
  double init_scale = 1.0;
  // Gaussian: N(0, (init_scale/sqrt(n))^2). Uniform: U[0, 2*init_scale/sqrt(n)).
  InitKind init = InitKind::Gaussian;
};

void validate(const OptimizerConfig& cfg);

struct TracePoint {
  int iteration = 0;
  double loss = 0.0;
};

struct EmbeddingModel {
  Matrix alpha;                // n x d
  Vector beta;                 // n
  KernelSpec input_kernel;     // resolved
  KernelSpec latent_kernel;    // resolved
  bool precomputed_gram = false;
  Matrix X_train;              // n x D, empty in precomputed mode
  Matrix G_R;                  // n x n training Gram, kept only in precomputed mode
  Matrix embedding;            // training embedding G_R alpha
  std::uint64_t seed = 0;
  OptimizerMethod method = OptimizerMethod::GradientDescent;
  double stage_a_loss = 0.0;
  double ridge_used = 0.0;
  SolvePath solver_path = SolvePath::Direct;
  std::vector<TracePoint> trace;

  Eigen::Index n() const { return alpha.rows(); }
  Eigen::Index latent_dim() const { return alpha.cols(); }
  Eigen::Index input_dim() const { return X_train.cols(); }
  int iterations() const { return trace.empty() ? 0 : trace.back().iteration; }
  double initial_loss() const { return trace.empty() ? 0.0 : trace.front().loss; }
  double final_loss() const { return trace.empty() ? 0.0 : trace.back().loss; }
};

double alignment_loss(const Matrix& alpha, const Vector& beta, const Matrix& G_R, const KernelSpec& latent_kernel);

/// dL/dalpha, back-propagated through G_H and Z = G_R alpha.
Matrix alignment_grad(const Matrix& alpha, const Vector& beta, const Matrix& G_R, const KernelSpec& latent_kernel);

/// Called after every accepted iteration with (iteration, loss).
using IterationCallback = std::function<void(int, double)>;

struct FitOptions {
  KernelSpec input_kernel = KernelSpec::gaussian_auto();
  KernelSpec latent_kernel = KernelSpec::gaussian_auto();
  Eigen::Index latent_dim = 2;
  OptimizerConfig optimizer;
  std::optional<double> ridge;  // default: 1e-8 tr(A)/n
  IterationCallback on_iteration;
};

/// Two-phase fit on raw features.
EmbeddingModel fit(const Matrix& X, const FitOptions& opts);

/// Two-phase fit on a precomputed n x n training Gram matrix.
EmbeddingModel fit_gram(const Matrix& G_train, const FitOptions& opts);

Matrix transform(const EmbeddingModel& model, const Matrix& X_test);

/// G_star (m x n) times alpha.
Matrix transform_gram(const EmbeddingModel& model, const Matrix& G_star);

}  // namespace ake
