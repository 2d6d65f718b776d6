#include "ake/embedding.hpp"

#include "ake/error.hpp"
#include "ake/random.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace ake {

std::string_view to_string(OptimizerMethod m) noexcept { return m == OptimizerMethod::Adam ? "adam" : "gd"; }

std::string_view to_string(InitKind k) noexcept { return k == InitKind::Uniform ? "uniform" : "gaussian"; }

OptimizerMethod parse_optimizer_method(std::string_view name) {
  if (name == "gd") return OptimizerMethod::GradientDescent;
  if (name == "adam") return OptimizerMethod::Adam;
  fail(ErrorKind::InvalidArgument, "unknown optimizer '" + std::string(name) + "' (expected gd, adam)");
}

InitKind parse_init_kind(std::string_view name) {
  if (name == "gaussian") return InitKind::Gaussian;
  if (name == "uniform") return InitKind::Uniform;
  fail(ErrorKind::InvalidArgument, "unknown init '" + std::string(name) + "' (expected gaussian, uniform)");
}

void validate(const OptimizerConfig& cfg) {
  require(cfg.max_iters >= 1, ErrorKind::InvalidArgument, "max_iters must be >= 1");
  require(std::isfinite(cfg.learning_rate) && cfg.learning_rate > 0.0, ErrorKind::InvalidArgument,
          "learning_rate must be positive");
  require(std::isfinite(cfg.rel_tol) && cfg.rel_tol >= 0.0, ErrorKind::InvalidArgument, "rel_tol must be >= 0");
  require(std::isfinite(cfg.init_scale) && cfg.init_scale > 0.0, ErrorKind::InvalidArgument,
          "init_scale must be positive");
}

namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxHalvings = 60;

// Everything downstream of alpha that both the loss and its gradient need.
struct LatentState {
  Matrix Z;
  GramMatrix GH;
  Matrix sq;  // G~_H G~_H
  QuadraticForm q;
  double loss = 0.0;
};

void check_shapes(const Matrix& alpha, const Vector& beta, const Matrix& G_R, const KernelSpec& latent) {
  const Eigen::Index n = G_R.rows();
  require(G_R.cols() == n, ErrorKind::DimensionMismatch, "G_R must be square");
  require(alpha.rows() == n, ErrorKind::DimensionMismatch,
          "alpha has " + std::to_string(alpha.rows()) + " rows, G_R has " + std::to_string(n));
  require(beta.size() == n, ErrorKind::DimensionMismatch,
          "beta has length " + std::to_string(beta.size()) + ", expected " + std::to_string(n));
  require(latent.resolved(), ErrorKind::InvalidArgument, "latent kernel bandwidth must be resolved");
}

LatentState latent_state(const Matrix& alpha, const Vector& beta, const Matrix& G_R, const KernelSpec& latent) {
  LatentState s;
  s.Z = G_R * alpha;
  s.GH = gram(latent, s.Z);
  s.q = build_quadratic(s.GH, s.sq);
  s.loss = reconstruction_loss(s.q, beta);
  return s;
}

// dL/dZ from a populated state. Writing S = dL/dG with every entry of G
// treated as free, P = S + S' is the derivative w.r.t. each symmetric pair:
//   P_ij = -4 G_ij (b_i + b_j) + 2 b_i b_j (G~^2)_ij + 2 (T + T')_ij   (i != j)
//   P_ii = 2 + 2 b_i^2 (G~^2)_ii
// with T = G~ D G D.
Matrix latent_grad(const LatentState& s, const Vector& beta, const KernelSpec& latent) {
  const Eigen::Index n = s.GH.size();
  const Matrix& G = s.GH.full;

  Matrix Y = beta.asDiagonal() * G * beta.asDiagonal();
  Matrix T = s.GH.zero_diag * Y;

  Matrix P(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double bb = beta[i] * beta[j];
      if (i == j) {
        P(i, i) = 2.0 + 2.0 * bb * s.sq(i, i);
      } else {
        P(i, j) = -4.0 * G(i, j) * (beta[i] + beta[j]) + 2.0 * bb * s.sq(i, j) + 2.0 * (T(i, j) + T(j, i));
      }
    }
  }

  if (latent.kind == KernelKind::Linear) return P * s.Z;

  // Gaussian: dG_ij/dz_i = -G_ij (z_i - z_j) / sigma^2; the diagonal is constant.
  const double inv_s2 = 1.0 / (*latent.sigma * *latent.sigma);
  Matrix W = P.cwiseProduct(G);
  W.diagonal().setZero();
  Vector deg = W.rowwise().sum();
  return inv_s2 * (W * s.Z - deg.asDiagonal() * s.Z);
}

Matrix alpha_grad(const LatentState& s, const Vector& beta, const Matrix& G_R, const KernelSpec& latent) {
  return G_R.transpose() * latent_grad(s, beta, latent);
}

void require_differentiable(const KernelSpec& latent) {
  require(latent.differentiable(), ErrorKind::UnsupportedKernel,
          "latent kernel '" + std::string(to_string(latent.kind)) + "' is not differentiable (use linear or gaussian)");
}

Matrix init_alpha(Eigen::Index n, Eigen::Index d, const OptimizerConfig& cfg) {
  Rng rng(cfg.seed, Stream::AlphaInit);
  const double scale = cfg.init_scale / std::sqrt(static_cast<double>(n));
  Matrix alpha(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      alpha(i, j) = cfg.init == InitKind::Gaussian ? scale * rng.normal() : rng.uniform(0.0, 2.0 * scale);
    }
  }
  return alpha;
}

[[noreturn]] void diverged(const std::vector<TracePoint>& trace, int iteration, double loss) {
  std::ostringstream os;
  os.precision(17);
  os << "stage B (embedding): non-finite loss " << loss << " at iteration " << iteration << "; recent trace:";
  const std::size_t from = trace.size() > 5 ? trace.size() - 5 : 0;
  for (std::size_t k = from; k < trace.size(); ++k) os << " [" << trace[k].iteration << ": " << trace[k].loss << "]";
  fail(ErrorKind::NumericalFailure, os.str());
}

bool converged(double prev, double next, double rel_tol) {
  return std::abs(prev - next) / (1.0 + std::abs(next)) < rel_tol;
}

void run_gd(Matrix& alpha, const Vector& beta, const Matrix& G_R, const KernelSpec& latent, const OptimizerConfig& cfg,
            std::vector<TracePoint>& trace, const IterationCallback& cb) {
  LatentState state = latent_state(alpha, beta, G_R, latent);
  if (!std::isfinite(state.loss)) diverged(trace, 0, state.loss);
  trace.push_back({0, state.loss});

  double step = cfg.learning_rate;
  for (int it = 1; it <= cfg.max_iters; ++it) {
    const Matrix grad = alpha_grad(state, beta, G_R, latent);
    const double gn2 = grad.squaredNorm();
    if (!(gn2 > 0.0)) break;

    bool accepted = false;
    Matrix trial;
    LatentState next;
    for (int h = 0; h < kMaxHalvings; ++h) {
      trial = alpha - step * grad;
      next = latent_state(trial, beta, G_R, latent);
      if (std::isfinite(next.loss) && next.loss <= state.loss - kArmijo * step * gn2) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;

    const bool done = converged(state.loss, next.loss, cfg.rel_tol);
    alpha = std::move(trial);
    state = std::move(next);
    trace.push_back({it, state.loss});
    if (cb) cb(it, state.loss);
    if (done) break;
    step *= 2.0;
  }
}

void run_adam(Matrix& alpha, const Vector& beta, const Matrix& G_R, const KernelSpec& latent,
              const OptimizerConfig& cfg, std::vector<TracePoint>& trace, const IterationCallback& cb) {
  constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
  LatentState state = latent_state(alpha, beta, G_R, latent);
  if (!std::isfinite(state.loss)) diverged(trace, 0, state.loss);
  trace.push_back({0, state.loss});

  Matrix m = Matrix::Zero(alpha.rows(), alpha.cols());
  Matrix v = Matrix::Zero(alpha.rows(), alpha.cols());
  Matrix best = alpha;
  double best_loss = state.loss;
  double prev = state.loss;

  for (int it = 1; it <= cfg.max_iters; ++it) {
    const Matrix grad = alpha_grad(state, beta, G_R, latent);
    m = b1 * m + (1.0 - b1) * grad;
    v = b2 * v + (1.0 - b2) * grad.cwiseAbs2();
    const double c1 = 1.0 - std::pow(b1, it);
    const double c2 = 1.0 - std::pow(b2, it);
    alpha.array() -= cfg.learning_rate * (m.array() / c1) / ((v.array() / c2).sqrt() + eps);

    state = latent_state(alpha, beta, G_R, latent);
    if (!std::isfinite(state.loss)) diverged(trace, it, state.loss);
    if (state.loss <= best_loss) {
      best_loss = state.loss;
      best = alpha;
    }
    trace.push_back({it, best_loss});
    if (cb) cb(it, state.loss);
    if (converged(prev, state.loss, cfg.rel_tol)) break;
    prev = state.loss;
  }
  alpha = std::move(best);
}

EmbeddingModel fit_core(const GramMatrix& G, const FitOptions& opts, EmbeddingModel model) {
  const Eigen::Index n = G.size();
  const Eigen::Index d = opts.latent_dim;
  require(n >= 2, ErrorKind::InvalidArgument, "fit: need n >= 2 samples");
  require(d >= 1 && d < n, ErrorKind::InvalidArgument,
          "fit: latent dimension must satisfy 1 <= d < n (got d = " + std::to_string(d) + ", n = " +
              std::to_string(n) + ")");
  validate(opts.optimizer);
  require_differentiable(opts.latent_kernel);

  // Stage A.
  ReconstructionWeights w;
  try {
    w = solve_beta(build_quadratic(G), opts.ridge);
  } catch (const Error& e) {
    fail(e.kind(), std::string("stage A (reconstruction): ") + e.what());
  }
  model.beta = w.beta;
  model.stage_a_loss = w.loss;
  model.ridge_used = w.ridge_used;
  model.solver_path = w.solver_path;

  // Stage B.
  Matrix alpha = init_alpha(n, d, opts.optimizer);
  model.latent_kernel = resolve(opts.latent_kernel, G.full * alpha);
  model.seed = opts.optimizer.seed;
  model.method = opts.optimizer.method;

  if (opts.optimizer.method == OptimizerMethod::GradientDescent) {
    run_gd(alpha, model.beta, G.full, model.latent_kernel, opts.optimizer, model.trace, opts.on_iteration);
  } else {
    run_adam(alpha, model.beta, G.full, model.latent_kernel, opts.optimizer, model.trace, opts.on_iteration);
  }

  model.alpha = std::move(alpha);
  model.embedding = G.full * model.alpha;
  return model;
}

}  // namespace

double alignment_loss(const Matrix& alpha, const Vector& beta, const Matrix& G_R, const KernelSpec& latent_kernel) {
  check_shapes(alpha, beta, G_R, latent_kernel);
  return latent_state(alpha, beta, G_R, latent_kernel).loss;
}

Matrix alignment_grad(const Matrix& alpha, const Vector& beta, const Matrix& G_R, const KernelSpec& latent_kernel) {
  check_shapes(alpha, beta, G_R, latent_kernel);
  require_differentiable(latent_kernel);
  return alpha_grad(latent_state(alpha, beta, G_R, latent_kernel), beta, G_R, latent_kernel);
}

EmbeddingModel fit(const Matrix& X, const FitOptions& opts) {
  require(X.rows() >= 2, ErrorKind::InvalidArgument, "fit: need n >= 2 samples");
  require_finite(X, "training data");
  EmbeddingModel model;
  model.input_kernel = resolve(opts.input_kernel, X);
  model.X_train = X;
  const GramMatrix G = gram(model.input_kernel, X);
  return fit_core(G, opts, std::move(model));
}

EmbeddingModel fit_gram(const Matrix& G_train, const FitOptions& opts) {
  require(G_train.rows() == G_train.cols(), ErrorKind::DimensionMismatch,
          "precomputed Gram must be square, got " + std::to_string(G_train.rows()) + "x" +
              std::to_string(G_train.cols()));
  require_finite(G_train, "precomputed Gram");
  const double asym = G_train.size() == 0 ? 0.0 : (G_train - G_train.transpose()).cwiseAbs().maxCoeff();
  require(asym <= 1e-10 * std::max(1.0, max_abs(G_train)), ErrorKind::NotSymmetric,
          "precomputed Gram is not symmetric (max asymmetry " + std::to_string(asym) + ")");
  EmbeddingModel model;
  model.input_kernel = opts.input_kernel;
  model.precomputed_gram = true;
  model.G_R = G_train;
  return fit_core(GramMatrix::from_full(G_train), opts, std::move(model));
}

Matrix transform(const EmbeddingModel& model, const Matrix& X_test) {
  require(!model.precomputed_gram, ErrorKind::InvalidArgument,
          "model was fitted on a precomputed Gram; supply the test/train cross-Gram (transform_gram)");
  require(X_test.cols() == model.input_dim(), ErrorKind::DimensionMismatch,
          "feature count mismatch: model expects " + std::to_string(model.input_dim()) + " features, found " +
              std::to_string(X_test.cols()));
  return cross_gram(model.input_kernel, X_test, model.X_train) * model.alpha;
}

Matrix transform_gram(const EmbeddingModel& model, const Matrix& G_star) {
  require(G_star.cols() == model.n(), ErrorKind::DimensionMismatch,
          "cross-Gram has " + std::to_string(G_star.cols()) + " columns, model has " + std::to_string(model.n()) +
              " training points");
  require_finite(G_star, "cross-Gram");
  return G_star * model.alpha;
}

}  // namespace ake
