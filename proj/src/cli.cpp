#include "ake/cli.hpp"

#include "ake/baselines.hpp"
#include "ake/data.hpp"
#include "ake/embedding.hpp"
#include "ake/metrics.hpp"
#include "ake/model_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

namespace ake {

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::NotSymmetric:
    case ErrorKind::UnsupportedKernel:
      return 2;
    case ErrorKind::Io:
    case ErrorKind::ParseError:
      return 3;
    case ErrorKind::NumericalFailure:
    case ErrorKind::InsufficientRank:
    case ErrorKind::DegenerateData:
      return 4;
    case ErrorKind::Format:
      return 5;
  }
  return 1;
}

namespace {

using nlohmann::json;

// Options of one subcommand, settable by flag or by key in a --config JSON
// file. A flag given on the command line wins over the file.
class Options {
 public:
  explicit Options(CLI::App* app) : app_(app) {
    app_->add_option("--config", config_path_, "JSON file of option values (flags take precedence)");
  }

  template <class T>
  CLI::Option* value(const std::string& flags, const std::string& key, T& target, const std::string& desc) {
    CLI::Option* o = app_->add_option_function<T>(flags, [&target](const T& v) { target = v; }, desc);
    bindings_.push_back({key, o, [&target](const json& v) { target = v.get<T>(); }});
    return o;
  }

  template <class T>
  CLI::Option* value(const std::string& flags, const std::string& key, std::optional<T>& target,
                     const std::string& desc) {
    CLI::Option* o = app_->add_option_function<T>(flags, [&target](const T& v) { target = v; }, desc);
    bindings_.push_back({key, o, [&target](const json& v) { target = v.get<T>(); }});
    return o;
  }

  CLI::Option* flag(const std::string& flags, const std::string& key, bool& target, const std::string& desc) {
    CLI::Option* o = app_->add_flag(flags, target, desc);
    bindings_.push_back({key, o, [&target](const json& v) { target = v.get<bool>(); }});
    return o;
  }

  void merge_config() const {
    if (config_path_.empty()) return;
    std::ifstream in(config_path_);
    require(static_cast<bool>(in), ErrorKind::Io, "cannot open config file '" + config_path_ + "'");
    json cfg;
    try {
      cfg = json::parse(in);
    } catch (const json::exception& e) {
      fail(ErrorKind::InvalidArgument, "config file '" + config_path_ + "' is not valid JSON: " + e.what());
    }
    require(cfg.is_object(), ErrorKind::InvalidArgument, "config file must hold a JSON object");
    for (const auto& [key, v] : cfg.items()) {
      const Binding* b = find(key);
      require(b != nullptr, ErrorKind::InvalidArgument, "unknown config key '" + key + "'");
      if (b->option->count() > 0) continue;
      try {
        b->assign(v);
      } catch (const json::exception&) {
        fail(ErrorKind::InvalidArgument, "config key '" + key + "' has the wrong type");
      }
    }
  }

 private:
  struct Binding {
    std::string key;
    CLI::Option* option;
    std::function<void(const json&)> assign;
  };

  const Binding* find(const std::string& key) const {
    for (const auto& b : bindings_) {
      if (b.key == key) return &b;
    }
    return nullptr;
  }

  CLI::App* app_;
  std::string config_path_;
  std::vector<Binding> bindings_;
};

void require_path(const std::string& value, const std::string& flag) {
  require(!value.empty(), ErrorKind::InvalidArgument, "missing required option " + flag);
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed) {
  if (seed) return *seed;
  const char* env = std::getenv("AKE_SEED");
  if (env == nullptr || *env == '\0') return 0;
  const std::string_view text(env);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  require(ec == std::errc() && ptr == text.data() + text.size(), ErrorKind::InvalidArgument,
          "AKE_SEED must be a non-negative integer, got '" + std::string(text) + "'");
  return v;
}

KernelSpec kernel_spec(const std::string& name, const std::optional<double>& sigma) {
  const KernelKind kind = parse_kernel_kind(name);
  if (kind != KernelKind::Gaussian) {
    require(!sigma, ErrorKind::InvalidArgument, "a bandwidth only applies to the gaussian kernel");
    return {kind, std::nullopt};
  }
  if (!sigma) return KernelSpec::gaussian_auto();
  require(std::isfinite(*sigma) && *sigma > 0.0, ErrorKind::InvalidArgument, "gaussian bandwidth must be > 0");
  return KernelSpec::gaussian(*sigma);
}

Dataset load_input(const std::string& path, const std::string& format) {
  if (format == "fingerprints") return load_fingerprints(path);
  require(format == "csv", ErrorKind::InvalidArgument, "unknown input format '" + format + "' (expected csv, fingerprints)");
  return load_csv(path, detect_csv_layout(path));
}

std::vector<std::string> latent_names(Eigen::Index d) {
  std::vector<std::string> names;
  for (Eigen::Index k = 0; k < d; ++k) names.push_back("z" + std::to_string(k));
  return names;
}

// Embedding with the label/color columns of its source carried along.
void save_embedding(const std::string& path, const Matrix& Z, const Dataset& source) {
  Dataset out;
  out.X = Z;
  out.feature_names = latent_names(Z.cols());
  if (source.labels && static_cast<Eigen::Index>(source.labels->size()) == Z.rows()) out.labels = source.labels;
  if (source.color && source.color->size() == Z.rows()) out.color = source.color;
  save_csv(path, out);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(f), ErrorKind::Io, "cannot open '" + path + "' for writing");
  f << text;
  f.flush();
  require(static_cast<bool>(f), ErrorKind::Io, "write to '" + path + "' failed");
}

// ---- generate ----

struct GenerateArgs {
  std::string dataset;
  std::optional<int> n;
  std::optional<double> noise;
  std::vector<double> radii;
  std::optional<std::uint64_t> seed;
  std::string output;
};

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
  require_path(a.output, "--output");
  const std::uint64_t seed = resolve_seed(a.seed);
  require(!a.n || *a.n >= 1, ErrorKind::InvalidArgument, "--n must be >= 1");
  Dataset ds;
  if (a.dataset == "circles") {
    CirclesParams p;
    if (a.n) p.n_per_class = *a.n;
    if (a.noise) p.noise_std = *a.noise;
    if (!a.radii.empty()) p.radii = a.radii;
    p.seed = seed;
    ds = gen_circles(p);
  } else if (a.dataset == "swissroll") {
    require(a.radii.empty(), ErrorKind::InvalidArgument, "--radii only applies to circles");
    SwissRollParams p;
    if (a.n) p.n = *a.n;
    if (a.noise) p.noise_std = *a.noise;
    p.seed = seed;
    ds = gen_swiss_roll(p);
  } else {
    fail(ErrorKind::InvalidArgument, "unknown dataset '" + a.dataset + "' (expected circles, swissroll)");
  }
  save_csv(a.output, ds);
  out << "wrote " << ds.n() << " rows to " << a.output << "\n";
  return 0;
}

// ---- fit ----

struct FitArgs {
  std::string input;
  std::string output;
  std::string embedding_out;
  std::string format = "csv";
  bool precomputed_gram = false;
  Eigen::Index latent_dim = 2;
  std::string input_kernel = "gaussian";
  std::optional<double> input_sigma;
  std::string latent_kernel = "gaussian";
  std::optional<double> latent_sigma;
  std::optional<double> ridge;
  std::string method = "gd";
  int max_iters = 2000;
  double learning_rate = 1.0;
  double rel_tol = 1e-9;
  double init_scale = 1.0;
  std::string init = "gaussian";
  std::optional<std::uint64_t> seed;
  int log_every = 0;
};

int cmd_fit(const FitArgs& a, std::ostream& out, std::ostream& err) {
  require_path(a.input, "--input");
  require_path(a.output, "--output");
  FitOptions opts;
  if (!a.precomputed_gram) opts.input_kernel = kernel_spec(a.input_kernel, a.input_sigma);
  opts.latent_kernel = kernel_spec(a.latent_kernel, a.latent_sigma);
  opts.latent_dim = a.latent_dim;
  opts.ridge = a.ridge;
  require(!a.ridge || (std::isfinite(*a.ridge) && *a.ridge >= 0.0), ErrorKind::InvalidArgument, "--ridge must be >= 0");
  opts.optimizer.method = parse_optimizer_method(a.method);
  opts.optimizer.init = parse_init_kind(a.init);
  opts.optimizer.max_iters = a.max_iters;
  opts.optimizer.learning_rate = a.learning_rate;
  opts.optimizer.rel_tol = a.rel_tol;
  opts.optimizer.init_scale = a.init_scale;
  opts.optimizer.seed = resolve_seed(a.seed);
  validate(opts.optimizer);
  require(a.latent_dim >= 1, ErrorKind::InvalidArgument, "latent dimension must satisfy 1 <= d < n");
  require(a.log_every >= 0, ErrorKind::InvalidArgument, "--log-every must be >= 0");
  if (a.log_every > 0) {
    const int every = a.log_every;
    opts.on_iteration = [&err, every](int it, double loss) {
      if (it % every == 0) err << "iteration " << it << " loss " << format_double(loss) << "\n";
    };
  }

  const Dataset ds = load_input(a.input, a.format);
  const EmbeddingModel model = a.precomputed_gram ? fit_gram(ds.X, opts) : fit(ds.X, opts);
  save_model(a.output, model);
  if (!a.embedding_out.empty()) save_embedding(a.embedding_out, model.embedding, ds);

  out << "stage A loss: " << format_double(model.stage_a_loss) << "\n"
      << "stage B loss: " << format_double(model.final_loss()) << " (initial " << format_double(model.initial_loss())
      << ")\n"
      << "iterations: " << model.iterations() << "\n"
      << "model: " << a.output << "\n";
  return 0;
}

// ---- transform ----

struct TransformArgs {
  std::string model;
  std::string input;
  std::string output;
  std::string format = "csv";
  bool gram = false;
};

int cmd_transform(const TransformArgs& a, std::ostream& out) {
  require_path(a.model, "--model");
  require_path(a.input, "--input");
  require_path(a.output, "--output");
  const AnyModel model = load_model(a.model);
  const Dataset ds = load_input(a.input, a.format);
  Matrix Z;
  if (const auto* ke = std::get_if<EmbeddingModel>(&model)) {
    if (a.gram) {
      require(ke->precomputed_gram, ErrorKind::InvalidArgument,
              "--gram needs a model fitted with --precomputed-gram; this model holds raw features");
      Z = transform_gram(*ke, ds.X);
    } else {
      Z = transform(*ke, ds.X);
    }
  } else {
    require(!a.gram, ErrorKind::InvalidArgument, "--gram is not supported for kpca models");
    Z = kpca_transform(std::get<KpcaModel>(model), ds.X);
  }
  save_embedding(a.output, Z, ds);
  out << "wrote " << Z.rows() << " x " << Z.cols() << " embedding to " << a.output << "\n";
  return 0;
}

// ---- eval ----

struct EvalArgs {
  std::string embedding;
  std::string original;
  std::string labels;
  int k = 15;
  std::string output;
};

std::vector<int> load_labels(const std::string& path) {
  const Dataset ds = load_csv(path, detect_csv_layout(path));
  if (ds.labels) return *ds.labels;
  require(ds.X.cols() == 1, ErrorKind::InvalidArgument,
          "labels file '" + path + "' needs a 'label' column or exactly one column");
  std::vector<int> labels;
  for (Eigen::Index i = 0; i < ds.X.rows(); ++i) {
    const double v = ds.X(i, 0);
    require(v == std::floor(v) && std::abs(v) < 2e9, ErrorKind::InvalidArgument,
            "labels file '" + path + "' row " + std::to_string(i + 1) + " is not an integer");
    labels.push_back(static_cast<int>(v));
  }
  return labels;
}

json metric_value(double v) {
  // JSON has no infinity; an unbounded index is written as null.
  return std::isfinite(v) ? json(v) : json(nullptr);
}

int cmd_eval(const EvalArgs& a, std::ostream& out, std::ostream& err) {
  require_path(a.embedding, "--embedding");
  require_path(a.original, "--original");
  const Dataset emb = load_csv(a.embedding, detect_csv_layout(a.embedding));
  const Dataset orig = load_csv(a.original, detect_csv_layout(a.original));
  require(emb.n() == orig.n(), ErrorKind::DimensionMismatch,
          "embedding has " + std::to_string(emb.n()) + " rows, original data has " + std::to_string(orig.n()));

  nlohmann::ordered_json report;
  if (!a.labels.empty()) {
    std::vector<int> labels = load_labels(a.labels);
    require(static_cast<Eigen::Index>(labels.size()) == emb.n(), ErrorKind::DimensionMismatch,
            "labels file has " + std::to_string(labels.size()) + " rows, embedding has " + std::to_string(emb.n()));
    if (cluster_count(labels) < 2) {
      err << "warning: labels contain a single cluster; cluster indices omitted\n";
    } else {
      const LabeledEmbedding le{emb.X, std::move(labels)};
      report["davies_bouldin"] = metric_value(davies_bouldin(le));
      report["calinski_harabasz"] = metric_value(calinski_harabasz(le));
    }
  }
  const NeighborhoodReport nb = neighborhood_report(orig.X, emb.X, a.k);
  report["trustworthiness"] = nb.trustworthiness;
  report["continuity"] = nb.continuity;
  report["k"] = nb.k;

  const std::string text = report.dump(2) + "\n";
  if (a.output.empty()) {
    out << text;
  } else {
    write_text(a.output, text);
    out << "wrote report to " << a.output << "\n";
  }
  return 0;
}

// ---- baseline-kpca ----

struct KpcaArgs {
  std::string input;
  std::string output;
  std::string embedding_out;
  std::string format = "csv";
  Eigen::Index latent_dim = 2;
  std::string kernel = "gaussian";
  std::optional<double> sigma;
};

int cmd_kpca(const KpcaArgs& a, std::ostream& out) {
  require_path(a.input, "--input");
  require_path(a.output, "--output");
  const KernelSpec kernel = kernel_spec(a.kernel, a.sigma);
  require(a.latent_dim >= 1, ErrorKind::InvalidArgument, "latent dimension must satisfy 1 <= d < n");
  const Dataset ds = load_input(a.input, a.format);
  const KpcaModel model = kpca_fit(ds.X, kernel, a.latent_dim);
  save_model(a.output, model);
  if (!a.embedding_out.empty()) save_embedding(a.embedding_out, model.embedding, ds);
  out << "eigenvalues:";
  for (Eigen::Index k = 0; k < model.eigenvalues.size(); ++k) out << " " << format_double(model.eigenvalues[k]);
  out << "\nmodel: " << a.output << "\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kernel autoreconstruction embedding: generate data, fit, transform, evaluate."};
  app.name("ake");
  app.require_subcommand(1);

  GenerateArgs gen;
  CLI::App* sub_gen = app.add_subcommand("generate", "Write a synthetic dataset as CSV");
  Options gen_opts(sub_gen);
  gen_opts.value("--dataset", "dataset", gen.dataset, "circles or swissroll");
  gen_opts.value("--n", "n", gen.n, "points per class (circles) or total points (swissroll)");
  gen_opts.value("--noise", "noise", gen.noise, "Gaussian noise standard deviation");
  gen_opts.value("--radii", "radii", gen.radii, "circle radii, one class each")->delimiter(',');
  gen_opts.value("--seed", "seed", gen.seed, "random seed (default: $AKE_SEED, else 0)");
  gen_opts.value("-o,--output", "output", gen.output, "output CSV path");

  FitArgs fit_a;
  CLI::App* sub_fit = app.add_subcommand("fit", "Fit an embedding model");
  Options fit_opts(sub_fit);
  fit_opts.value("-i,--input", "input", fit_a.input, "training CSV (or n x n Gram with --precomputed-gram)");
  fit_opts.value("-o,--output", "output", fit_a.output, "model file to write");
  fit_opts.value("--embedding-out", "embedding_out", fit_a.embedding_out, "also write the training embedding CSV");
  fit_opts.value("--format", "format", fit_a.format, "csv or fingerprints");
  fit_opts.flag("--precomputed-gram", "precomputed_gram", fit_a.precomputed_gram, "input is a precomputed Gram matrix");
  fit_opts.value("-d,--latent-dim", "latent_dim", fit_a.latent_dim, "latent dimension d");
  fit_opts.value("--input-kernel", "input_kernel", fit_a.input_kernel, "linear, gaussian or tanimoto");
  fit_opts.value("--input-sigma", "input_sigma", fit_a.input_sigma, "input bandwidth (default: median heuristic)");
  fit_opts.value("--latent-kernel", "latent_kernel", fit_a.latent_kernel, "linear or gaussian");
  fit_opts.value("--latent-sigma", "latent_sigma", fit_a.latent_sigma, "latent bandwidth (default: median heuristic)");
  fit_opts.value("--ridge", "ridge", fit_a.ridge, "stage-A ridge (default 1e-8 tr(A)/n)");
  fit_opts.value("--method", "method", fit_a.method, "gd or adam");
  fit_opts.value("--max-iters", "max_iters", fit_a.max_iters, "iteration budget");
  fit_opts.value("--learning-rate", "learning_rate", fit_a.learning_rate, "initial step (gd) or step size (adam)");
  fit_opts.value("--rel-tol", "rel_tol", fit_a.rel_tol, "stop when |dL| / (1 + |L|) falls below this");
  fit_opts.value("--init-scale", "init_scale", fit_a.init_scale, "scale of the initial coefficients");
  fit_opts.value("--init", "init", fit_a.init, "gaussian or uniform coefficient initialisation");
  fit_opts.value("--seed", "seed", fit_a.seed, "random seed (default: $AKE_SEED, else 0)");
  fit_opts.value("--log-every", "log_every", fit_a.log_every, "log the loss every N iterations to stderr (0: off)");

  TransformArgs tr;
  CLI::App* sub_tr = app.add_subcommand("transform", "Embed new samples with a fitted model");
  Options tr_opts(sub_tr);
  tr_opts.value("--model", "model", tr.model, "model file");
  tr_opts.value("-i,--input", "input", tr.input, "samples CSV (or m x n cross-Gram with --gram)");
  tr_opts.value("-o,--output", "output", tr.output, "embedding CSV to write");
  tr_opts.value("--format", "format", tr.format, "csv or fingerprints");
  tr_opts.flag("--gram", "gram", tr.gram, "input holds kernel values against the training set");

  EvalArgs ev;
  CLI::App* sub_ev = app.add_subcommand("eval", "Score an embedding");
  Options ev_opts(sub_ev);
  ev_opts.value("--embedding", "embedding", ev.embedding, "embedding CSV");
  ev_opts.value("--original", "original", ev.original, "original data CSV, rows aligned with the embedding");
  ev_opts.value("--labels", "labels", ev.labels, "CSV with cluster labels (enables DB and CH)");
  ev_opts.value("--k", "k", ev.k, "neighbourhood size, 1 <= k < n/2");
  ev_opts.value("-o,--output", "output", ev.output, "report path (default: stdout)");

  KpcaArgs kp;
  CLI::App* sub_kp = app.add_subcommand("baseline-kpca", "Fit kernel PCA");
  Options kp_opts(sub_kp);
  kp_opts.value("-i,--input", "input", kp.input, "training CSV");
  kp_opts.value("-o,--output", "output", kp.output, "model file to write");
  kp_opts.value("--embedding-out", "embedding_out", kp.embedding_out, "also write the training embedding CSV");
  kp_opts.value("--format", "format", kp.format, "csv or fingerprints");
  kp_opts.value("-d,--latent-dim", "latent_dim", kp.latent_dim, "number of components");
  kp_opts.value("--kernel", "kernel", kp.kernel, "linear, gaussian or tanimoto");
  kp_opts.value("--sigma", "sigma", kp.sigma, "gaussian bandwidth (default: median heuristic)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    if (sub_gen->parsed()) {
      gen_opts.merge_config();
      return cmd_generate(gen, out);
    }
    if (sub_fit->parsed()) {
      fit_opts.merge_config();
      return cmd_fit(fit_a, out, err);
    }
    if (sub_tr->parsed()) {
      tr_opts.merge_config();
      return cmd_transform(tr, out);
    }
    if (sub_ev->parsed()) {
      ev_opts.merge_config();
      return cmd_eval(ev, out, err);
    }
    kp_opts.merge_config();
    return cmd_kpca(kp, out);
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::bad_alloc&) {
    err << "error: out of memory\n";
    return 4;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace ake
