#include "ake/model_io.hpp"

#include "ake/error.hpp"
#include "ake/random.hpp"

#include <json.hpp>

#include <array>
#include <bit>
#include <fstream>
#include <sstream>

namespace ake {

using nlohmann::json;

namespace {

constexpr std::string_view kAlphabet = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

int sextet(char ch) {
  if (ch >= 'A' && ch <= 'Z') return ch - 'A';
  if (ch >= 'a' && ch <= 'z') return ch - 'a' + 26;
  if (ch >= '0' && ch <= '9') return ch - '0' + 52;
  if (ch == '+') return 62;
  if (ch == '/') return 63;
  return -1;
}

}  // namespace

std::string base64_encode(std::span<const std::uint8_t> bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 3 <= bytes.size(); i += 3) {
    const std::uint32_t v = (std::uint32_t{bytes[i]} << 16) | (std::uint32_t{bytes[i + 1]} << 8) | bytes[i + 2];
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += kAlphabet[(v >> 6) & 63];
    out += kAlphabet[v & 63];
  }
  const std::size_t rest = bytes.size() - i;
  if (rest > 0) {
    std::uint32_t v = std::uint32_t{bytes[i]} << 16;
    if (rest == 2) v |= std::uint32_t{bytes[i + 1]} << 8;
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += rest == 2 ? kAlphabet[(v >> 6) & 63] : '=';
    out += '=';
  }
  return out;
}

std::vector<std::uint8_t> base64_decode(std::string_view text) {
  require(text.size() % 4 == 0, ErrorKind::Format, "base64 payload length is not a multiple of 4");
  std::vector<std::uint8_t> out;
  out.reserve(text.size() / 4 * 3);
  for (std::size_t i = 0; i < text.size(); i += 4) {
    const bool last = i + 4 == text.size();
    const int pad = last ? (text[i + 3] == '=') + (text[i + 2] == '=') : 0;
    std::array<int, 4> s{};
    for (int k = 0; k < 4 - pad; ++k) {
      s[static_cast<std::size_t>(k)] = sextet(text[i + static_cast<std::size_t>(k)]);
      require(s[static_cast<std::size_t>(k)] >= 0, ErrorKind::Format, "invalid base64 character");
    }
    const std::uint32_t v = (static_cast<std::uint32_t>(s[0]) << 18) | (static_cast<std::uint32_t>(s[1]) << 12) |
                            (static_cast<std::uint32_t>(s[2]) << 6) | static_cast<std::uint32_t>(s[3]);
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    if (pad < 2) out.push_back(static_cast<std::uint8_t>(v >> 8));
    if (pad < 1) out.push_back(static_cast<std::uint8_t>(v));
  }
  return out;
}

std::string encode_doubles(const Matrix& m) {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(static_cast<std::size_t>(m.size()) * 8);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const auto bits = std::bit_cast<std::uint64_t>(m(i, j));
      for (int b = 0; b < 8; ++b) bytes.push_back(static_cast<std::uint8_t>(bits >> (8 * b)));
    }
  }
  return base64_encode(bytes);
}

Matrix decode_doubles(std::string_view text, Eigen::Index rows, Eigen::Index cols) {
  require(rows >= 0 && cols >= 0, ErrorKind::Format, "negative array shape");
  const std::vector<std::uint8_t> bytes = base64_decode(text);
  const auto expected = static_cast<std::size_t>(rows * cols) * 8;
  require(bytes.size() == expected, ErrorKind::Format,
          "array payload has " + std::to_string(bytes.size() / 8) + " values, shape declares " +
              std::to_string(rows) + " x " + std::to_string(cols));
  Matrix m(rows, cols);
  std::size_t at = 0;
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      std::uint64_t bits = 0;
      for (int b = 0; b < 8; ++b) bits |= std::uint64_t{bytes[at++]} << (8 * b);
      m(i, j) = std::bit_cast<double>(bits);
    }
  }
  return m;
}

namespace {

json array_json(const Matrix& m) { return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", encode_doubles(m)}}; }

json array_json(const Vector& v) {
  const Matrix m = Matrix(v.transpose());
  return array_json(m);
}

Matrix array_from(const json& j, const char* key, Eigen::Index rows, Eigen::Index cols) {
  require(j.contains(key), ErrorKind::Format, std::string("model file lacks array '") + key + "'");
  const json& a = j.at(key);
  const auto r = a.at("rows").get<Eigen::Index>();
  const auto c = a.at("cols").get<Eigen::Index>();
  require(r == rows && c == cols, ErrorKind::Format,
          std::string("array '") + key + "' has shape " + std::to_string(r) + " x " + std::to_string(c) +
              ", expected " + std::to_string(rows) + " x " + std::to_string(cols));
  return decode_doubles(a.at("data").get<std::string>(), r, c);
}

Vector vector_from(const json& j, const char* key, Eigen::Index len) {
  return array_from(j, key, 1, len).row(0).transpose();
}

json kernel_json(const KernelSpec& k) {
  json out{{"kind", std::string(to_string(k.kind))}};
  if (k.sigma) out["sigma"] = *k.sigma;
  return out;
}

KernelSpec kernel_from(const json& j) {
  KernelSpec k;
  k.kind = parse_kernel_kind(j.at("kind").get<std::string>());
  if (j.contains("sigma")) k.sigma = j.at("sigma").get<double>();
  require(k.resolved(), ErrorKind::Format, "model kernel has no bandwidth");
  return k;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

EmbeddingModel embedding_from(const json& j) {
  EmbeddingModel m;
  const auto n = j.at("n").get<Eigen::Index>();
  const auto d = j.at("d").get<Eigen::Index>();
  const auto D = j.at("D").get<Eigen::Index>();
  const std::string mode = j.at("mode").get<std::string>();
  require(mode == "features" || mode == "precomputed_gram", ErrorKind::Format, "unknown model mode '" + mode + "'");
  m.precomputed_gram = mode == "precomputed_gram";
  m.input_kernel = m.precomputed_gram ? KernelSpec::linear() : kernel_from(j.at("input_kernel"));
  m.latent_kernel = kernel_from(j.at("latent_kernel"));

  const json& arrays = j.at("arrays");
  m.alpha = array_from(arrays, "alpha", n, d);
  m.beta = vector_from(arrays, "beta", n);
  if (m.precomputed_gram) {
    m.G_R = array_from(arrays, "G_R", n, n);
  } else {
    m.X_train = array_from(arrays, "X_train", n, D);
  }
  m.embedding = array_from(arrays, "embedding", n, d);

  m.seed = j.at("seed").get<std::uint64_t>();
  const json& opt = j.at("optimizer");
  m.method = parse_optimizer_method(opt.at("method").get<std::string>());
  m.stage_a_loss = opt.at("stage_a_loss").get<double>();
  m.ridge_used = opt.at("ridge").get<double>();
  const std::string path = opt.at("solver_path").get<std::string>();
  require(path == "direct" || path == "pseudoinverse", ErrorKind::Format, "unknown solver path '" + path + "'");
  m.solver_path = path == "direct" ? SolvePath::Direct : SolvePath::Pseudoinverse;
  const auto iterations = opt.at("iterations").get<int>();
  const Vector losses = vector_from(arrays, "loss_trace", iterations + 1);
  for (int it = 0; it <= iterations; ++it) m.trace.push_back({it, losses[it]});
  return m;
}

KpcaModel kpca_from(const json& j) {
  KpcaModel m;
  const auto n = j.at("n").get<Eigen::Index>();
  const auto d = j.at("d").get<Eigen::Index>();
  const auto D = j.at("D").get<Eigen::Index>();
  m.kernel = kernel_from(j.at("kernel"));
  const json& arrays = j.at("arrays");
  m.alpha_k = array_from(arrays, "alpha", n, d);
  m.eigenvalues = vector_from(arrays, "eigenvalues", d);
  m.X_train = array_from(arrays, "X_train", n, D);
  m.column_means = vector_from(arrays, "column_means", n);
  m.grand_mean = array_from(arrays, "grand_mean", 1, 1)(0, 0);
  m.embedding = array_from(arrays, "embedding", n, d);
  return m;
}

}  // namespace

std::string serialize_model(const EmbeddingModel& m) {
  json arrays{{"alpha", array_json(m.alpha)}, {"beta", array_json(m.beta)}, {"embedding", array_json(m.embedding)}};
  if (m.precomputed_gram) {
    arrays["G_R"] = array_json(m.G_R);
  } else {
    arrays["X_train"] = array_json(m.X_train);
  }
  Vector losses(static_cast<Eigen::Index>(m.trace.size()));
  for (std::size_t k = 0; k < m.trace.size(); ++k) losses[static_cast<Eigen::Index>(k)] = m.trace[k].loss;
  arrays["loss_trace"] = array_json(losses);

  json j{{"format_version", kModelFormatVersion},
         {"model_type", "ke"},
         {"mode", m.precomputed_gram ? "precomputed_gram" : "features"},
         {"n", m.n()},
         {"D", m.precomputed_gram ? m.n() : m.input_dim()},
         {"d", m.latent_dim()},
         {"latent_kernel", kernel_json(m.latent_kernel)},
         {"seed", m.seed},
         {"prng", std::string(kPrngName)},
         {"optimizer",
          {{"method", std::string(to_string(m.method))},
           {"iterations", m.iterations()},
           {"initial_loss", m.initial_loss()},
           {"final_loss", m.final_loss()},
           {"stage_a_loss", m.stage_a_loss},
           {"ridge", m.ridge_used},
           {"solver_path", std::string(to_string(m.solver_path))}}},
         {"arrays", arrays}};
  if (!m.precomputed_gram) j["input_kernel"] = kernel_json(m.input_kernel);
  return dump(j);
}

std::string serialize_model(const KpcaModel& m) {
  Matrix grand(1, 1);
  grand(0, 0) = m.grand_mean;
  json j{{"format_version", kModelFormatVersion},
         {"model_type", "kpca"},
         {"n", m.n()},
         {"D", m.X_train.cols()},
         {"d", m.latent_dim()},
         {"kernel", kernel_json(m.kernel)},
         {"arrays",
          {{"alpha", array_json(m.alpha_k)},
           {"eigenvalues", array_json(m.eigenvalues)},
           {"X_train", array_json(m.X_train)},
           {"column_means", array_json(m.column_means)},
           {"grand_mean", array_json(grand)},
           {"embedding", array_json(m.embedding)}}}};
  return dump(j);
}

AnyModel parse_model(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorKind::Format, std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    require(j.is_object() && j.contains("format_version"), ErrorKind::Format, "model file lacks format_version");
    const int version = j.at("format_version").get<int>();
    require(version == kModelFormatVersion, ErrorKind::Format,
            "unsupported model format_version " + std::to_string(version) + " (this build reads version " +
                std::to_string(kModelFormatVersion) + ")");
    const std::string type = j.at("model_type").get<std::string>();
    if (type == "ke") return embedding_from(j);
    if (type == "kpca") return kpca_from(j);
    fail(ErrorKind::Format, "unknown model_type '" + type + "'");
  } catch (const json::exception& e) {
    fail(ErrorKind::Format, std::string("malformed model file: ") + e.what());
  } catch (const Error& e) {
    // Anything wrong inside a model file is a format problem, whatever the parser called it.
    if (e.kind() == ErrorKind::Format) throw;
    fail(ErrorKind::Format, std::string("malformed model file: ") + e.what());
  }
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  require(static_cast<bool>(out), ErrorKind::Io, "write to '" + path.string() + "' failed");
}

}  // namespace

void save_model(const std::filesystem::path& path, const EmbeddingModel& m) { write_text(path, serialize_model(m)); }

void save_model(const std::filesystem::path& path, const KpcaModel& m) { write_text(path, serialize_model(m)); }

AnyModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::Io, "cannot open model file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

}  // namespace ake
