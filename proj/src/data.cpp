#include "ake/data.hpp"

#include "ake/error.hpp"
#include "ake/random.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <string_view>

namespace ake {

Dataset gen_circles(const CirclesParams& p) {
  require(p.n_per_class >= 1, ErrorKind::InvalidArgument, "circles: n_per_class must be >= 1");
  require(!p.radii.empty(), ErrorKind::InvalidArgument, "InvalidRadii: at least one radius is required");
  require(p.noise_std >= 0.0 && std::isfinite(p.noise_std), ErrorKind::InvalidArgument,
          "circles: noise_std must be >= 0");
  std::set<double> seen;
  for (double r : p.radii) {
    require(std::isfinite(r) && r > 0.0, ErrorKind::InvalidArgument, "InvalidRadii: radii must be strictly positive");
    require(seen.insert(r).second, ErrorKind::InvalidArgument, "InvalidRadii: radii must be distinct");
  }

  const auto classes = static_cast<Eigen::Index>(p.radii.size());
  const Eigen::Index per = p.n_per_class;
  Dataset ds;
  ds.X.resize(classes * per, 2);
  ds.labels.emplace();
  ds.labels->reserve(static_cast<std::size_t>(classes * per));
  ds.feature_names = {"x0", "x1"};

  for (Eigen::Index c = 0; c < classes; ++c) {
    const double r = p.radii[static_cast<std::size_t>(c)];
    Rng angle(p.seed, Stream::CircleAngle, static_cast<std::uint64_t>(c));
    Rng noise(p.seed, Stream::CircleNoise, static_cast<std::uint64_t>(c));
    for (Eigen::Index k = 0; k < per; ++k) {
      const double t = angle.uniform(0.0, 2.0 * std::numbers::pi);
      double x = r * std::cos(t);
      double y = r * std::sin(t);
      if (p.noise_std > 0.0) {
        x += p.noise_std * noise.normal();
        y += p.noise_std * noise.normal();
      }
      ds.X(c * per + k, 0) = x;
      ds.X(c * per + k, 1) = y;
      ds.labels->push_back(static_cast<int>(c));
    }
  }
  return ds;
}

Dataset gen_swiss_roll(const SwissRollParams& p) {
  require(p.n >= 1, ErrorKind::InvalidArgument, "swissroll: n must be >= 1");
  require(p.noise_std >= 0.0 && std::isfinite(p.noise_std), ErrorKind::InvalidArgument,
          "swissroll: noise_std must be >= 0");
  Rng rt(p.seed, Stream::RollT);
  Rng ry(p.seed, Stream::RollY);
  Rng rn(p.seed, Stream::RollNoise);

  Dataset ds;
  ds.X.resize(p.n, 3);
  ds.color = Vector(p.n);
  ds.feature_names = {"x0", "x1", "x2"};
  for (Eigen::Index i = 0; i < p.n; ++i) {
    const double t = rt.uniform(1.5 * std::numbers::pi, 4.5 * std::numbers::pi);
    const double y = ry.uniform(0.0, 21.0);
    ds.X(i, 0) = t * std::cos(t);
    ds.X(i, 1) = y;
    ds.X(i, 2) = t * std::sin(t);
    if (p.noise_std > 0.0) {
      for (int k = 0; k < 3; ++k) ds.X(i, k) += p.noise_std * rn.normal();
    }
    (*ds.color)[i] = t;
  }
  return ds;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string where(const std::filesystem::path& path, std::size_t line, std::size_t col) {
  return path.string() + ":" + std::to_string(line) + ", column " + std::to_string(col);
}

double parse_double(std::string_view tok, const std::filesystem::path& path, std::size_t line, std::size_t col) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || res.ec != std::errc() || res.ptr != tok.data() + tok.size() || !std::isfinite(v)) {
    fail(ErrorKind::ParseError, "ParseError at " + where(path, line, col) + ": '" + std::string(tok) +
                                    "' is not a finite number");
  }
  return v;
}

int parse_int(std::string_view tok, const std::filesystem::path& path, std::size_t line, std::size_t col) {
  int v = 0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
    // Accept integral decimals such as "2.0".
    const double d = parse_double(tok, path, line, col);
    if (d != std::floor(d) || std::abs(d) > 1e9) {
      fail(ErrorKind::ParseError, "ParseError at " + where(path, line, col) + ": label '" + std::string(tok) +
                                      "' is not an integer");
    }
    return static_cast<int>(d);
  }
  return v;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open '" + path.string() + "' for reading");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  if (in.bad()) fail(ErrorKind::Io, "read error on '" + path.string() + "'");
  return lines;
}

bool blank(std::string_view s) { return trim(s).empty(); }

std::optional<std::size_t> find_column(const std::optional<ColumnRef>& ref, const std::vector<std::string>& names,
                                       std::size_t ncols, std::string_view role) {
  if (!ref) return std::nullopt;
  if (const int* idx = std::get_if<int>(&*ref)) {
    require(*idx >= 0 && static_cast<std::size_t>(*idx) < ncols, ErrorKind::InvalidArgument,
            std::string(role) + " column index " + std::to_string(*idx) + " out of range (" + std::to_string(ncols) +
                " columns)");
    return static_cast<std::size_t>(*idx);
  }
  const auto& name = std::get<std::string>(*ref);
  const auto it = std::find(names.begin(), names.end(), name);
  require(it != names.end(), ErrorKind::InvalidArgument, std::string(role) + " column '" + name + "' not found");
  return static_cast<std::size_t>(it - names.begin());
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& opts) {
  const std::vector<std::string> lines = read_lines(path);

  std::size_t first = 0;
  while (first < lines.size() && blank(lines[first])) ++first;
  if (first == lines.size()) fail(ErrorKind::InvalidArgument, "EmptyFile: '" + path.string() + "' has no data");

  std::vector<std::string> names;
  std::size_t ncols = 0;
  std::size_t data_start = first;
  if (opts.has_header) {
    for (auto tok : split_commas(lines[first])) names.emplace_back(tok);
    ncols = names.size();
    data_start = first + 1;
  } else {
    ncols = split_commas(lines[first]).size();
    for (std::size_t j = 0; j < ncols; ++j) names.push_back("x" + std::to_string(j));
  }

  const auto label_col = find_column(opts.label_column, names, ncols, "label");
  const auto color_col = find_column(opts.color_column, names, ncols, "color");
  require(!(label_col && color_col && *label_col == *color_col), ErrorKind::InvalidArgument,
          "label and color columns must differ");

  std::vector<std::size_t> feature_cols;
  for (std::size_t j = 0; j < ncols; ++j) {
    if (j != label_col && j != color_col) feature_cols.push_back(j);
  }

  std::vector<double> values;
  std::vector<int> labels;
  std::vector<double> colors;
  std::size_t rows = 0;
  for (std::size_t li = data_start; li < lines.size(); ++li) {
    if (blank(lines[li])) continue;
    const auto toks = split_commas(lines[li]);
    const std::size_t lineno = li + 1;
    if (toks.size() != ncols) {
      fail(ErrorKind::ParseError, "RaggedRows at " + path.string() + ":" + std::to_string(lineno) + ": expected " +
                                      std::to_string(ncols) + " fields, found " + std::to_string(toks.size()));
    }
    for (std::size_t j : feature_cols) values.push_back(parse_double(toks[j], path, lineno, j + 1));
    if (label_col) labels.push_back(parse_int(toks[*label_col], path, lineno, *label_col + 1));
    if (color_col) colors.push_back(parse_double(toks[*color_col], path, lineno, *color_col + 1));
    ++rows;
  }
  if (rows == 0) fail(ErrorKind::InvalidArgument, "EmptyFile: '" + path.string() + "' has no data rows");

  Dataset ds;
  const auto cols = static_cast<Eigen::Index>(feature_cols.size());
  ds.X = Eigen::Map<const Matrix>(values.data(), static_cast<Eigen::Index>(rows), cols);
  for (std::size_t j : feature_cols) ds.feature_names.push_back(names[j]);
  if (label_col) ds.labels = std::move(labels);
  if (color_col) ds.color = Eigen::Map<const Vector>(colors.data(), static_cast<Eigen::Index>(colors.size()));
  return ds;
}

CsvOptions detect_csv_layout(const std::filesystem::path& path) {
  const std::vector<std::string> lines = read_lines(path);
  std::size_t first = 0;
  while (first < lines.size() && blank(lines[first])) ++first;
  CsvOptions opts;
  if (first == lines.size()) return opts;
  const auto toks = split_commas(lines[first]);
  const std::string_view head = trim(toks.front());
  double probe = 0.0;
  const auto [ptr, ec] = std::from_chars(head.data(), head.data() + head.size(), probe);
  opts.has_header = ec != std::errc() || ptr != head.data() + head.size();
  if (!opts.has_header) return opts;
  for (auto tok : toks) {
    const std::string_view name = trim(tok);
    if (name == "label") opts.label_column = std::string(name);
    if (name == "color") opts.color_column = std::string(name);
  }
  return opts;
}

Dataset load_fingerprints(const std::filesystem::path& path) {
  const std::vector<std::string> lines = read_lines(path);
  std::vector<double> values;
  std::size_t ncols = 0;
  std::size_t rows = 0;
  for (std::size_t li = 0; li < lines.size(); ++li) {
    std::string line = lines[li];
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    std::string tok;
    std::size_t col = 0;
    while (ss >> tok) {
      ++col;
      if (tok != "0" && tok != "1") {
        fail(ErrorKind::InvalidArgument, "NonBinaryEntry at " + where(path, li + 1, col) + ": '" + tok + "'");
      }
      values.push_back(tok == "1" ? 1.0 : 0.0);
    }
    if (col == 0) continue;
    if (rows == 0) ncols = col;
    if (col != ncols) {
      fail(ErrorKind::ParseError, "RaggedRows at " + path.string() + ":" + std::to_string(li + 1) + ": expected " +
                                      std::to_string(ncols) + " entries, found " + std::to_string(col));
    }
    ++rows;
  }
  if (rows == 0) fail(ErrorKind::InvalidArgument, "EmptyFile: '" + path.string() + "' has no data");
  Dataset ds;
  ds.X = Eigen::Map<const Matrix>(values.data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(ncols));
  for (std::size_t j = 0; j < ncols; ++j) ds.feature_names.push_back("b" + std::to_string(j));
  return ds;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) fail(ErrorKind::Io, "write error on '" + path.string() + "'");
}

}  // namespace

void save_csv(const std::filesystem::path& path, const Dataset& ds) {
  const Eigen::Index n = ds.X.rows();
  require(!ds.labels || static_cast<Eigen::Index>(ds.labels->size()) == n, ErrorKind::DimensionMismatch,
          "label vector length does not match row count");
  require(!ds.color || ds.color->size() == n, ErrorKind::DimensionMismatch,
          "color vector length does not match row count");

  std::ofstream out = open_out(path);
  std::vector<std::string> fields;
  for (Eigen::Index j = 0; j < ds.X.cols(); ++j) {
    fields.push_back(static_cast<std::size_t>(j) < ds.feature_names.size() ? ds.feature_names[static_cast<std::size_t>(j)]
                                                                           : "x" + std::to_string(j));
  }
  if (ds.labels) fields.emplace_back("label");
  if (ds.color) fields.emplace_back("color");
  const auto write_row = [&out](const std::vector<std::string>& f) {
    for (std::size_t k = 0; k < f.size(); ++k) out << (k > 0 ? "," : "") << f[k];
    out << '\n';
  };
  write_row(fields);

  for (Eigen::Index i = 0; i < n; ++i) {
    fields.clear();
    for (Eigen::Index j = 0; j < ds.X.cols(); ++j) fields.push_back(format_double(ds.X(i, j)));
    if (ds.labels) fields.push_back(std::to_string((*ds.labels)[static_cast<std::size_t>(i)]));
    if (ds.color) fields.push_back(format_double((*ds.color)[i]));
    write_row(fields);
  }
  finish(out, path);
}

void save_matrix_csv(const std::filesystem::path& path, const Matrix& m, const std::vector<std::string>& names) {
  Dataset ds;
  ds.X = m;
  ds.feature_names = names;
  save_csv(path, ds);
}

}  // namespace ake
