#pragma once

#include "ake/numerics.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace ake {

struct Dataset {
  Matrix X;
  std::optional<std::vector<int>> labels;
  std::optional<Vector> color;  // manifold coordinate (Swiss roll t)
  std::vector<std::string> feature_names;

  Eigen::Index n() const { return X.rows(); }
};

struct CirclesParams {
  int n_per_class = 100;
  std::vector<double> radii{1.0, 2.0, 3.0};
  double noise_std = 0.05;
  std::uint64_t seed = 0;
};

/// Points (r cos t, r sin t) + N(0, noise_std^2) per radius, t ~ U[0, 2 pi).
/// Labels are radius indices; class blocks are contiguous.
Dataset gen_circles(const CirclesParams& p);

struct SwissRollParams {
  int n = 1000;
  double noise_std = 0.0;
  std::uint64_t seed = 0;
};

/// t ~ U[1.5 pi, 4.5 pi], y ~ U[0, 21], point (t cos t, y, t sin t) + noise; color = t.
Dataset gen_swiss_roll(const SwissRollParams& p);

/// A column selected by header name or zero-based index.
using ColumnRef = std::variant<std::string, int>;

struct CsvOptions {
  bool has_header = true;
  std::optional<ColumnRef> label_column;  // parsed as integers, removed from X
  std::optional<ColumnRef> color_column;  // parsed as doubles, removed from X
};

/// Layout guessed from the first non-blank line: a header is present when
/// its first field is not a number; columns named "label" and "color" are
/// selected as label and color columns.
CsvOptions detect_csv_layout(const std::filesystem::path& path);

/// Comma-separated numeric table. Errors carry 1-based line and column numbers.
Dataset load_csv(const std::filesystem::path& path, const CsvOptions& opts = {});

/// Whitespace- or comma-separated 0/1 matrix, no header.
Dataset load_fingerprints(const std::filesystem::path& path);

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

/// Writes X (plus label/color columns when present) with a header line.
/// Feature columns use `feature_names` when set, else x0, x1, ...
void save_csv(const std::filesystem::path& path, const Dataset& ds);

/// Writes a bare matrix with the given column names.
void save_matrix_csv(const std::filesystem::path& path, const Matrix& m, const std::vector<std::string>& names);

}  // namespace ake
