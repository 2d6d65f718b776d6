#pragma once

// Model files: one JSON document. Numeric arrays are base64 of little-endian
// float64 values in row-major order, next to explicit shape fields, so a
// load/save cycle reproduces the file byte for byte.

#include "ake/baselines.hpp"
#include "ake/embedding.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ake {

inline constexpr int kModelFormatVersion = 1;

std::string base64_encode(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> base64_decode(std::string_view text);

/// Row-major little-endian float64 payload of m, base64 encoded.
std::string encode_doubles(const Matrix& m);
/// Inverse of encode_doubles; Format error when the payload is not rows*cols values.
Matrix decode_doubles(std::string_view text, Eigen::Index rows, Eigen::Index cols);

using AnyModel = std::variant<EmbeddingModel, KpcaModel>;

std::string serialize_model(const EmbeddingModel& m);
std::string serialize_model(const KpcaModel& m);
AnyModel parse_model(std::string_view text);

void save_model(const std::filesystem::path& path, const EmbeddingModel& m);
void save_model(const std::filesystem::path& path, const KpcaModel& m);
AnyModel load_model(const std::filesystem::path& path);

}  // namespace ake
