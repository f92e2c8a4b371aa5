#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace sdfnoc {

/// Dense row-major image, 1 (gray) or 3 (R,G,B interleaved) channels.
struct Image {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::uint32_t channels = 1;
  std::vector<std::uint8_t> pixels;

  Image() = default;
  Image(std::uint32_t w, std::uint32_t h, std::uint32_t c, std::uint8_t fill = 0);

  bool gray() const { return channels == 1; }
  bool rgb() const { return channels == 3; }

  std::uint8_t at(std::uint32_t row, std::uint32_t col, std::uint32_t ch = 0) const {
    return pixels[(static_cast<std::size_t>(row) * width + col) * channels + ch];
  }
  std::uint8_t& at(std::uint32_t row, std::uint32_t col, std::uint32_t ch = 0) {
    return pixels[(static_cast<std::size_t>(row) * width + col) * channels + ch];
  }

  /// Throws OperatorError when dimensions, channel count or buffer size are inconsistent.
  void validate() const;

  friend bool operator==(const Image&, const Image&) = default;
};

/// Placeholder token that carries no data but keeps stream indices aligned.
struct NullToken {
  friend bool operator==(NullToken, NullToken) { return true; }
};

using Token = std::variant<NullToken, std::int64_t, Image>;
using Stream = std::vector<Token>;

inline bool is_null(const Token& t) { return std::holds_alternative<NullToken>(t); }

/// Short human readable rendering ("N", "42", "img(8x8x3)").
std::string describe(const Token& t);

}  // namespace sdfnoc
