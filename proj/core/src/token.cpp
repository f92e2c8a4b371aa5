#include "sdfnoc/token.hpp"

#include "sdfnoc/error.hpp"

namespace sdfnoc {

Image::Image(std::uint32_t w, std::uint32_t h, std::uint32_t c, std::uint8_t fill)
    : width(w), height(h), channels(c), pixels(static_cast<std::size_t>(w) * h * c, fill) {
  validate();
}

void Image::validate() const {
  if (width == 0 || height == 0) throw OperatorError("image dimensions must be at least 1x1");
  if (channels != 1 && channels != 3) throw OperatorError("image must have 1 or 3 channels");
  if (pixels.size() != static_cast<std::size_t>(width) * height * channels)
    throw OperatorError("image buffer size does not match its dimensions");
}

std::string describe(const Token& t) {
  if (is_null(t)) return "N";
  if (const auto* v = std::get_if<std::int64_t>(&t)) return std::to_string(*v);
  const auto& img = std::get<Image>(t);
  return "img(" + std::to_string(img.width) + "x" + std::to_string(img.height) + "x" +
         std::to_string(img.channels) + ")";
}

}  // namespace sdfnoc
