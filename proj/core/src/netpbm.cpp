#include "sdfnoc/netpbm.hpp"

#include <cctype>
#include <sstream>

#include "sdfnoc/error.hpp"
#include "sdfnoc/text.hpp"

namespace sdfnoc {

namespace {

// Header and sample tokenizer that skips '#' comments and tracks line numbers.
class PnmScanner {
 public:
  explicit PnmScanner(std::string_view s) : s_(s) {}

  std::string_view next() {
    for (;;) {
      while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) {
        if (s_[pos_] == '\n') ++line_;
        ++pos_;
      }
      if (pos_ < s_.size() && s_[pos_] == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
        continue;
      }
      break;
    }
    if (pos_ >= s_.size()) throw ParseError("unexpected end of PNM data", line_);
    const std::size_t start = pos_;
    while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) && s_[pos_] != '#') ++pos_;
    return s_.substr(start, pos_ - start);
  }

  std::uint64_t number() { return text::parse_uint(next(), line_, 0); }

  bool at_end() {
    while (pos_ < s_.size()) {
      if (s_[pos_] == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(s_[pos_]))) {
        ++pos_;
      } else {
        return false;
      }
    }
    return true;
  }

  std::size_t line() const { return line_; }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

}  // namespace

Image read_pnm(std::string_view data) {
  PnmScanner scan(data);
  const auto magic = scan.next();
  std::uint32_t channels;
  if (magic == "P2") {
    channels = 1;
  } else if (magic == "P3") {
    channels = 3;
  } else {
    throw ParseError("unsupported PNM magic '" + std::string(magic) + "' (expected P2 or P3)", 1);
  }
  const auto width = scan.number();
  const auto height = scan.number();
  if (width == 0 || height == 0 || width > 65536 || height > 65536) {
    throw ParseError("invalid PNM dimensions", scan.line());
  }
  const auto maxval = scan.number();
  if (maxval != 255) throw ParseError("PNM maxval must be 255", scan.line());

  Image img;
  img.width = static_cast<std::uint32_t>(width);
  img.height = static_cast<std::uint32_t>(height);
  img.channels = channels;
  img.pixels.resize(static_cast<std::size_t>(width) * height * channels);
  for (auto& p : img.pixels) {
    const auto v = scan.number();
    if (v > 255) throw ParseError("PNM sample exceeds maxval", scan.line());
    p = static_cast<std::uint8_t>(v);
  }
  if (!scan.at_end()) throw ParseError("trailing data after PNM samples", scan.line());
  return img;
}

std::string write_pnm(const Image& img) {
  img.validate();
  std::ostringstream out;
  out << (img.gray() ? "P2" : "P3") << '\n' << img.width << ' ' << img.height << "\n255\n";
  const std::size_t row = static_cast<std::size_t>(img.width) * img.channels;
  for (std::uint32_t r = 0; r < img.height; ++r) {
    for (std::size_t i = 0; i < row; ++i) {
      if (i) out << ' ';
      out << static_cast<int>(img.pixels[r * row + i]);
    }
    out << '\n';
  }
  return out.str();
}

Image load_pnm(const std::string& path) {
  try {
    return read_pnm(text::read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.detail(), e.line(), e.column());
  }
}

void save_pnm(const std::string& path, const Image& img) { text::write_file(path, write_pnm(img)); }

}  // namespace sdfnoc
