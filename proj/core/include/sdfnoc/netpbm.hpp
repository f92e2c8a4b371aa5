#pragma once

#include <string>
#include <string_view>

#include "sdfnoc/token.hpp"

namespace sdfnoc {

/// Reads ASCII PGM (P2) or PPM (P3) with maxval 255. Throws ParseError.
Image read_pnm(std::string_view text);

/// Canonical ASCII output: P2 for gray, P3 for RGB, one image row per line,
/// single spaces between samples, trailing newline.
std::string write_pnm(const Image& img);

Image load_pnm(const std::string& path);
void save_pnm(const std::string& path, const Image& img);

}  // namespace sdfnoc
