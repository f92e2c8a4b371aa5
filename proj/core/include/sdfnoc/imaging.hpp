#pragma once

#include <array>

#include "sdfnoc/registry.hpp"
#include "sdfnoc/token.hpp"

namespace sdfnoc {

/// 3x3 binomial blur, (sum + 8) / 16, edge-replicated border. Gray only.
Image gauss3(const Image& img);

struct GrayWorldResult {
  Image image;
  // Channels whose mean was zero; those pass through with gain 1.
  std::array<bool, 3> zero_mean{};
};

/// Gray-world color constancy with Q16 per-channel gains. RGB only.
GrayWorldResult grayworld_checked(const Image& img);
inline Image grayworld(const Image& img) { return grayworld_checked(img).image; }

/// CDF histogram equalization of a gray image. Constant images are returned unchanged.
Image hist_eq(const Image& img);
/// hist_eq on a gray image, or independently on each channel of an RGB image.
Image hist_eq_channels(const Image& img);

struct CannyOptions {
  int low_threshold = 40;
  int high_threshold = 100;
};

/// Sobel + non-maximum suppression + hysteresis; output is 0/255. Gray, at least 3x3.
Image canny(const Image& img, const CannyOptions& options = {});

std::array<Image, 3> split_rgb(const Image& img);
Image merge_rgb(const Image& r, const Image& g, const Image& b);

/// GAUSS3, GRAYWORLD, HISTEQ, CANNY, SPLIT_RGB, MERGE_RGB, plus the scalar
/// helpers ID, CONST (emits 0), ADDER and MUL.
OperatorRegistry standard_registry(const CannyOptions& canny_options = {});

}  // namespace sdfnoc
