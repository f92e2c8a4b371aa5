#include "sdfnoc/imaging.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>

#include "sdfnoc/error.hpp"

namespace sdfnoc {

namespace {

const Image& require_gray(const Image& img, const char* op) {
  img.validate();
  if (!img.gray()) throw OperatorError(std::string(op) + " expects a gray image");
  return img;
}

const Image& require_rgb(const Image& img, const char* op) {
  img.validate();
  if (!img.rgb()) throw OperatorError(std::string(op) + " expects an RGB image");
  return img;
}

const Image& image_arg(const Token& t, const char* op) {
  const auto* img = std::get_if<Image>(&t);
  if (!img) throw OperatorError(std::string(op) + " applied to a non-image token (" + describe(t) + ")");
  return *img;
}

std::int64_t scalar_arg(const Token& t, const char* op) {
  const auto* v = std::get_if<std::int64_t>(&t);
  if (!v) throw OperatorError(std::string(op) + " applied to a non-scalar token (" + describe(t) + ")");
  return *v;
}

// Two's-complement wrap instead of signed overflow.
std::int64_t wrap_add(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) + static_cast<std::uint64_t>(b));
}
std::int64_t wrap_mul(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(b));
}

// Edge-replicated pixel fetch.
int px(const Image& img, int r, int c) {
  r = std::clamp(r, 0, static_cast<int>(img.height) - 1);
  c = std::clamp(c, 0, static_cast<int>(img.width) - 1);
  return img.at(static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(c));
}

}  // namespace

Image gauss3(const Image& img) {
  require_gray(img, "gauss3");
  static constexpr int kWeights[3][3] = {{1, 2, 1}, {2, 4, 2}, {1, 2, 1}};
  Image out(img.width, img.height, 1);
  for (int r = 0; r < static_cast<int>(img.height); ++r) {
    for (int c = 0; c < static_cast<int>(img.width); ++c) {
      int sum = 0;
      for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) sum += kWeights[dr + 1][dc + 1] * px(img, r + dr, c + dc);
      }
      out.at(r, c) = static_cast<std::uint8_t>((sum + 8) / 16);
    }
  }
  return out;
}

GrayWorldResult grayworld_checked(const Image& img) {
  require_rgb(img, "grayworld");
  std::array<std::uint64_t, 3> sums{};
  const std::size_t npix = static_cast<std::size_t>(img.width) * img.height;
  for (std::size_t i = 0; i < npix; ++i) {
    for (int ch = 0; ch < 3; ++ch) sums[ch] += img.pixels[i * 3 + ch];
  }
  const std::uint64_t total = sums[0] + sums[1] + sums[2];

  // gain_c = (mean_R + mean_G + mean_B) / (3 mean_c) = total / (3 sum_c); Q16, floored.
  GrayWorldResult res{Image(img.width, img.height, 3), {}};
  std::array<std::uint64_t, 3> gain{};
  for (int ch = 0; ch < 3; ++ch) {
    if (sums[ch] == 0) {
      res.zero_mean[ch] = true;
      gain[ch] = 1u << 16;
    } else {
      gain[ch] = (total << 16) / (3 * sums[ch]);
    }
  }
  for (std::size_t i = 0; i < npix * 3; ++i) {
    const std::uint64_t v = (img.pixels[i] * gain[i % 3] + (1u << 15)) >> 16;
    res.image.pixels[i] = static_cast<std::uint8_t>(std::min<std::uint64_t>(v, 255));
  }
  return res;
}

Image hist_eq(const Image& img) {
  require_gray(img, "hist_eq");
  std::array<std::uint64_t, 256> cdf{};
  for (auto p : img.pixels) ++cdf[p];
  for (int v = 1; v < 256; ++v) cdf[v] += cdf[v - 1];
  const std::uint64_t npix = img.pixels.size();
  std::uint64_t cdf_min = 0;
  for (auto c : cdf) {
    if (c != 0) {
      cdf_min = c;
      break;
    }
  }
  if (npix == cdf_min) return img;

  Image out(img.width, img.height, 1);
  for (std::size_t i = 0; i < img.pixels.size(); ++i) {
    out.pixels[i] = static_cast<std::uint8_t>((cdf[img.pixels[i]] - cdf_min) * 255 / (npix - cdf_min));
  }
  return out;
}

Image hist_eq_channels(const Image& img) {
  img.validate();
  if (img.gray()) return hist_eq(img);
  auto planes = split_rgb(img);
  return merge_rgb(hist_eq(planes[0]), hist_eq(planes[1]), hist_eq(planes[2]));
}

Image canny(const Image& img, const CannyOptions& options) {
  require_gray(img, "canny");
  if (img.width < 3 || img.height < 3) throw OperatorError("canny needs an image of at least 3x3");
  const int h = static_cast<int>(img.height);
  const int w = static_cast<int>(img.width);
  const auto idx = [w](int r, int c) { return static_cast<std::size_t>(r) * w + c; };

  std::vector<int> gx(static_cast<std::size_t>(w) * h), gy(gx.size()), mag(gx.size());
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const int x = (px(img, r - 1, c + 1) + 2 * px(img, r, c + 1) + px(img, r + 1, c + 1)) -
                    (px(img, r - 1, c - 1) + 2 * px(img, r, c - 1) + px(img, r + 1, c - 1));
      const int y = (px(img, r + 1, c - 1) + 2 * px(img, r + 1, c) + px(img, r + 1, c + 1)) -
                    (px(img, r - 1, c - 1) + 2 * px(img, r - 1, c) + px(img, r - 1, c + 1));
      gx[idx(r, c)] = x;
      gy[idx(r, c)] = y;
      mag[idx(r, c)] = std::abs(x) + std::abs(y);
    }
  }

  // Out-of-image neighbours count as zero magnitude.
  const auto mag_at = [&](int r, int c) { return (r < 0 || c < 0 || r >= h || c >= w) ? 0 : mag[idx(r, c)]; };

  // Non-maximum suppression. A pixel survives when it is strictly above the
  // neighbour on the negative side of the gradient and not below the other,
  // which keeps plateaus one pixel wide.
  std::vector<int> thin(mag.size(), 0);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const int m = mag[idx(r, c)];
      if (m == 0) continue;
      const std::int64_t ax = std::abs(gx[idx(r, c)]);
      const std::int64_t ay = std::abs(gy[idx(r, c)]);
      int before, after;
      if (ay * 100000 <= ax * 41421) {  // within 22.5 deg of horizontal
        before = mag_at(r, c - 1);
        after = mag_at(r, c + 1);
      } else if (ax * 100000 <= ay * 41421) {
        before = mag_at(r - 1, c);
        after = mag_at(r + 1, c);
      } else if ((gx[idx(r, c)] > 0) == (gy[idx(r, c)] > 0)) {
        before = mag_at(r - 1, c - 1);
        after = mag_at(r + 1, c + 1);
      } else {
        before = mag_at(r - 1, c + 1);
        after = mag_at(r + 1, c - 1);
      }
      if (m > before && m >= after) thin[idx(r, c)] = m;
    }
  }

  Image out(img.width, img.height, 1);
  std::deque<std::pair<int, int>> work;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      if (thin[idx(r, c)] >= options.high_threshold) {
        out.at(r, c) = 255;
        work.emplace_back(r, c);
      }
    }
  }
  while (!work.empty()) {
    auto [r, c] = work.front();
    work.pop_front();
    for (int dr = -1; dr <= 1; ++dr) {
      for (int dc = -1; dc <= 1; ++dc) {
        const int rr = r + dr, cc = c + dc;
        if (rr < 0 || cc < 0 || rr >= h || cc >= w || out.at(rr, cc) != 0) continue;
        if (thin[idx(rr, cc)] >= options.low_threshold) {
          out.at(rr, cc) = 255;
          work.emplace_back(rr, cc);
        }
      }
    }
  }
  return out;
}

std::array<Image, 3> split_rgb(const Image& img) {
  require_rgb(img, "split_rgb");
  std::array<Image, 3> planes{Image(img.width, img.height, 1), Image(img.width, img.height, 1),
                              Image(img.width, img.height, 1)};
  const std::size_t npix = static_cast<std::size_t>(img.width) * img.height;
  for (std::size_t i = 0; i < npix; ++i) {
    for (int ch = 0; ch < 3; ++ch) planes[ch].pixels[i] = img.pixels[i * 3 + ch];
  }
  return planes;
}

Image merge_rgb(const Image& r, const Image& g, const Image& b) {
  for (const Image* p : {&r, &g, &b}) require_gray(*p, "merge_rgb");
  if (r.width != g.width || r.width != b.width || r.height != g.height || r.height != b.height) {
    throw OperatorError("merge_rgb: channel planes have mismatched dimensions");
  }
  Image out(r.width, r.height, 3);
  for (std::size_t i = 0; i < r.pixels.size(); ++i) {
    out.pixels[i * 3 + 0] = r.pixels[i];
    out.pixels[i * 3 + 1] = g.pixels[i];
    out.pixels[i * 3 + 2] = b.pixels[i];
  }
  return out;
}

OperatorRegistry standard_registry(const CannyOptions& canny_options) {
  OperatorRegistry reg;
  const auto unary_image = [&reg](std::string name, auto fn) {
    reg.add(name, {1, 1, [fn, name](std::span<const Token> in) -> std::vector<Token> {
                     return {fn(image_arg(in[0], name.c_str()))};
                   }});
  };
  unary_image("GAUSS3", [](const Image& i) { return gauss3(i); });
  unary_image("GRAYWORLD", [](const Image& i) { return grayworld(i); });
  unary_image("HISTEQ", [](const Image& i) { return hist_eq_channels(i); });
  unary_image("CANNY", [canny_options](const Image& i) { return canny(i, canny_options); });

  reg.add("SPLIT_RGB", {1, 3, [](std::span<const Token> in) -> std::vector<Token> {
                          auto planes = split_rgb(image_arg(in[0], "SPLIT_RGB"));
                          return {std::move(planes[0]), std::move(planes[1]), std::move(planes[2])};
                        }});
  reg.add("MERGE_RGB", {3, 1, [](std::span<const Token> in) -> std::vector<Token> {
                          return {merge_rgb(image_arg(in[0], "MERGE_RGB"), image_arg(in[1], "MERGE_RGB"),
                                            image_arg(in[2], "MERGE_RGB"))};
                        }});
  reg.add("ID", {1, 1, [](std::span<const Token> in) -> std::vector<Token> { return {in[0]}; }});
  reg.add("CONST", {0, 1, [](std::span<const Token>) -> std::vector<Token> { return {std::int64_t{0}}; }, false});
  reg.add("ADDER", {2, 1, [](std::span<const Token> in) -> std::vector<Token> {
                      return {wrap_add(scalar_arg(in[0], "ADDER"), scalar_arg(in[1], "ADDER"))};
                    }});
  reg.add("MUL", {2, 1, [](std::span<const Token> in) -> std::vector<Token> {
                    return {wrap_mul(scalar_arg(in[0], "MUL"), scalar_arg(in[1], "MUL"))};
                  }});
  return reg;
}

}  // namespace sdfnoc
