#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "guirepair/util.hpp"

namespace guirepair {

/// 8-bit RGBA raster, row-major.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgba;

  Image() = default;
  Image(int w, int h, std::uint32_t fill = 0xffffffffu);

  std::uint8_t* pixel(int x, int y) { return rgba.data() + 4 * (static_cast<std::size_t>(y) * width + x); }
  const std::uint8_t* pixel(int x, int y) const {
    return rgba.data() + 4 * (static_cast<std::size_t>(y) * width + x);
  }
  friend bool operator==(const Image&, const Image&) = default;
};

struct ImageInfo {
  std::string media_type;  // image/png, image/jpeg, image/gif
  int width = 0;
  int height = 0;
};

/// Sniffs the container and reads dimensions from the header.
/// Throws UnsupportedMediaType for unknown formats and UnreadableImage for corrupt headers.
ImageInfo probe_image(std::string_view bytes);

Image decode_png(std::string_view bytes);
Image load_png(const fs::path& path);
std::string encode_png(const Image& image);
void save_png(const fs::path& path, const Image& image);

}  // namespace guirepair
