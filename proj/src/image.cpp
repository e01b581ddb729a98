#include "guirepair/image.hpp"

#include <png.h>

#include <cstring>

#include "guirepair/error.hpp"

namespace guirepair {

Image::Image(int w, int h, std::uint32_t fill) : width(w), height(h) {
  rgba.resize(static_cast<std::size_t>(w) * h * 4);
  for (std::size_t i = 0; i < rgba.size(); i += 4) {
    rgba[i] = static_cast<std::uint8_t>(fill >> 24);
    rgba[i + 1] = static_cast<std::uint8_t>(fill >> 16);
    rgba[i + 2] = static_cast<std::uint8_t>(fill >> 8);
    rgba[i + 3] = static_cast<std::uint8_t>(fill);
  }
}

namespace {

std::uint32_t be32(std::string_view b, std::size_t off) {
  return (static_cast<std::uint32_t>(static_cast<unsigned char>(b[off])) << 24) |
         (static_cast<std::uint32_t>(static_cast<unsigned char>(b[off + 1])) << 16) |
         (static_cast<std::uint32_t>(static_cast<unsigned char>(b[off + 2])) << 8) |
         static_cast<std::uint32_t>(static_cast<unsigned char>(b[off + 3]));
}

unsigned u8(std::string_view b, std::size_t off) { return static_cast<unsigned char>(b[off]); }

ImageInfo probe_jpeg(std::string_view b) {
  std::size_t pos = 2;
  while (pos + 4 <= b.size()) {
    if (u8(b, pos) != 0xFF) throw Error(ErrorCode::UnreadableImage, "corrupt JPEG marker stream");
    unsigned marker = u8(b, pos + 1);
    if (marker == 0xFF) {
      ++pos;
      continue;
    }
    if (marker == 0xD8 || (marker >= 0xD0 && marker <= 0xD7) || marker == 0x01) {
      pos += 2;
      continue;
    }
    std::size_t len = (u8(b, pos + 2) << 8) | u8(b, pos + 3);
    bool sof = marker >= 0xC0 && marker <= 0xCF && marker != 0xC4 && marker != 0xC8 && marker != 0xCC;
    if (sof) {
      if (pos + 9 > b.size()) break;
      int h = static_cast<int>((u8(b, pos + 5) << 8) | u8(b, pos + 6));
      int w = static_cast<int>((u8(b, pos + 7) << 8) | u8(b, pos + 8));
      if (w <= 0 || h <= 0) throw Error(ErrorCode::UnreadableImage, "JPEG with zero dimension");
      return {"image/jpeg", w, h};
    }
    pos += 2 + len;
  }
  throw Error(ErrorCode::UnreadableImage, "JPEG without frame header");
}

}  // namespace

ImageInfo probe_image(std::string_view b) {
  if (b.empty()) throw Error(ErrorCode::UnreadableImage, "empty image payload");
  static constexpr unsigned char kPng[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (b.size() >= 8 && std::memcmp(b.data(), kPng, 8) == 0) {
    if (b.size() < 24 || b.substr(12, 4) != "IHDR") throw Error(ErrorCode::UnreadableImage, "PNG without IHDR");
    int w = static_cast<int>(be32(b, 16));
    int h = static_cast<int>(be32(b, 20));
    if (w <= 0 || h <= 0) throw Error(ErrorCode::UnreadableImage, "PNG with zero dimension");
    return {"image/png", w, h};
  }
  if (b.size() >= 3 && u8(b, 0) == 0xFF && u8(b, 1) == 0xD8 && u8(b, 2) == 0xFF) return probe_jpeg(b);
  if (b.size() >= 6 && (b.substr(0, 6) == "GIF87a" || b.substr(0, 6) == "GIF89a")) {
    if (b.size() < 10) throw Error(ErrorCode::UnreadableImage, "truncated GIF header");
    int w = static_cast<int>(u8(b, 6) | (u8(b, 7) << 8));
    int h = static_cast<int>(u8(b, 8) | (u8(b, 9) << 8));
    if (w <= 0 || h <= 0) throw Error(ErrorCode::UnreadableImage, "GIF with zero dimension");
    return {"image/gif", w, h};
  }
  throw Error(ErrorCode::UnsupportedMediaType, "payload is not PNG, JPEG or GIF");
}

Image decode_png(std::string_view bytes) {
  png_image img;
  std::memset(&img, 0, sizeof img);
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&img, bytes.data(), bytes.size()))
    throw Error(ErrorCode::UnreadableImage, std::string("PNG decode: ") + img.message);
  img.format = PNG_FORMAT_RGBA;
  Image out;
  out.width = static_cast<int>(img.width);
  out.height = static_cast<int>(img.height);
  out.rgba.resize(PNG_IMAGE_SIZE(img));
  if (!png_image_finish_read(&img, nullptr, out.rgba.data(), 0, nullptr)) {
    std::string msg = img.message;
    png_image_free(&img);
    throw Error(ErrorCode::UnreadableImage, "PNG decode: " + msg);
  }
  return out;
}

Image load_png(const fs::path& path) { return decode_png(read_file(path)); }

std::string encode_png(const Image& image) {
  png_image img;
  std::memset(&img, 0, sizeof img);
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(image.width);
  img.height = static_cast<png_uint_32>(image.height);
  img.format = PNG_FORMAT_RGBA;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&img, nullptr, &size, 0, image.rgba.data(), 0, nullptr))
    throw Error(ErrorCode::IoError, std::string("PNG encode: ") + img.message);
  std::string out(size, '\0');
  if (!png_image_write_to_memory(&img, out.data(), &size, 0, image.rgba.data(), 0, nullptr))
    throw Error(ErrorCode::IoError, std::string("PNG encode: ") + img.message);
  out.resize(size);
  return out;
}

void save_png(const fs::path& path, const Image& image) { write_file(path, encode_png(image)); }

}  // namespace guirepair
