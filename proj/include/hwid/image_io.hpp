#pragma once

#include <png.h>

#include <cctype>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "hwid/error.hpp"
#include "hwid/image.hpp"

// PNG decode/encode through libpng's simplified API, plus binary PGM (P5)
// decoding. Color PNGs are converted to gray on read.

namespace hwid {

class ImageIoError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline std::vector<unsigned char> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ImageIoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline bool is_png(const std::vector<unsigned char>& bytes) {
  static constexpr unsigned char sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  return bytes.size() >= 8 && std::memcmp(bytes.data(), sig, 8) == 0;
}

inline GrayImage decode_pgm(const std::vector<unsigned char>& bytes, const std::string& name) {
  std::size_t pos = 2;
  auto next_token = [&]() -> long {
    for (;;) {
      while (pos < bytes.size() && std::isspace(bytes[pos])) ++pos;
      if (pos < bytes.size() && bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
        continue;
      }
      break;
    }
    long v = 0;
    const std::size_t start = pos;
    while (pos < bytes.size() && std::isdigit(bytes[pos])) {
      v = v * 10 + (bytes[pos] - '0');
      if (v > 1'000'000) throw ImageIoError(name + ": PGM header value out of range");
      ++pos;
    }
    if (pos == start) throw ImageIoError(name + ": malformed PGM header");
    return v;
  };
  const long w = next_token();
  const long h = next_token();
  const long maxval = next_token();
  if (w < 1 || h < 1) throw ImageIoError(name + ": PGM has zero size");
  if (maxval < 1 || maxval > 255) throw ImageIoError(name + ": only 8-bit PGM is supported");
  if (pos >= bytes.size() || !std::isspace(bytes[pos])) {
    throw ImageIoError(name + ": malformed PGM header");
  }
  ++pos;
  const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  if (bytes.size() - pos < n) throw ImageIoError(name + ": truncated PGM data");
  GrayImage img(static_cast<int>(w), static_cast<int>(h));
  auto px = img.pixels();
  for (std::size_t i = 0; i < n; ++i) {
    const unsigned v = bytes[pos + i];
    if (v > static_cast<unsigned>(maxval)) throw ImageIoError(name + ": PGM sample exceeds maxval");
    px[i] = static_cast<std::uint8_t>(maxval == 255 ? v : (v * 255 + maxval / 2) / maxval);
  }
  return img;
}

inline GrayImage decode_png(const std::vector<unsigned char>& bytes, const std::string& name) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw ImageIoError(name + ": " + msg);
  }
  image.format = PNG_FORMAT_GRAY;
  if (image.width < 1 || image.height < 1 || image.width > (1u << 16) || image.height > (1u << 16)) {
    png_image_free(&image);
    throw ImageIoError(name + ": unsupported PNG dimensions");
  }
  std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw ImageIoError(name + ": " + msg);
  }
  return GrayImage(static_cast<int>(image.width), static_cast<int>(image.height), std::move(buffer));
}

}  // namespace detail

/// Decodes PNG or binary PGM (P5) from memory, detected by signature.
inline GrayImage decode_image(const std::vector<unsigned char>& bytes,
                              const std::string& name = "<memory>") {
  if (detail::is_png(bytes)) return detail::decode_png(bytes, name);
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5') return detail::decode_pgm(bytes, name);
  throw ImageIoError(name + ": not a PNG or binary PGM file");
}

inline GrayImage read_image(const std::filesystem::path& path) {
  return decode_image(detail::read_file_bytes(path), path.string());
}

inline std::vector<unsigned char> encode_png(const GrayImage& img) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width());
  image.height = static_cast<png_uint_32>(img.height());
  image.format = PNG_FORMAT_GRAY;
  image.flags = PNG_IMAGE_FLAG_FAST;
  // One pass into a worst-case buffer; the size-query pass would compress twice.
  png_alloc_size_t size = PNG_IMAGE_PNG_SIZE_MAX(image);
  std::vector<unsigned char> out(size);
  if (!png_image_write_to_memory(&image, out.data(), &size, 0, img.pixels().data(), 0, nullptr)) {
    throw ImageIoError(std::string("png encode: ") + image.message);
  }
  out.resize(size);
  return out;
}

inline void write_png(const std::filesystem::path& path, const GrayImage& img) {
  const auto bytes = encode_png(img);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ImageIoError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw ImageIoError("write failed for " + path.string());
}

}  // namespace hwid
