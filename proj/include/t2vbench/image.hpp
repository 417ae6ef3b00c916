#pragma once

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <openssl/evp.h>
#include <png.h>

#include "t2vbench/error.hpp"

namespace t2vbench {

/// 8-bit interleaved raster (1 = gray, 3 = RGB).
struct Image {
  int width = 0;
  int height = 0;
  int channels = 3;
  std::vector<std::uint8_t> pixels;

  Image() = default;
  Image(int w, int h, int c = 3)
      : width(w), height(h), channels(c), pixels(static_cast<std::size_t>(w) * h * c, 0) {}

  std::uint8_t* at(int x, int y) { return pixels.data() + (static_cast<std::size_t>(y) * width + x) * channels; }
  const std::uint8_t* at(int x, int y) const {
    return pixels.data() + (static_cast<std::size_t>(y) * width + x) * channels;
  }
  std::size_t row_bytes() const { return static_cast<std::size_t>(width) * channels; }

  bool operator==(const Image&) const = default;
};

// ---------------------------------------------------------------------------
// Base64 (wire protocol payloads).

inline std::string base64_encode(std::span<const std::uint8_t> bytes) {
  if (bytes.empty()) return {};
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), bytes.data(),
                                static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

inline std::vector<std::uint8_t> base64_decode(std::string_view text) {
  std::string clean;
  clean.reserve(text.size());
  for (char c : text)
    if (c != '\n' && c != '\r' && c != ' ') clean.push_back(c);
  if (clean.empty()) return {};
  if (clean.size() % 4 != 0) throw protocol_error("base64 payload length is not a multiple of 4");
  std::vector<std::uint8_t> out(clean.size() / 4 * 3);
  const int n = EVP_DecodeBlock(out.data(), reinterpret_cast<const unsigned char*>(clean.data()),
                                static_cast<int>(clean.size()));
  if (n < 0) throw protocol_error("invalid base64 payload");
  // EVP_DecodeBlock keeps the bytes produced by '=' padding.
  std::size_t pad = 0;
  if (clean.back() == '=') ++pad;
  if (clean.size() > 1 && clean[clean.size() - 2] == '=') ++pad;
  out.resize(static_cast<std::size_t>(n) - pad);
  return out;
}

// ---------------------------------------------------------------------------
// PNG via libpng. 8-bit gray/RGB images and 16-bit gray rasters (depth).

namespace detail {

struct png_read_guard {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~png_read_guard() { png_destroy_read_struct(&png, info ? &info : nullptr, nullptr); }
};

struct png_write_guard {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~png_write_guard() { png_destroy_write_struct(&png, info ? &info : nullptr); }
};

struct mem_reader {
  std::span<const std::uint8_t> data;
  std::size_t pos = 0;
};

inline void png_mem_read(png_structp png, png_bytep out, png_size_t len) {
  auto* r = static_cast<mem_reader*>(png_get_io_ptr(png));
  if (r->pos + len > r->data.size()) png_error(png, "truncated png");
  std::memcpy(out, r->data.data() + r->pos, len);
  r->pos += len;
}

inline void png_mem_write(png_structp png, png_bytep in, png_size_t len) {
  auto* v = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  v->insert(v->end(), in, in + len);
}

inline void png_mem_flush(png_structp) {}

inline void png_throw(png_structp, png_const_charp msg) { throw io_error(std::string("png: ") + msg); }
inline void png_warn(png_structp, png_const_charp) {}

struct png_raster {
  int width = 0, height = 0, channels = 0, bit_depth = 8;
  std::vector<std::uint8_t> rows;  // big-endian samples for 16-bit
};

inline png_raster decode_png_raw(std::span<const std::uint8_t> bytes, bool keep16) {
  if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) throw io_error("not a PNG stream");
  png_read_guard g;
  g.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, png_throw, png_warn);
  if (!g.png) throw io_error("png_create_read_struct failed");
  g.info = png_create_info_struct(g.png);
  mem_reader reader{bytes, 0};
  png_set_read_fn(g.png, &reader, png_mem_read);
  png_read_info(g.png, g.info);

  const auto color = png_get_color_type(g.png, g.info);
  const int depth = png_get_bit_depth(g.png, g.info);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(g.png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(g.png);
  if (png_get_valid(g.png, g.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(g.png);
  if (color & PNG_COLOR_MASK_ALPHA || png_get_valid(g.png, g.info, PNG_INFO_tRNS)) png_set_strip_alpha(g.png);
  if (depth == 16 && !keep16) png_set_strip_16(g.png);
  png_read_update_info(g.png, g.info);

  png_raster r;
  r.width = static_cast<int>(png_get_image_width(g.png, g.info));
  r.height = static_cast<int>(png_get_image_height(g.png, g.info));
  r.channels = png_get_channels(g.png, g.info);
  r.bit_depth = png_get_bit_depth(g.png, g.info);
  const auto stride = png_get_rowbytes(g.png, g.info);
  r.rows.resize(stride * static_cast<std::size_t>(r.height));
  std::vector<png_bytep> ptrs(static_cast<std::size_t>(r.height));
  for (int y = 0; y < r.height; ++y) ptrs[static_cast<std::size_t>(y)] = r.rows.data() + stride * y;
  png_read_image(g.png, ptrs.data());
  png_read_end(g.png, nullptr);
  return r;
}

inline std::vector<std::uint8_t> encode_png_raw(int width, int height, int color_type, int bit_depth,
                                                const std::uint8_t* rows, std::size_t stride) {
  std::vector<std::uint8_t> out;
  png_write_guard g;
  g.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, png_throw, png_warn);
  if (!g.png) throw io_error("png_create_write_struct failed");
  g.info = png_create_info_struct(g.png);
  png_set_write_fn(g.png, &out, png_mem_write, png_mem_flush);
  png_set_IHDR(g.png, g.info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), bit_depth,
               color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(g.png, g.info);
  for (int y = 0; y < height; ++y) png_write_row(g.png, const_cast<png_bytep>(rows + stride * y));
  png_write_end(g.png, nullptr);
  return out;
}

}  // namespace detail

inline Image decode_png(std::span<const std::uint8_t> bytes) {
  auto r = detail::decode_png_raw(bytes, false);
  if (r.channels != 1 && r.channels != 3) throw io_error("unsupported PNG channel count");
  Image img;
  img.width = r.width;
  img.height = r.height;
  img.channels = r.channels;
  img.pixels = std::move(r.rows);
  return img;
}

inline std::vector<std::uint8_t> encode_png(const Image& img) {
  const int color = img.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB;
  return detail::encode_png_raw(img.width, img.height, color, 8, img.pixels.data(), img.row_bytes());
}

/// Single-channel 16-bit PNG as host-order samples, row-major.
struct Raster16 {
  int width = 0;
  int height = 0;
  std::vector<std::uint16_t> values;
};

inline Raster16 decode_png16(std::span<const std::uint8_t> bytes) {
  auto r = detail::decode_png_raw(bytes, true);
  if (r.channels != 1) throw io_error("depth PNG must be single-channel");
  Raster16 out{r.width, r.height, {}};
  out.values.resize(static_cast<std::size_t>(r.width) * r.height);
  if (r.bit_depth == 16) {
    for (std::size_t i = 0; i < out.values.size(); ++i)
      out.values[i] = static_cast<std::uint16_t>((r.rows[2 * i] << 8) | r.rows[2 * i + 1]);
  } else {
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = r.rows[i];
  }
  return out;
}

inline std::vector<std::uint8_t> encode_png16(const Raster16& r) {
  std::vector<std::uint8_t> rows(r.values.size() * 2);
  for (std::size_t i = 0; i < r.values.size(); ++i) {
    rows[2 * i] = static_cast<std::uint8_t>(r.values[i] >> 8);
    rows[2 * i + 1] = static_cast<std::uint8_t>(r.values[i] & 0xff);
  }
  return detail::encode_png_raw(r.width, r.height, PNG_COLOR_TYPE_GRAY, 16, rows.data(),
                                static_cast<std::size_t>(r.width) * 2);
}

// ---------------------------------------------------------------------------
// Binary PPM/PGM.

inline Image decode_pnm(std::span<const std::uint8_t> bytes) {
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(bytes[pos])) {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto read_int = [&] {
    skip_ws();
    long v = 0;
    bool any = false;
    while (pos < bytes.size() && std::isdigit(bytes[pos])) {
      v = v * 10 + (bytes[pos++] - '0');
      any = true;
      if (v > 1 << 20) throw io_error("PNM header value too large");
    }
    if (!any) throw io_error("malformed PNM header");
    return static_cast<int>(v);
  };
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '6' && bytes[1] != '5'))
    throw io_error("only binary P5/P6 PNM is supported");
  const int channels = bytes[1] == '6' ? 3 : 1;
  pos = 2;
  const int w = read_int();
  const int h = read_int();
  const int maxval = read_int();
  if (maxval != 255) throw io_error("only 8-bit PNM is supported");
  ++pos;  // single whitespace after maxval
  Image img(w, h, channels);
  if (bytes.size() - pos < img.pixels.size()) throw io_error("truncated PNM data");
  std::memcpy(img.pixels.data(), bytes.data() + pos, img.pixels.size());
  return img;
}

inline std::vector<std::uint8_t> encode_pnm(const Image& img) {
  const std::string header = std::string(img.channels == 1 ? "P5\n" : "P6\n") + std::to_string(img.width) +
                             " " + std::to_string(img.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), img.pixels.begin(), img.pixels.end());
  return out;
}

inline std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline Image load_image(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  const auto ext = path.extension().string();
  if (ext == ".png") return decode_png(bytes);
  if (ext == ".ppm" || ext == ".pgm" || ext == ".pnm") return decode_pnm(bytes);
  throw io_error("unsupported image format: " + path.string());
}

inline void save_image(const Image& img, const std::filesystem::path& path) {
  const auto bytes = path.extension() == ".png" ? encode_png(img) : encode_pnm(img);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace t2vbench
