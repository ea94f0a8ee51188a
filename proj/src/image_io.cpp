// Copyright (c) the lowlight Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lowlight/image_io.hpp"

#include <png.h>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <memory>
#include <vector>

#include "lowlight/errors.hpp"

namespace lowlight {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

inline unsigned char to_byte(float v) {
  double x = v;
  if (x < 0.0) x = 0.0;
  if (x > 1.0) x = 1.0;
  return static_cast<unsigned char>(std::lround(x * 255.0));
}

// libpng reports failures through longjmp; the flag is inspected after the
// jump lands so no exception crosses the C frames.
struct PngReadCtx {
  png_structp png = nullptr;
  png_infop info = nullptr;

  ~PngReadCtx() {
    if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
  }
};

struct PngWriteCtx {
  png_structp png = nullptr;
  png_infop info = nullptr;

  ~PngWriteCtx() {
    if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
  }
};

RgbImage load_png(std::FILE* f, const std::string& path) {
  PngReadCtx ctx;
  ctx.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr,
                                   nullptr);
  if (!ctx.png) throw_error(ErrorCode::kIoFailure, path + ": png init failed");
  ctx.info = png_create_info_struct(ctx.png);
  if (!ctx.info) throw_error(ErrorCode::kIoFailure, path + ": png init failed");

  std::vector<png_bytep> rows;
  std::vector<unsigned char> pixels;
  int width = 0, height = 0, bit_depth = 0;

  if (setjmp(png_jmpbuf(ctx.png))) {
    throw_error(ErrorCode::kCorruptData, path + ": corrupt PNG data");
  }

  png_init_io(ctx.png, f);
  png_read_info(ctx.png, ctx.info);

  width = static_cast<int>(png_get_image_width(ctx.png, ctx.info));
  height = static_cast<int>(png_get_image_height(ctx.png, ctx.info));
  bit_depth = png_get_bit_depth(ctx.png, ctx.info);
  const int color_type = png_get_color_type(ctx.png, ctx.info);

  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(ctx.png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) {
    png_set_expand_gray_1_2_4_to_8(ctx.png);
  }
  if (png_get_valid(ctx.png, ctx.info, PNG_INFO_tRNS)) {
    png_set_tRNS_to_alpha(ctx.png);
  }
  if (color_type == PNG_COLOR_TYPE_GRAY ||
      color_type == PNG_COLOR_TYPE_GRAY_ALPHA) {
    png_set_gray_to_rgb(ctx.png);
  }
  png_set_strip_alpha(ctx.png);
  png_set_interlace_handling(ctx.png);
  png_read_update_info(ctx.png, ctx.info);

  bit_depth = png_get_bit_depth(ctx.png, ctx.info);
  const size_t row_bytes = png_get_rowbytes(ctx.png, ctx.info);
  pixels.resize(row_bytes * height);
  rows.resize(height);
  for (int y = 0; y < height; ++y) rows[y] = pixels.data() + row_bytes * y;
  png_read_image(ctx.png, rows.data());
  png_read_end(ctx.png, nullptr);

  RgbImage img{PlaneF(width, height), PlaneF(width, height),
               PlaneF(width, height)};
  if (bit_depth == 16) {
    const double scale = 1.0 / 65535.0;
    for (int y = 0; y < height; ++y) {
      const unsigned char* src = rows[y];
      for (int x = 0; x < width; ++x) {
        // PNG stores 16-bit samples big-endian.
        const unsigned r = (src[0] << 8) | src[1];
        const unsigned g = (src[2] << 8) | src[3];
        const unsigned b = (src[4] << 8) | src[5];
        src += 6;
        img.r.at(x, y) = static_cast<float>(r * scale);
        img.g.at(x, y) = static_cast<float>(g * scale);
        img.b.at(x, y) = static_cast<float>(b * scale);
      }
    }
  } else {
    const double scale = 1.0 / 255.0;
    for (int y = 0; y < height; ++y) {
      const unsigned char* src = rows[y];
      for (int x = 0; x < width; ++x) {
        img.r.at(x, y) = static_cast<float>(src[0] * scale);
        img.g.at(x, y) = static_cast<float>(src[1] * scale);
        img.b.at(x, y) = static_cast<float>(src[2] * scale);
        src += 3;
      }
    }
  }
  return img;
}

// Reads one whitespace-delimited header token, skipping '#' comment lines.
bool next_ppm_token(std::FILE* f, std::string* token) {
  token->clear();
  int c = std::fgetc(f);
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = std::fgetc(f);
    } else if (std::isspace(c)) {
      if (!token->empty()) return true;
    } else {
      token->push_back(static_cast<char>(c));
    }
    if (c != EOF) c = std::fgetc(f);
  }
  return !token->empty();
}

bool parse_positive(const std::string& token, long* out) {
  if (token.empty()) return false;
  long value = 0;
  for (char ch : token) {
    if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
    value = value * 10 + (ch - '0');
    if (value > 1000000000L) return false;
  }
  *out = value;
  return value > 0;
}

RgbImage load_ppm(std::FILE* f, const std::string& path) {
  // Caller verified the "P6" magic; consume it and the following separator.
  std::string token;
  if (!next_ppm_token(f, &token) || token != "P6") {
    throw_error(ErrorCode::kCorruptData, path + ": bad PPM magic");
  }
  long width = 0, height = 0, maxval = 0;
  if (!next_ppm_token(f, &token) || !parse_positive(token, &width) ||
      !next_ppm_token(f, &token) || !parse_positive(token, &height) ||
      !next_ppm_token(f, &token) || !parse_positive(token, &maxval) ||
      maxval > 65535) {
    throw_error(ErrorCode::kCorruptData, path + ": corrupt PPM header");
  }

  const int w = static_cast<int>(width), h = static_cast<int>(height);
  const bool wide = maxval > 255;
  const size_t bytes_per_sample = wide ? 2 : 1;
  const size_t total = static_cast<size_t>(w) * h * 3 * bytes_per_sample;
  std::vector<unsigned char> raw(total);
  if (std::fread(raw.data(), 1, total, f) != total) {
    throw_error(ErrorCode::kCorruptData, path + ": truncated PPM payload");
  }

  RgbImage img{PlaneF(w, h), PlaneF(w, h), PlaneF(w, h)};
  const double scale = 1.0 / static_cast<double>(maxval);
  const unsigned char* src = raw.data();
  for (size_t i = 0; i < img.r.size(); ++i) {
    unsigned r, g, b;
    if (wide) {
      r = (src[0] << 8) | src[1];
      g = (src[2] << 8) | src[3];
      b = (src[4] << 8) | src[5];
      src += 6;
    } else {
      r = src[0];
      g = src[1];
      b = src[2];
      src += 3;
    }
    if (r > static_cast<unsigned>(maxval) || g > static_cast<unsigned>(maxval) ||
        b > static_cast<unsigned>(maxval)) {
      throw_error(ErrorCode::kCorruptData, path + ": PPM sample above maxval");
    }
    img.r.data[i] = static_cast<float>(r * scale);
    img.g.data[i] = static_cast<float>(g * scale);
    img.b.data[i] = static_cast<float>(b * scale);
  }
  return img;
}

void write_png(const std::string& path, int width, int height, int channels,
               const std::vector<unsigned char>& pixels) {
  FilePtr f(std::fopen(path.c_str(), "wb"));
  if (!f) throw_error(ErrorCode::kIoFailure, path + ": cannot open for write");

  PngWriteCtx ctx;
  ctx.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr,
                                    nullptr);
  if (!ctx.png) throw_error(ErrorCode::kIoFailure, path + ": png init failed");
  ctx.info = png_create_info_struct(ctx.png);
  if (!ctx.info) throw_error(ErrorCode::kIoFailure, path + ": png init failed");

  if (setjmp(png_jmpbuf(ctx.png))) {
    throw_error(ErrorCode::kIoFailure, path + ": PNG write failed");
  }

  png_init_io(ctx.png, f.get());
  png_set_IHDR(ctx.png, ctx.info, width, height, 8,
               channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(ctx.png, ctx.info);
  const size_t row_bytes = static_cast<size_t>(width) * channels;
  for (int y = 0; y < height; ++y) {
    png_write_row(ctx.png,
                  const_cast<png_bytep>(pixels.data() + row_bytes * y));
  }
  png_write_end(ctx.png, nullptr);
  if (std::fflush(f.get()) != 0) {
    throw_error(ErrorCode::kIoFailure, path + ": flush failed");
  }
}

}  // namespace

RgbImage load_image(const std::string& path) {
  FilePtr f(std::fopen(path.c_str(), "rb"));
  if (!f) throw_error(ErrorCode::kIoFailure, path + ": cannot open file");

  unsigned char magic[8] = {0};
  const size_t got = std::fread(magic, 1, sizeof(magic), f.get());
  std::rewind(f.get());

  static const unsigned char png_sig[8] = {0x89, 'P', 'N', 'G',
                                           '\r', '\n', 0x1a, '\n'};
  if (got >= 8 && std::memcmp(magic, png_sig, 8) == 0) {
    return load_png(f.get(), path);
  }
  if (got >= 2 && magic[0] == 'P' && magic[1] == '6') {
    return load_ppm(f.get(), path);
  }
  throw_error(ErrorCode::kUnsupportedFormat,
              path + ": not a PNG or binary PPM file");
}

void save_image(const RgbImage& img, const std::string& path) {
  require_valid(img, "save_image");
  const int w = img.width(), h = img.height();
  std::vector<unsigned char> pixels(static_cast<size_t>(w) * h * 3);
  for (size_t i = 0; i < img.r.size(); ++i) {
    pixels[i * 3 + 0] = to_byte(img.r.data[i]);
    pixels[i * 3 + 1] = to_byte(img.g.data[i]);
    pixels[i * 3 + 2] = to_byte(img.b.data[i]);
  }
  write_png(path, w, h, 3, pixels);
}

void save_plane_png(const PlaneF& plane, const std::string& path) {
  require_valid(plane, "save_plane_png");
  std::vector<unsigned char> pixels(plane.size());
  for (size_t i = 0; i < plane.size(); ++i) pixels[i] = to_byte(plane.data[i]);
  write_png(path, plane.width, plane.height, 1, pixels);
}

}  // namespace lowlight
