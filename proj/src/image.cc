// Copyright 2026 The vlmfuzz Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "vlmfuzz/image.h"

#include <png.h>

#include <algorithm>
#include <array>
#include <cstring>
#include <memory>
#include <string>

#include "vlmfuzz/error.h"

namespace vlmfuzz {
namespace {

// 3x5 glyphs, one row per 3-bit group, MSB first.
constexpr std::array<std::array<uint8_t, 5>, 10> kDigits = {{
    {7, 5, 5, 5, 7},
    {2, 6, 2, 2, 7},
    {7, 1, 7, 4, 7},
    {7, 1, 7, 1, 7},
    {5, 5, 7, 1, 1},
    {7, 4, 7, 1, 7},
    {7, 4, 7, 5, 7},
    {7, 1, 1, 1, 1},
    {7, 5, 7, 5, 7},
    {7, 5, 7, 1, 7},
}};

}  // namespace

Image::Image(int width, int height, Rgb fill)
    : width_(std::max(0, width)), height_(std::max(0, height)) {
  pixels_.resize(static_cast<size_t>(width_) * height_ * 3);
  for (size_t i = 0; i < pixels_.size(); i += 3) {
    pixels_[i] = fill.r;
    pixels_[i + 1] = fill.g;
    pixels_[i + 2] = fill.b;
  }
}

Rgb Image::At(int x, int y) const {
  if (x < 0 || y < 0 || x >= width_ || y >= height_) return {};
  const size_t i = (static_cast<size_t>(y) * width_ + x) * 3;
  return {pixels_[i], pixels_[i + 1], pixels_[i + 2]};
}

void Image::Set(int x, int y, Rgb c) {
  if (x < 0 || y < 0 || x >= width_ || y >= height_) return;
  const size_t i = (static_cast<size_t>(y) * width_ + x) * 3;
  pixels_[i] = c.r;
  pixels_[i + 1] = c.g;
  pixels_[i + 2] = c.b;
}

void Image::FillRect(int x1, int y1, int x2, int y2, Rgb c) {
  x1 = std::max(x1, 0);
  y1 = std::max(y1, 0);
  x2 = std::min(x2, width_);
  y2 = std::min(y2, height_);
  for (int y = y1; y < y2; ++y) {
    for (int x = x1; x < x2; ++x) Set(x, y, c);
  }
}

void Image::StrokeRect(int x1, int y1, int x2, int y2, int thickness,
                       Rgb c) {
  FillRect(x1, y1, x2, y1 + thickness, c);
  FillRect(x1, y2 - thickness, x2, y2, c);
  FillRect(x1, y1, x1 + thickness, y2, c);
  FillRect(x2 - thickness, y1, x2, y2, c);
}

int Image::DrawNumber(int x, int y, int value, int scale, Rgb c) {
  const std::string digits = std::to_string(std::max(0, value));
  int cursor = x;
  for (char ch : digits) {
    const auto& glyph = kDigits[ch - '0'];
    for (int row = 0; row < 5; ++row) {
      for (int col = 0; col < 3; ++col) {
        if (glyph[row] & (4 >> col)) {
          FillRect(cursor + col * scale, y + row * scale,
                   cursor + (col + 1) * scale, y + (row + 1) * scale, c);
        }
      }
    }
    cursor += 4 * scale;
  }
  return cursor - x - scale;
}

std::string EncodePng(const Image& image) {
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  png.width = image.width();
  png.height = image.height();
  png.format = PNG_FORMAT_RGB;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&png, nullptr, &size, 0,
                                 image.pixels().data(), 0, nullptr)) {
    throw Error(ErrorCode::kIoError, std::string("png size: ") + png.message);
  }
  std::string out(size, '\0');
  if (!png_image_write_to_memory(&png, out.data(), &size, 0,
                                 image.pixels().data(), 0, nullptr)) {
    throw Error(ErrorCode::kIoError, std::string("png write: ") + png.message);
  }
  out.resize(size);
  return out;
}

Image DecodePng(std::string_view bytes) {
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&png, bytes.data(), bytes.size())) {
    throw Error(ErrorCode::kIoError, std::string("png read: ") + png.message);
  }
  png.format = PNG_FORMAT_RGB;
  Image image(static_cast<int>(png.width), static_cast<int>(png.height));
  std::vector<uint8_t> buffer(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, buffer.data(), 0, nullptr)) {
    png_image_free(&png);
    throw Error(ErrorCode::kIoError, std::string("png read: ") + png.message);
  }
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      const size_t i = (static_cast<size_t>(y) * image.width() + x) * 3;
      image.Set(x, y, {buffer[i], buffer[i + 1], buffer[i + 2]});
    }
  }
  return image;
}

}  // namespace vlmfuzz
