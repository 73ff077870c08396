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


#ifndef VLMFUZZ_IMAGE_H_
#define VLMFUZZ_IMAGE_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace vlmfuzz {

struct Rgb {
  uint8_t r = 0, g = 0, b = 0;
};

// 8-bit RGB raster, row-major.
class Image {
 public:
  Image() = default;
  Image(int width, int height, Rgb fill = {255, 255, 255});

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return width_ == 0 || height_ == 0; }
  const std::vector<uint8_t>& pixels() const { return pixels_; }

  Rgb At(int x, int y) const;
  void Set(int x, int y, Rgb c);  // clipped
  void FillRect(int x1, int y1, int x2, int y2, Rgb c);
  void StrokeRect(int x1, int y1, int x2, int y2, int thickness, Rgb c);
  // Draws `value` with a 3x5 block font; `scale` is the block size in pixels.
  // Returns the width of the rendered text.
  int DrawNumber(int x, int y, int value, int scale, Rgb c);

  bool operator==(const Image&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<uint8_t> pixels_;
};

// PNG codec (libpng). Decode throws kIoError on corrupt input.
std::string EncodePng(const Image& image);
Image DecodePng(std::string_view bytes);

}  // namespace vlmfuzz

#endif  // VLMFUZZ_IMAGE_H_
