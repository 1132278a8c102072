// Copyright 2026 The kinfit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef KINFIT_PGM_IO_HPP
#define KINFIT_PGM_IO_HPP

#include <cstdint>
#include <filesystem>
#include <vector>

namespace kinfit {

/// Row-major grayscale image. Depth images use 16-bit samples in
/// millimeters (0 = invalid); part masks use 8-bit ids (0 = background).
template <typename T>
struct Image {
  int width = 0;
  int height = 0;
  std::vector<T> pixels;

  Image() = default;
  Image(int w, int h, T fill = 0)
      : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {}

  T at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
  T& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

using ImageU8 = Image<uint8_t>;
using ImageU16 = Image<uint16_t>;

/// P5 (binary) with P2 (ascii) fallback; 16-bit samples are big-endian per
/// the netpbm convention.
ImageU16 read_pgm16(const std::filesystem::path& path);
ImageU8 read_pgm8(const std::filesystem::path& path);

void write_pgm16(const std::filesystem::path& path, const ImageU16& image);
void write_pgm8(const std::filesystem::path& path, const ImageU8& image);

}  // namespace kinfit

#endif  // KINFIT_PGM_IO_HPP
