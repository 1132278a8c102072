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

#include "kinfit/pgm_io.hpp"

#include <fstream>
#include <string>

#include "kinfit/error.hpp"

namespace kinfit {

namespace {

// Reads the next header token, skipping whitespace and '#' comments.
std::string next_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  return tok;
}

struct PgmHeader {
  bool binary = false;
  int width = 0;
  int height = 0;
  long maxval = 0;
};

PgmHeader read_header(std::istream& in, const std::filesystem::path& path) {
  PgmHeader h;
  const std::string magic = next_token(in);
  if (magic == "P5") {
    h.binary = true;
  } else if (magic == "P2") {
    h.binary = false;
  } else {
    throw Error(ErrorCode::UnsupportedFormat,
                path.string() + ": not a PGM (magic '" + magic + "')");
  }
  try {
    h.width = std::stoi(next_token(in));
    h.height = std::stoi(next_token(in));
    h.maxval = std::stol(next_token(in));
  } catch (const std::exception&) {
    throw Error(ErrorCode::UnsupportedFormat,
                path.string() + ": malformed PGM header");
  }
  if (h.width <= 0 || h.height <= 0 || h.maxval <= 0 || h.maxval > 65535) {
    throw Error(ErrorCode::UnsupportedFormat,
                path.string() + ": bad PGM dimensions or maxval");
  }
  return h;
}

template <typename T>
Image<T> read_pgm(const std::filesystem::path& path, long max_allowed) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingFile, path.string());
  const PgmHeader h = read_header(in, path);
  if (h.maxval > max_allowed) {
    throw Error(ErrorCode::UnsupportedFormat,
                path.string() + ": maxval " + std::to_string(h.maxval) +
                    " exceeds sample width");
  }

  Image<T> img(h.width, h.height);
  const std::size_t n = img.pixels.size();
  if (h.binary) {
    // single whitespace byte separates header and raster; already consumed
    // by next_token's trailing-whitespace handling
    if (h.maxval > 255) {
      std::vector<unsigned char> raw(2 * n);
      in.read(reinterpret_cast<char*>(raw.data()),
              static_cast<std::streamsize>(raw.size()));
      if (!in) {
        throw Error(ErrorCode::UnsupportedFormat,
                    path.string() + ": truncated raster");
      }
      for (std::size_t i = 0; i < n; ++i) {
        img.pixels[i] = static_cast<T>((raw[2 * i] << 8) | raw[2 * i + 1]);
      }
    } else {
      std::vector<unsigned char> raw(n);
      in.read(reinterpret_cast<char*>(raw.data()),
              static_cast<std::streamsize>(raw.size()));
      if (!in) {
        throw Error(ErrorCode::UnsupportedFormat,
                    path.string() + ": truncated raster");
      }
      for (std::size_t i = 0; i < n; ++i) img.pixels[i] = static_cast<T>(raw[i]);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const std::string tok = next_token(in);
      if (tok.empty()) {
        throw Error(ErrorCode::UnsupportedFormat,
                    path.string() + ": truncated ascii raster");
      }
      img.pixels[i] = static_cast<T>(std::stol(tok));
    }
  }
  return img;
}

template <typename T>
void write_pgm(const std::filesystem::path& path, const Image<T>& image,
               long maxval) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::MissingFile,
                path.string() + ": cannot open for writing");
  }
  out << "P5\n" << image.width << " " << image.height << "\n" << maxval << "\n";
  if (maxval > 255) {
    for (const T v : image.pixels) {
      const unsigned char hi = static_cast<unsigned char>(v >> 8);
      const unsigned char lo = static_cast<unsigned char>(v & 0xff);
      out.put(static_cast<char>(hi));
      out.put(static_cast<char>(lo));
    }
  } else {
    for (const T v : image.pixels) out.put(static_cast<char>(v & 0xff));
  }
}

}  // namespace

ImageU16 read_pgm16(const std::filesystem::path& path) {
  return read_pgm<uint16_t>(path, 65535);
}

ImageU8 read_pgm8(const std::filesystem::path& path) {
  return read_pgm<uint8_t>(path, 255);
}

void write_pgm16(const std::filesystem::path& path, const ImageU16& image) {
  write_pgm(path, image, 65535);
}

void write_pgm8(const std::filesystem::path& path, const ImageU8& image) {
  write_pgm(path, image, 255);
}

}  // namespace kinfit
