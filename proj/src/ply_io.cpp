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

#include "kinfit/ply_io.hpp"

#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "kinfit/error.hpp"

namespace kinfit {

namespace {

struct Property {
  std::string name;
  std::string type;
  bool is_list = false;
};

struct Element {
  std::string name;
  std::size_t count = 0;
  std::vector<Property> properties;
};

std::size_t scalar_size(const std::string& type) {
  if (type == "char" || type == "uchar" || type == "int8" || type == "uint8")
    return 1;
  if (type == "short" || type == "ushort" || type == "int16" ||
      type == "uint16")
    return 2;
  if (type == "int" || type == "uint" || type == "int32" || type == "uint32" ||
      type == "float" || type == "float32")
    return 4;
  if (type == "double" || type == "float64") return 8;
  return 0;
}

double read_scalar_le(std::istream& in, const std::string& type,
                      const std::filesystem::path& path) {
  unsigned char buf[8];
  const std::size_t n = scalar_size(type);
  in.read(reinterpret_cast<char*>(buf), static_cast<std::streamsize>(n));
  if (!in) {
    throw Error(ErrorCode::MalformedPly,
                path.string() + ": truncated binary payload");
  }
  if (type == "float" || type == "float32") {
    float f;
    std::memcpy(&f, buf, 4);
    return static_cast<double>(f);
  }
  if (type == "double" || type == "float64") {
    double d;
    std::memcpy(&d, buf, 8);
    return d;
  }
  // integer types, little endian
  uint64_t u = 0;
  for (std::size_t i = 0; i < n; ++i) u |= static_cast<uint64_t>(buf[i]) << (8 * i);
  const bool is_signed = type[0] == 'c' || type[0] == 's' || type[0] == 'i';
  if (is_signed) {
    const uint64_t sign_bit = 1ULL << (8 * n - 1);
    if (u & sign_bit) {
      return static_cast<double>(
          static_cast<int64_t>(u | ~((sign_bit << 1) - 1)));
    }
  }
  return static_cast<double>(u);
}

std::vector<std::string> split_tokens(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream stream(line);
  std::string tok;
  while (stream >> tok) tokens.push_back(tok);
  return tokens;
}

}  // namespace

PointCloud read_ply(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::MissingFile, path.string());
  }

  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::MalformedPly, path.string() + ": empty file");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "ply") {
    throw Error(ErrorCode::MalformedPly, path.string() + ": missing ply magic");
  }

  PlyFormat format = PlyFormat::Ascii;
  bool format_seen = false;
  std::vector<Element> elements;
  while (true) {
    if (!std::getline(in, line)) {
      throw Error(ErrorCode::MalformedPly,
                  path.string() + ": header ends before end_header");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto tokens = split_tokens(line);
    if (tokens.empty() || tokens[0] == "comment" || tokens[0] == "obj_info")
      continue;
    if (tokens[0] == "end_header") break;
    if (tokens[0] == "format") {
      if (tokens.size() < 2) {
        throw Error(ErrorCode::MalformedPly, path.string() + ": bad format line");
      }
      if (tokens[1] == "ascii") {
        format = PlyFormat::Ascii;
      } else if (tokens[1] == "binary_little_endian") {
        format = PlyFormat::BinaryLittleEndian;
      } else {
        throw Error(ErrorCode::UnsupportedFormat,
                    path.string() + ": format " + tokens[1]);
      }
      format_seen = true;
    } else if (tokens[0] == "element") {
      if (tokens.size() != 3) {
        throw Error(ErrorCode::MalformedPly,
                    path.string() + ": bad element line");
      }
      Element e;
      e.name = tokens[1];
      try {
        e.count = std::stoull(tokens[2]);
      } catch (const std::exception&) {
        throw Error(ErrorCode::MalformedPly,
                    path.string() + ": bad element count " + tokens[2]);
      }
      elements.push_back(e);
    } else if (tokens[0] == "property") {
      if (elements.empty() || tokens.size() < 3) {
        throw Error(ErrorCode::MalformedPly,
                    path.string() + ": property outside element");
      }
      Property p;
      if (tokens[1] == "list") {
        if (tokens.size() != 5) {
          throw Error(ErrorCode::MalformedPly,
                      path.string() + ": bad list property");
        }
        p.is_list = true;
        p.type = tokens[3];
        p.name = tokens[4];
      } else {
        p.type = tokens[1];
        p.name = tokens[2];
        if (scalar_size(p.type) == 0) {
          throw Error(ErrorCode::UnsupportedFormat,
                      path.string() + ": property type " + p.type);
        }
      }
      elements.back().properties.push_back(p);
    } else {
      throw Error(ErrorCode::MalformedPly,
                  path.string() + ": unexpected header line '" + line + "'");
    }
  }
  if (!format_seen) {
    throw Error(ErrorCode::MalformedPly, path.string() + ": missing format line");
  }

  if (elements.empty() || elements.front().name != "vertex") {
    // skipping an unknown leading element's payload is not reliable
    throw Error(ErrorCode::UnsupportedFormat,
                path.string() + ": vertex must be the first element");
  }
  const Element* vertex = &elements.front();

  int ix = -1, iy = -1, iz = -1, iid = -1;
  for (std::size_t i = 0; i < vertex->properties.size(); ++i) {
    const auto& p = vertex->properties[i];
    if (p.is_list) {
      throw Error(ErrorCode::UnsupportedFormat,
                  path.string() + ": list property in vertex element");
    }
    if (p.name == "x") ix = static_cast<int>(i);
    if (p.name == "y") iy = static_cast<int>(i);
    if (p.name == "z") iz = static_cast<int>(i);
    if (p.name == "part_id") iid = static_cast<int>(i);
  }
  if (ix < 0 || iy < 0 || iz < 0) {
    throw Error(ErrorCode::MalformedPly,
                path.string() + ": vertex element lacks x/y/z");
  }

  PointCloud cloud;
  cloud.points.reserve(vertex->count);
  if (iid >= 0) cloud.ids.reserve(vertex->count);

  if (format == PlyFormat::Ascii) {
    for (std::size_t v = 0; v < vertex->count; ++v) {
      do {
        if (!std::getline(in, line)) {
          throw Error(ErrorCode::MalformedPly,
                      path.string() + ": truncated vertex data");
        }
      } while (split_tokens(line).empty());
      const auto tokens = split_tokens(line);
      if (tokens.size() < vertex->properties.size()) {
        throw Error(ErrorCode::MalformedPly,
                    path.string() + ": short vertex row");
      }
      std::vector<double> values(vertex->properties.size());
      for (std::size_t i = 0; i < values.size(); ++i) {
        const std::string& type = vertex->properties[i].type;
        try {
          // float32 columns parse as float so ascii and binary agree exactly
          if (type == "float" || type == "float32") {
            values[i] = static_cast<double>(std::stof(tokens[i]));
          } else {
            values[i] = std::stod(tokens[i]);
          }
        } catch (const std::exception&) {
          throw Error(ErrorCode::MalformedPly,
                      path.string() + ": bad numeric token " + tokens[i]);
        }
      }
      cloud.points.emplace_back(values[ix], values[iy], values[iz]);
      if (iid >= 0) cloud.ids.push_back(static_cast<int32_t>(values[iid]));
    }
  } else {
    for (std::size_t v = 0; v < vertex->count; ++v) {
      Eigen::Vector3d p;
      int32_t id = 0;
      for (std::size_t i = 0; i < vertex->properties.size(); ++i) {
        const double value =
            read_scalar_le(in, vertex->properties[i].type, path);
        if (static_cast<int>(i) == ix) p.x() = value;
        if (static_cast<int>(i) == iy) p.y() = value;
        if (static_cast<int>(i) == iz) p.z() = value;
        if (static_cast<int>(i) == iid) id = static_cast<int32_t>(value);
      }
      cloud.points.push_back(p);
      if (iid >= 0) cloud.ids.push_back(id);
    }
  }
  return cloud;
}

void write_ply(const std::filesystem::path& path, const PointCloud& cloud,
               PlyFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::MissingFile,
                path.string() + ": cannot open for writing");
  }

  out << "ply\n";
  out << (format == PlyFormat::Ascii ? "format ascii 1.0\n"
                                     : "format binary_little_endian 1.0\n");
  out << "element vertex " << cloud.size() << "\n";
  out << "property float x\nproperty float y\nproperty float z\n";
  if (cloud.has_ids()) out << "property int part_id\n";
  out << "end_header\n";

  if (format == PlyFormat::Ascii) {
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      const Eigen::Vector3f p = cloud.points[i].cast<float>();
      char buf[64];
      for (int k = 0; k < 3; ++k) {
        auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), p(k));
        out.write(buf, end - buf);
        out.put(k == 2 && !cloud.has_ids() ? '\n' : ' ');
      }
      if (cloud.has_ids()) {
        out << cloud.ids[i] << "\n";
      }
    }
  } else {
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      const Eigen::Vector3f p = cloud.points[i].cast<float>();
      out.write(reinterpret_cast<const char*>(p.data()), 12);
      if (cloud.has_ids()) {
        const int32_t id = cloud.ids[i];
        out.write(reinterpret_cast<const char*>(&id), 4);
      }
    }
  }
  if (!out) {
    throw Error(ErrorCode::MalformedPly, path.string() + ": write failed");
  }
}

}  // namespace kinfit
