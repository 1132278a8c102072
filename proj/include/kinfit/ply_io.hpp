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

#ifndef KINFIT_PLY_IO_HPP
#define KINFIT_PLY_IO_HPP

#include <filesystem>

#include "kinfit/point_cloud.hpp"

namespace kinfit {

enum class PlyFormat { Ascii, BinaryLittleEndian };

/// Reads a PLY vertex cloud. Accepts ascii and binary_little_endian files
/// whose vertex element carries float or double x, y, z; an int32 part_id
/// property, when present, fills the cloud's ids. Other scalar vertex
/// properties and trailing elements are skipped.
PointCloud read_ply(const std::filesystem::path& path);

/// Writes x, y, z as float32 (plus part_id as int32 when the cloud has ids).
/// Write-then-read preserves points within float precision, in order.
void write_ply(const std::filesystem::path& path, const PointCloud& cloud,
               PlyFormat format = PlyFormat::BinaryLittleEndian);

}  // namespace kinfit

#endif  // KINFIT_PLY_IO_HPP
