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

#include "kinfit/point_cloud.hpp"

#include <cmath>
#include <unordered_map>

#include "kinfit/error.hpp"

namespace kinfit {

bool PointCloud::valid() const {
  if (!ids.empty() && ids.size() != points.size()) return false;
  for (const auto& p : points) {
    if (!p.allFinite()) return false;
  }
  return true;
}

Eigen::Vector3d PointCloud::centroid() const {
  Eigen::Vector3d c = Eigen::Vector3d::Zero();
  if (points.empty()) return c;
  for (const auto& p : points) c += p;
  return c / static_cast<double>(points.size());
}

PointCloud transform_cloud(const RigidTransform& t, const PointCloud& cloud) {
  PointCloud out;
  out.points.reserve(cloud.points.size());
  for (const auto& p : cloud.points) out.points.push_back(t * p);
  out.ids = cloud.ids;
  return out;
}

void append_cloud(PointCloud& cloud, const PointCloud& other, int32_t fill_id) {
  if (cloud.has_ids() && !other.has_ids()) {
    cloud.ids.resize(cloud.ids.size() + other.points.size(), fill_id);
  } else if (!cloud.has_ids() && other.has_ids() && !cloud.points.empty()) {
    cloud.ids.resize(cloud.points.size(), fill_id);
    cloud.ids.insert(cloud.ids.end(), other.ids.begin(), other.ids.end());
  } else {
    cloud.ids.insert(cloud.ids.end(), other.ids.begin(), other.ids.end());
  }
  cloud.points.insert(cloud.points.end(), other.points.begin(),
                      other.points.end());
}

namespace {

struct VoxelKey {
  int64_t x, y, z;
  bool operator==(const VoxelKey& o) const {
    return x == o.x && y == o.y && z == o.z;
  }
};

struct VoxelKeyHash {
  std::size_t operator()(const VoxelKey& k) const {
    std::size_t h = std::hash<int64_t>{}(k.x);
    h ^= std::hash<int64_t>{}(k.y) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= std::hash<int64_t>{}(k.z) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

}  // namespace

PointCloud voxel_downsample(const PointCloud& cloud, double leaf_m) {
  if (leaf_m <= 0.0) return cloud;

  struct Cell {
    Eigen::Vector3d sum = Eigen::Vector3d::Zero();
    std::size_t count = 0;
    int32_t first_id = 0;
  };
  std::unordered_map<VoxelKey, std::size_t, VoxelKeyHash> index;
  std::vector<Cell> cells;

  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    const auto& p = cloud.points[i];
    VoxelKey key{static_cast<int64_t>(std::floor(p.x() / leaf_m)),
                 static_cast<int64_t>(std::floor(p.y() / leaf_m)),
                 static_cast<int64_t>(std::floor(p.z() / leaf_m))};
    auto [it, inserted] = index.emplace(key, cells.size());
    if (inserted) {
      cells.emplace_back();
      cells.back().first_id = cloud.has_ids() ? cloud.ids[i] : 0;
    }
    Cell& cell = cells[it->second];
    cell.sum += p;
    cell.count += 1;
  }

  PointCloud out;
  out.points.reserve(cells.size());
  if (cloud.has_ids()) out.ids.reserve(cells.size());
  for (const auto& cell : cells) {
    out.points.push_back(cell.sum / static_cast<double>(cell.count));
    if (cloud.has_ids()) out.ids.push_back(cell.first_id);
  }
  return out;
}

PointCloud subsample(const PointCloud& cloud, double fraction,
                     std::size_t min_points) {
  const std::size_t n = cloud.size();
  std::size_t target = static_cast<std::size_t>(
      std::ceil(fraction * static_cast<double>(n)));
  if (target < min_points) target = min_points;
  if (target >= n) return cloud;

  PointCloud out;
  out.points.reserve(target);
  if (cloud.has_ids()) out.ids.reserve(target);
  for (std::size_t k = 0; k < target; ++k) {
    const std::size_t i = k * n / target;
    out.points.push_back(cloud.points[i]);
    if (cloud.has_ids()) out.ids.push_back(cloud.ids[i]);
  }
  return out;
}

}  // namespace kinfit
