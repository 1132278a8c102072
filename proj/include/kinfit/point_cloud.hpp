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

#ifndef KINFIT_POINT_CLOUD_HPP
#define KINFIT_POINT_CLOUD_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "kinfit/geometry.hpp"

namespace kinfit {

/// 3D point cloud in meters. `ids` optionally tags every point with an
/// integer label (source scene or part id); it is either empty or has one
/// entry per point.
struct PointCloud {
  std::vector<Eigen::Vector3d> points;
  std::vector<int32_t> ids;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  bool has_ids() const { return !ids.empty(); }

  void append(const Eigen::Vector3d& p) { points.push_back(p); }
  void append(const Eigen::Vector3d& p, int32_t id) {
    points.push_back(p);
    ids.push_back(id);
  }

  /// All coordinates finite and ids (if present) one per point.
  bool valid() const;

  Eigen::Vector3d centroid() const;
};

/// Maps every point p to R*p + t. Count and ids are preserved.
PointCloud transform_cloud(const RigidTransform& t, const PointCloud& cloud);

/// Concatenates `other` onto `cloud`; id vectors merge when both carry them
/// (a cloud with ids absorbs an id-less cloud by tagging it `fill_id`).
void append_cloud(PointCloud& cloud, const PointCloud& other,
                  int32_t fill_id = 0);

/// Grid downsampling with cubic leaves of size `leaf_m`. Each occupied voxel
/// contributes the centroid of its points; output voxels appear in
/// first-seen input order, so the result is deterministic. Ids take the
/// first point's tag in each voxel.
PointCloud voxel_downsample(const PointCloud& cloud, double leaf_m);

/// Keeps every k-th point so that roughly `fraction` of the cloud survives,
/// never fewer than `min_points` (or the whole cloud if smaller).
PointCloud subsample(const PointCloud& cloud, double fraction,
                     std::size_t min_points);

}  // namespace kinfit

#endif  // KINFIT_POINT_CLOUD_HPP
