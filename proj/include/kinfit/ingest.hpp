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

#ifndef KINFIT_INGEST_HPP
#define KINFIT_INGEST_HPP

#include <filesystem>
#include <map>
#include <vector>

#include "kinfit/geometry.hpp"
#include "kinfit/point_cloud.hpp"

namespace kinfit {

struct CameraIntrinsics {
  double fx = 0.0;  // pixels
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  int width = 0;
  int height = 0;

  bool valid() const {
    return fx > 0.0 && fy > 0.0 && cx >= 0.0 && cx < width && cy >= 0.0 &&
           cy < height && width > 0 && height > 0;
  }
};

/// One posed depth + part-mask capture of a scene. Depth is in meters with
/// 0 marking invalid pixels; mask id 0 is background.
struct Observation {
  int scene_id = 0;
  RigidTransform camera_pose;  // camera-to-world
  std::vector<double> depth;   // row-major height x width
  std::vector<int> part_mask;  // row-major height x width
  CameraIntrinsics intrinsics;

  double depth_at(int u, int v) const {
    return depth[static_cast<std::size_t>(v) * intrinsics.width + u];
  }
  int mask_at(int u, int v) const {
    return part_mask[static_cast<std::size_t>(v) * intrinsics.width + u];
  }
};

/// World-frame pinhole back-projection of the pixels labeled `part_id`.
/// Pixel (u, v) with depth d maps to ((u-cx)d/fx, (v-cy)d/fy, d) in the
/// camera frame, then through camera_pose. Pixels scan row-major, so the
/// output order is deterministic.
PointCloud backproject(const Observation& obs, int part_id);

/// Inverse of the back-projection formula: world point to pixel coordinates
/// and camera-frame depth. Used for consistency checks.
Eigen::Vector3d reproject(const Observation& obs, const Eigen::Vector3d& world);

struct PartObservation {
  int part_id = 0;
  int scene_id = 0;
  PointCloud cloud;  // world frame
};

struct Scene {
  int id = 0;
  std::map<int, PartObservation> parts;
};

/// All scenes of one capture session. Loaders guarantee an identical part-id
/// set in every scene; joint estimation additionally requires >= 2 scenes.
struct SceneSet {
  std::vector<Scene> scenes;

  std::vector<int> part_ids() const;
  const PointCloud& cloud(std::size_t scene_index, int part_id) const;

  /// Throws InconsistentParts / EmptyCloud on violated invariants.
  void validate() const;
};

/// Loads the JSON manifest described in the README: per scene either
/// pre-built per-part PLY clouds, posed depth+mask observations, or both.
/// Observation-backed clouds are fused per part and voxel-downsampled
/// (manifest "voxel_size_m", default 5 mm).
SceneSet load_manifest(const std::filesystem::path& path);

}  // namespace kinfit

#endif  // KINFIT_INGEST_HPP
