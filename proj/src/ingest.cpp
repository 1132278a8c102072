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

#include "kinfit/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <string>

#include <json.hpp>

#include "kinfit/error.hpp"
#include "kinfit/pgm_io.hpp"
#include "kinfit/ply_io.hpp"

namespace kinfit {

namespace {
constexpr double kDefaultVoxelM = 0.005;
}

PointCloud backproject(const Observation& obs, int part_id) {
  const CameraIntrinsics& k = obs.intrinsics;
  if (!k.valid()) {
    throw Error(ErrorCode::SchemaError, "invalid camera intrinsics");
  }
  if (obs.depth.size() != static_cast<std::size_t>(k.width) * k.height ||
      obs.part_mask.size() != obs.depth.size()) {
    throw Error(ErrorCode::SchemaError,
                "depth/mask dimensions do not match intrinsics");
  }

  PointCloud cloud;
  bool mask_hit = false;
  for (int v = 0; v < k.height; ++v) {
    for (int u = 0; u < k.width; ++u) {
      if (obs.mask_at(u, v) != part_id) continue;
      mask_hit = true;
      const double d = obs.depth_at(u, v);
      if (d <= 0.0) continue;
      const Eigen::Vector3d camera_point((u - k.cx) * d / k.fx,
                                         (v - k.cy) * d / k.fy, d);
      cloud.append(obs.camera_pose * camera_point);
    }
  }
  if (!mask_hit) {
    throw Error(ErrorCode::PartNotInMask,
                "part " + std::to_string(part_id) + " absent from mask in scene " +
                    std::to_string(obs.scene_id));
  }
  if (cloud.empty()) {
    throw Error(ErrorCode::NoValidDepth,
                "part " + std::to_string(part_id) +
                    " has no valid depth in scene " +
                    std::to_string(obs.scene_id));
  }
  return cloud;
}

Eigen::Vector3d reproject(const Observation& obs, const Eigen::Vector3d& world) {
  const Eigen::Vector3d c = obs.camera_pose.inverse() * world;
  const CameraIntrinsics& k = obs.intrinsics;
  return {c.x() * k.fx / c.z() + k.cx, c.y() * k.fy / c.z() + k.cy, c.z()};
}

std::vector<int> SceneSet::part_ids() const {
  std::vector<int> ids;
  if (scenes.empty()) return ids;
  for (const auto& [id, part] : scenes.front().parts) ids.push_back(id);
  return ids;  // std::map iteration is already sorted
}

const PointCloud& SceneSet::cloud(std::size_t scene_index, int part_id) const {
  if (scene_index >= scenes.size()) {
    throw Error(ErrorCode::MissingScene,
                "scene index " + std::to_string(scene_index) + " out of range");
  }
  const auto it = scenes[scene_index].parts.find(part_id);
  if (it == scenes[scene_index].parts.end()) {
    throw Error(ErrorCode::InconsistentParts,
                "part " + std::to_string(part_id) + " missing from scene " +
                    std::to_string(scenes[scene_index].id));
  }
  return it->second.cloud;
}

void SceneSet::validate() const {
  if (scenes.empty()) {
    throw Error(ErrorCode::SchemaError, "scene set has no scenes");
  }
  std::set<int> reference;
  for (const auto& [id, part] : scenes.front().parts) reference.insert(id);
  if (reference.empty()) {
    throw Error(ErrorCode::SchemaError, "scene 0 has no parts");
  }
  for (const auto& scene : scenes) {
    std::set<int> ids;
    for (const auto& [id, part] : scene.parts) {
      ids.insert(id);
      if (part.cloud.empty()) {
        throw Error(ErrorCode::EmptyCloud,
                    "part " + std::to_string(id) + " empty in scene " +
                        std::to_string(scene.id));
      }
      if (!part.cloud.valid()) {
        throw Error(ErrorCode::SchemaError,
                    "part " + std::to_string(id) +
                        " has non-finite points in scene " +
                        std::to_string(scene.id));
      }
    }
    if (ids != reference) {
      for (int id : reference) {
        if (!ids.count(id)) {
          throw Error(ErrorCode::InconsistentParts,
                      "part " + std::to_string(id) + " missing from scene " +
                          std::to_string(scene.id));
        }
      }
      for (int id : ids) {
        if (!reference.count(id)) {
          throw Error(ErrorCode::InconsistentParts,
                      "part " + std::to_string(id) + " only appears in scene " +
                          std::to_string(scene.id));
        }
      }
    }
  }
}

namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::SchemaError, where + ": " + what);
}

void require_keys(const json& obj, const std::string& where,
                  const std::set<std::string>& allowed) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) schema_error(where, "unknown key '" + key + "'");
  }
}

double get_number(const json& obj, const std::string& where,
                  const std::string& key) {
  if (!obj.contains(key) || !obj[key].is_number()) {
    schema_error(where, "missing numeric '" + key + "'");
  }
  return obj[key].get<double>();
}

std::filesystem::path resolve(const std::filesystem::path& base,
                              const std::string& rel) {
  std::filesystem::path p(rel);
  return p.is_absolute() ? p : base / p;
}

CameraIntrinsics parse_intrinsics(const json& obj, const std::string& where) {
  if (!obj.is_object()) schema_error(where, "intrinsics must be an object");
  require_keys(obj, where, {"fx", "fy", "cx", "cy", "width", "height"});
  CameraIntrinsics k;
  k.fx = get_number(obj, where, "fx");
  k.fy = get_number(obj, where, "fy");
  k.cx = get_number(obj, where, "cx");
  k.cy = get_number(obj, where, "cy");
  k.width = static_cast<int>(get_number(obj, where, "width"));
  k.height = static_cast<int>(get_number(obj, where, "height"));
  if (!k.valid()) schema_error(where, "intrinsics out of range");
  return k;
}

RigidTransform parse_pose(const json& arr, const std::string& where) {
  if (!arr.is_array() || arr.size() != 16) {
    schema_error(where, "pose must be 16 row-major floats");
  }
  Eigen::Matrix4d m;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      const auto& v = arr[4 * r + c];
      if (!v.is_number()) schema_error(where, "pose entries must be numeric");
      m(r, c) = v.get<double>();
    }
  }
  return RigidTransform::from_matrix(m);
}

Observation load_observation(const json& obj, const std::string& where,
                             int scene_id,
                             const std::filesystem::path& base) {
  if (!obj.is_object()) schema_error(where, "observation must be an object");
  require_keys(obj, where, {"depth", "mask", "pose", "intrinsics"});
  for (const char* key : {"depth", "mask"}) {
    if (!obj.contains(key) || !obj[key].is_string()) {
      schema_error(where, std::string("missing path '") + key + "'");
    }
  }
  if (!obj.contains("pose")) schema_error(where, "missing 'pose'");
  if (!obj.contains("intrinsics")) schema_error(where, "missing 'intrinsics'");

  Observation obs;
  obs.scene_id = scene_id;
  obs.camera_pose = parse_pose(obj["pose"], where + ".pose");
  obs.intrinsics = parse_intrinsics(obj["intrinsics"], where + ".intrinsics");

  const ImageU16 depth = read_pgm16(resolve(base, obj["depth"].get<std::string>()));
  const ImageU8 mask = read_pgm8(resolve(base, obj["mask"].get<std::string>()));
  if (depth.width != obs.intrinsics.width ||
      depth.height != obs.intrinsics.height || mask.width != depth.width ||
      mask.height != depth.height) {
    schema_error(where, "depth/mask dimensions do not match intrinsics");
  }
  obs.depth.resize(depth.pixels.size());
  for (std::size_t i = 0; i < depth.pixels.size(); ++i) {
    obs.depth[i] = depth.pixels[i] / 1000.0;  // millimeters to meters
  }
  obs.part_mask.assign(mask.pixels.begin(), mask.pixels.end());
  return obs;
}

}  // namespace

SceneSet load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MissingFile, path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::SchemaError,
                path.string() + ": invalid JSON: " + e.what());
  }

  const std::filesystem::path base = path.parent_path();
  if (!doc.is_object()) schema_error(path.string(), "manifest must be an object");
  require_keys(doc, path.string(), {"scenes", "voxel_size_m"});
  if (!doc.contains("scenes") || !doc["scenes"].is_array() ||
      doc["scenes"].empty()) {
    schema_error(path.string(), "'scenes' must be a nonempty array");
  }
  double voxel = 0.0;
  bool voxel_given = false;
  if (doc.contains("voxel_size_m")) {
    voxel = get_number(doc, path.string(), "voxel_size_m");
    if (voxel <= 0.0) schema_error(path.string(), "voxel_size_m must be > 0");
    voxel_given = true;
  }

  SceneSet set;
  for (std::size_t si = 0; si < doc["scenes"].size(); ++si) {
    const json& js = doc["scenes"][si];
    const std::string where = path.string() + ".scenes[" + std::to_string(si) + "]";
    if (!js.is_object()) schema_error(where, "scene must be an object");
    require_keys(js, where, {"id", "parts", "observations"});
    if (!js.contains("id") || !js["id"].is_number_integer()) {
      schema_error(where, "missing integer 'id'");
    }

    Scene scene;
    scene.id = js["id"].get<int>();
    if (scene.id < 0) schema_error(where, "scene id must be >= 0");
    bool fused_from_observations = false;

    if (js.contains("parts")) {
      if (!js["parts"].is_object()) schema_error(where, "'parts' must be a map");
      for (const auto& [key, spec] : js["parts"].items()) {
        int part_id = 0;
        try {
          part_id = std::stoi(key);
        } catch (const std::exception&) {
          schema_error(where, "part key '" + key + "' is not an integer");
        }
        if (part_id < 1) schema_error(where, "part ids must be >= 1");
        if (!spec.is_object() || !spec.contains("ply") ||
            !spec["ply"].is_string()) {
          schema_error(where, "part '" + key + "' needs a 'ply' path");
        }
        require_keys(spec, where + ".parts." + key, {"ply"});
        PartObservation part;
        part.part_id = part_id;
        part.scene_id = scene.id;
        part.cloud = read_ply(resolve(base, spec["ply"].get<std::string>()));
        scene.parts.emplace(part_id, std::move(part));
      }
    }

    if (js.contains("observations")) {
      if (!js["observations"].is_array()) {
        schema_error(where, "'observations' must be an array");
      }
      for (std::size_t oi = 0; oi < js["observations"].size(); ++oi) {
        const Observation obs = load_observation(
            js["observations"][oi],
            where + ".observations[" + std::to_string(oi) + "]", scene.id,
            base);
        std::set<int> ids_present;
        for (int id : obs.part_mask) {
          if (id > 0) ids_present.insert(id);
        }
        for (int part_id : ids_present) {
          PointCloud cloud = backproject(obs, part_id);
          auto [it, inserted] = scene.parts.try_emplace(part_id);
          if (inserted) {
            it->second.part_id = part_id;
            it->second.scene_id = scene.id;
          }
          append_cloud(it->second.cloud, cloud);
          fused_from_observations = true;
        }
      }
    }

    if (scene.parts.empty()) {
      schema_error(where, "scene defines neither parts nor observations");
    }

    // Fused multi-view clouds are always downsampled to bound registration
    // cost; plain PLY scenes only when the manifest asks for it.
    if (fused_from_observations || voxel_given) {
      const double leaf = voxel_given ? voxel : kDefaultVoxelM;
      for (auto& [id, part] : scene.parts) {
        part.cloud = voxel_downsample(part.cloud, leaf);
      }
    }
    set.scenes.push_back(std::move(scene));
  }

  std::sort(set.scenes.begin(), set.scenes.end(),
            [](const Scene& a, const Scene& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < set.scenes.size(); ++i) {
    if (set.scenes[i].id == set.scenes[i - 1].id) {
      schema_error(path.string(),
                   "duplicate scene id " + std::to_string(set.scenes[i].id));
    }
  }
  set.validate();
  return set;
}

}  // namespace kinfit
