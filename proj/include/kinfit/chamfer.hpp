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

#ifndef KINFIT_CHAMFER_HPP
#define KINFIT_CHAMFER_HPP

#include "kinfit/kdtree.hpp"
#include "kinfit/point_cloud.hpp"

namespace kinfit {

/// Chamfer distances in meters. Means of plain Euclidean nearest-neighbor
/// distances (not squared), so values stay in meters and thresholds on them
/// are interpretable.
struct ChamferReport {
  double symmetric_mean = 0.0;  // (forward_mean + backward_mean) / 2
  double forward_mean = 0.0;    // a -> b
  double backward_mean = 0.0;   // b -> a
};

ChamferReport chamfer(const PointCloud& a, const PointCloud& b);

/// Variant reusing a prebuilt index over `b` for the forward direction.
double directed_chamfer(const PointCloud& a, const NearestNeighborIndex& b);

}  // namespace kinfit

#endif  // KINFIT_CHAMFER_HPP
