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

#include "kinfit/chamfer.hpp"

#include "kinfit/error.hpp"

namespace kinfit {

double directed_chamfer(const PointCloud& a, const NearestNeighborIndex& b) {
  if (a.empty()) {
    throw Error(ErrorCode::EmptyCloud, "chamfer source cloud is empty");
  }
  double sum = 0.0;
  for (const auto& p : a.points) sum += b.nearest(p).distance;
  return sum / static_cast<double>(a.size());
}

ChamferReport chamfer(const PointCloud& a, const PointCloud& b) {
  if (a.empty() || b.empty()) {
    throw Error(ErrorCode::EmptyCloud, "chamfer requires two nonempty clouds");
  }
  NearestNeighborIndex index_a(a);
  NearestNeighborIndex index_b(b);
  ChamferReport report;
  report.forward_mean = directed_chamfer(a, index_b);
  report.backward_mean = directed_chamfer(b, index_a);
  report.symmetric_mean = (report.forward_mean + report.backward_mean) / 2.0;
  return report;
}

}  // namespace kinfit
