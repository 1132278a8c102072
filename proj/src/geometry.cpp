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

#include "kinfit/geometry.hpp"

#include <cmath>
#include <vector>

namespace kinfit {

double rotation_angle(const Eigen::Quaterniond& q) {
  return 2.0 * std::atan2(q.vec().norm(), std::abs(q.w()));
}

Eigen::Vector3d rotation_log(const Eigen::Quaterniond& q) {
  Eigen::Quaterniond qc = q;
  if (qc.w() < 0.0) qc.coeffs() = -qc.coeffs();
  const double vnorm = qc.vec().norm();
  const double angle = 2.0 * std::atan2(vnorm, qc.w());
  if (vnorm < 1e-300) return Eigen::Vector3d::Zero();
  return (angle / vnorm) * qc.vec();
}

Eigen::Quaterniond chordal_mean(const std::vector<Eigen::Quaterniond>& qs) {
  if (qs.empty()) return Eigen::Quaterniond::Identity();
  Eigen::Vector4d acc = Eigen::Vector4d::Zero();
  for (const auto& q : qs) {
    Eigen::Vector4d c = q.coeffs();
    if (c.dot(qs.front().coeffs()) < 0.0) c = -c;
    acc += c;
  }
  Eigen::Quaterniond mean(acc(3), acc(0), acc(1), acc(2));
  mean.normalize();
  if (mean.w() < 0.0) mean.coeffs() = -mean.coeffs();
  return mean;
}

}  // namespace kinfit
