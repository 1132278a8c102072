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

#ifndef KINFIT_GEOMETRY_HPP
#define KINFIT_GEOMETRY_HPP

#include <Eigen/Dense>
#include <Eigen/Geometry>

namespace kinfit {

/// SE(3) element stored as a unit quaternion plus a translation in meters.
/// The quaternion is renormalized and canonicalized to w >= 0 by every
/// constructor and composition, so value comparison is well defined.
class RigidTransform {
 public:
  RigidTransform()
      : rotation_(Eigen::Quaterniond::Identity()),
        translation_(Eigen::Vector3d::Zero()) {}

  RigidTransform(const Eigen::Quaterniond& rotation,
                 const Eigen::Vector3d& translation)
      : rotation_(rotation), translation_(translation) {
    normalize();
  }

  static RigidTransform identity() { return RigidTransform(); }

  static RigidTransform from_translation(const Eigen::Vector3d& t) {
    return RigidTransform(Eigen::Quaterniond::Identity(), t);
  }

  static RigidTransform from_rotation(const Eigen::Quaterniond& q) {
    return RigidTransform(q, Eigen::Vector3d::Zero());
  }

  static RigidTransform from_axis_angle(const Eigen::Vector3d& unit_axis,
                                        double angle_rad,
                                        const Eigen::Vector3d& t =
                                            Eigen::Vector3d::Zero()) {
    return RigidTransform(
        Eigen::Quaterniond(Eigen::AngleAxisd(angle_rad, unit_axis)), t);
  }

  /// Rotation by `angle_rad` about the line with direction `unit_axis`
  /// passing through `point`.
  static RigidTransform about_line(const Eigen::Vector3d& unit_axis,
                                   const Eigen::Vector3d& point,
                                   double angle_rad) {
    Eigen::Quaterniond q(Eigen::AngleAxisd(angle_rad, unit_axis));
    return RigidTransform(q, point - q * point);
  }

  static RigidTransform from_matrix(const Eigen::Matrix4d& m) {
    Eigen::Matrix3d r = m.block<3, 3>(0, 0);
    return RigidTransform(Eigen::Quaterniond(r), m.block<3, 1>(0, 3));
  }

  const Eigen::Quaterniond& rotation() const { return rotation_; }
  const Eigen::Vector3d& translation() const { return translation_; }
  Eigen::Matrix3d rotation_matrix() const { return rotation_.toRotationMatrix(); }

  Eigen::Matrix4d matrix() const {
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    m.block<3, 3>(0, 0) = rotation_.toRotationMatrix();
    m.block<3, 1>(0, 3) = translation_;
    return m;
  }

  /// Applies b then *this.
  RigidTransform compose(const RigidTransform& b) const {
    return RigidTransform(rotation_ * b.rotation_,
                          rotation_ * b.translation_ + translation_);
  }

  RigidTransform operator*(const RigidTransform& b) const { return compose(b); }

  Eigen::Vector3d operator*(const Eigen::Vector3d& p) const {
    return rotation_ * p + translation_;
  }

  RigidTransform inverse() const {
    Eigen::Quaterniond qi = rotation_.conjugate();
    return RigidTransform(qi, -(qi * translation_));
  }

  /// Geodesic rotation distance to `other`, radians in [0, pi].
  double rotation_distance(const RigidTransform& other) const {
    Eigen::Quaterniond d = rotation_.conjugate() * other.rotation_;
    return 2.0 * std::atan2(d.vec().norm(), std::abs(d.w()));
  }

  double translation_distance(const RigidTransform& other) const {
    return (translation_ - other.translation_).norm();
  }

  bool is_approx(const RigidTransform& other, double tol = 1e-9) const {
    return rotation_distance(other) <= tol &&
           translation_distance(other) <= tol;
  }

 private:
  void normalize() {
    rotation_.normalize();
    if (rotation_.w() < 0.0) {
      rotation_.coeffs() = -rotation_.coeffs();
    }
  }

  Eigen::Quaterniond rotation_;
  Eigen::Vector3d translation_;
};

/// Rotation angle of `q`, radians in [0, pi].
double rotation_angle(const Eigen::Quaterniond& q);

/// so(3) log: axis * angle, with angle in [0, pi].
Eigen::Vector3d rotation_log(const Eigen::Quaterniond& q);

/// Chordal mean of rotations: sign-align every quaternion against the first,
/// average coefficients, renormalize. Deterministic and adequate for the
/// small pose sets handled here.
Eigen::Quaterniond chordal_mean(const std::vector<Eigen::Quaterniond>& qs);

}  // namespace kinfit

#endif  // KINFIT_GEOMETRY_HPP
