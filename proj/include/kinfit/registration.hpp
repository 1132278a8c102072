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

#ifndef KINFIT_REGISTRATION_HPP
#define KINFIT_REGISTRATION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "kinfit/geometry.hpp"
#include "kinfit/ingest.hpp"
#include "kinfit/point_cloud.hpp"

namespace kinfit {

struct RegistrationParams {
  int max_icp_iterations = 50;
  double convergence_eps = 1e-6;          // change in RMSE, meters
  double max_correspondence_dist = 0.05;  // ICP gating, meters
  double robust_noise_bound = 0.01;       // TLS inlier bound, meters
  double gnc_mu_update_factor = 1.4;
  int max_gnc_iterations = 100;

  bool valid() const {
    return max_icp_iterations > 0 && convergence_eps > 0.0 &&
           max_correspondence_dist > 0.0 && robust_noise_bound > 0.0 &&
           gnc_mu_update_factor > 1.0 && max_gnc_iterations > 0;
  }
};

enum class RegistrationMethod { IcpOnly, RobustOnly, IcpThenRobust };

const char* registration_method_name(RegistrationMethod method);

struct RegistrationResult {
  RigidTransform transform;  // maps the source cloud onto the target
  double rmse = 0.0;         // meters, over the final correspondence/inlier set
  int inlier_count = 0;
  bool converged = false;
  RegistrationMethod method = RegistrationMethod::IcpOnly;
  std::vector<double> rmse_history;  // per-iteration diagnostics
};

/// Weighted least-squares SE(3) alignment of paired points via the
/// cross-covariance SVD with determinant correction. Exact on exact
/// correspondences; rotation determinant is always +1.
/// Throws DegenerateCloud when the weighted cross-covariance is
/// rank-deficient (collinear or near-empty support).
RigidTransform fit_alignment(const std::vector<Eigen::Vector3d>& source,
                             const std::vector<Eigen::Vector3d>& target,
                             const std::vector<double>* weights = nullptr);

/// Point-to-point ICP: nearest-neighbor correspondences gated by
/// max_correspondence_dist, closed-form SVD fit, stop on RMSE change below
/// convergence_eps or iteration limit.
RegistrationResult icp(const PointCloud& source, const PointCloud& target,
                       const RigidTransform& init,
                       const RegistrationParams& params);

/// Truncated-least-squares refinement via graduated non-convexity.
/// Correspondences are fixed by nearest neighbor under `init`; per-point
/// weights anneal from soft to near-binary as the control parameter mu
/// grows by gnc_mu_update_factor per outer iteration. Points whose final
/// weight is below 0.5 are outliers and excluded from inlier_count.
RegistrationResult robust_refine(const PointCloud& source,
                                 const PointCloud& target,
                                 const RigidTransform& init,
                                 const RegistrationParams& params);

/// The pipeline default: ICP from `init`, then robust refinement from the
/// ICP estimate.
RegistrationResult register_pair(const PointCloud& source,
                                 const PointCloud& target,
                                 const RigidTransform& init,
                                 const RegistrationParams& params);

/// Registers one part across every scene against scene 0. Entry s maps the
/// part's scene-0 cloud onto its scene-s cloud; entry 0 is the identity.
/// Scenes solve independently (optionally in parallel); failures carry the
/// offending scene id in the message.
std::vector<RegistrationResult> register_part_across_scenes(
    const SceneSet& set, int part_id, const RegistrationParams& params,
    unsigned jobs = 1);

/// Registers every part. Outer index follows set.part_ids() order.
std::vector<std::vector<RegistrationResult>> register_all_parts(
    const SceneSet& set, const RegistrationParams& params, unsigned jobs = 1);

/// Corrupted-registration benchmark: each part's scene-0 cloud is displaced
/// by a known random transform, perturbed with Gaussian noise, and a
/// fraction of points replaced by box outliers; every method then recovers
/// the transform from an identity-initialized solve. A method failure
/// scores as if it had returned its initialization.
struct AblationParams {
  int trials_per_part = 5;
  double rotation_rad = 0.35;
  double translation_m = 0.05;
  double noise_sigma_m = 0.002;
  double outlier_fraction = 0.2;
  uint64_t seed = 0;
};

struct AblationRow {
  RegistrationMethod method = RegistrationMethod::IcpOnly;
  double mean_rotation_error_rad = 0.0;
  double mean_translation_error_m = 0.0;
  double mean_combined_error = 0.0;  // rotation + translation
  int failures = 0;
};

std::vector<AblationRow> ablate_registration(const SceneSet& set,
                                             const RegistrationParams& params,
                                             const AblationParams& bench);

}  // namespace kinfit

#endif  // KINFIT_REGISTRATION_HPP
