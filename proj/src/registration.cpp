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

#include "kinfit/registration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/SVD>

#include "kinfit/error.hpp"
#include "kinfit/kdtree.hpp"
#include "kinfit/parallel.hpp"
#include "kinfit/rng.hpp"

namespace kinfit {

const char* registration_method_name(RegistrationMethod method) {
  switch (method) {
    case RegistrationMethod::IcpOnly: return "IcpOnly";
    case RegistrationMethod::RobustOnly: return "RobustOnly";
    case RegistrationMethod::IcpThenRobust: return "IcpThenRobust";
  }
  return "Unknown";
}

RigidTransform fit_alignment(const std::vector<Eigen::Vector3d>& source,
                             const std::vector<Eigen::Vector3d>& target,
                             const std::vector<double>* weights) {
  if (source.size() != target.size() || source.size() < 3) {
    throw Error(ErrorCode::DegenerateCloud,
                "alignment needs >= 3 paired points");
  }

  double wsum = 0.0;
  Eigen::Vector3d src_mean = Eigen::Vector3d::Zero();
  Eigen::Vector3d tgt_mean = Eigen::Vector3d::Zero();
  for (std::size_t i = 0; i < source.size(); ++i) {
    const double w = weights ? (*weights)[i] : 1.0;
    wsum += w;
    src_mean += w * source[i];
    tgt_mean += w * target[i];
  }
  if (wsum <= 1e-12) {
    throw Error(ErrorCode::DegenerateCloud, "all correspondence weights zero");
  }
  src_mean /= wsum;
  tgt_mean /= wsum;

  Eigen::Matrix3d cross = Eigen::Matrix3d::Zero();
  for (std::size_t i = 0; i < source.size(); ++i) {
    const double w = weights ? (*weights)[i] : 1.0;
    cross += w * (source[i] - src_mean) * (target[i] - tgt_mean).transpose();
  }

  Eigen::JacobiSVD<Eigen::Matrix3d> svd(
      cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Vector3d sv = svd.singularValues();
  // rotation is only determined when at least two directions have support
  if (sv(0) <= 1e-15 || sv(1) <= 1e-9 * sv(0)) {
    throw Error(ErrorCode::DegenerateCloud,
                "rank-deficient cross-covariance (collinear correspondences)");
  }

  Eigen::Matrix3d rot = svd.matrixV() * svd.matrixU().transpose();
  if (rot.determinant() < 0.0) {
    Eigen::Matrix3d v = svd.matrixV();
    v.col(2) *= -1.0;
    rot = v * svd.matrixU().transpose();
  }
  const Eigen::Quaterniond q(rot);
  return RigidTransform(q, tgt_mean - q * src_mean);
}

namespace {

struct Correspondences {
  std::vector<Eigen::Vector3d> source;
  std::vector<Eigen::Vector3d> target;
};

double rmse_of(const RigidTransform& t, const Correspondences& c) {
  double sum = 0.0;
  for (std::size_t i = 0; i < c.source.size(); ++i) {
    sum += (t * c.source[i] - c.target[i]).squaredNorm();
  }
  return std::sqrt(sum / static_cast<double>(c.source.size()));
}

void check_inputs(const PointCloud& source, const PointCloud& target,
                  const RegistrationParams& params) {
  if (!params.valid()) {
    throw Error(ErrorCode::SchemaError, "invalid registration parameters");
  }
  if (source.size() < 3 || target.size() < 3) {
    throw Error(ErrorCode::DegenerateCloud,
                "registration needs >= 3 points per cloud");
  }
}

}  // namespace

RegistrationResult icp(const PointCloud& source, const PointCloud& target,
                       const RigidTransform& init,
                       const RegistrationParams& params) {
  check_inputs(source, target, params);
  const NearestNeighborIndex index(target);

  RegistrationResult result;
  result.method = RegistrationMethod::IcpOnly;
  result.transform = init;

  double prev_rmse = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < params.max_icp_iterations; ++iter) {
    Correspondences corr;
    corr.source.reserve(source.size());
    corr.target.reserve(source.size());
    for (const auto& p : source.points) {
      const auto nn = index.nearest(result.transform * p);
      if (nn.distance <= params.max_correspondence_dist) {
        corr.source.push_back(p);
        corr.target.push_back(index.point(nn.index));
      }
    }
    if (corr.source.size() < 3) {
      throw Error(ErrorCode::NoCorrespondences,
                  "only " + std::to_string(corr.source.size()) +
                      " correspondences within " +
                      std::to_string(params.max_correspondence_dist) + " m");
    }

    result.transform = fit_alignment(corr.source, corr.target);
    const double rmse = rmse_of(result.transform, corr);
    result.rmse_history.push_back(rmse);
    result.rmse = rmse;
    result.inlier_count = static_cast<int>(corr.source.size());

    if (std::abs(prev_rmse - rmse) < params.convergence_eps) {
      result.converged = true;
      break;
    }
    prev_rmse = rmse;
  }
  return result;
}

RegistrationResult robust_refine(const PointCloud& source,
                                 const PointCloud& target,
                                 const RigidTransform& init,
                                 const RegistrationParams& params) {
  check_inputs(source, target, params);
  const NearestNeighborIndex index(target);

  // correspondences are fixed once, under the initialization
  Correspondences corr;
  corr.source.reserve(source.size());
  corr.target.reserve(source.size());
  for (const auto& p : source.points) {
    const auto nn = index.nearest(init * p);
    corr.source.push_back(p);
    corr.target.push_back(index.point(nn.index));
  }
  const std::size_t n = corr.source.size();

  const double bound2 = params.robust_noise_bound * params.robust_noise_bound;
  std::vector<double> residual2(n);
  double max_r2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    residual2[i] = (init * corr.source[i] - corr.target[i]).squaredNorm();
    max_r2 = std::max(max_r2, residual2[i]);
  }

  RegistrationResult result;
  result.method = RegistrationMethod::RobustOnly;
  result.transform = init;

  std::vector<double> weights(n, 1.0);
  // mu starts near-convex and anneals toward exact truncated least squares
  double mu = max_r2 > bound2 / 2.0 + 1e-300
                  ? bound2 / (2.0 * max_r2 - bound2)
                  : std::numeric_limits<double>::infinity();
  bool weights_binary = !std::isfinite(mu);  // every residual already inlier

  for (int iter = 0; iter < params.max_gnc_iterations; ++iter) {
    try {
      result.transform = fit_alignment(corr.source, corr.target, &weights);
    } catch (const Error& e) {
      const double max_w = *std::max_element(weights.begin(), weights.end());
      if (e.code() == ErrorCode::DegenerateCloud && max_w < 0.5) {
        // support collapsed because nothing fits within the noise bound
        throw Error(ErrorCode::AllOutliers,
                    "correspondence weights collapsed below 0.5 under a "
                    "noise bound of " +
                        std::to_string(params.robust_noise_bound) + " m");
      }
      throw;
    }

    double sum_r2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      residual2[i] =
          (result.transform * corr.source[i] - corr.target[i]).squaredNorm();
      sum_r2 += weights[i] * residual2[i];
    }
    result.rmse_history.push_back(std::sqrt(sum_r2 / static_cast<double>(n)));

    if (weights_binary) {
      result.converged = true;
      break;
    }

    double nonbinary = 0.0;
    double max_weight = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double upper = (mu + 1.0) / mu * bound2;
      const double lower = mu / (mu + 1.0) * bound2;
      if (residual2[i] >= upper) {
        weights[i] = 0.0;
      } else if (residual2[i] <= lower) {
        weights[i] = 1.0;
      } else {
        weights[i] = params.robust_noise_bound *
                         std::sqrt(mu * (mu + 1.0) / residual2[i]) -
                     mu;
        weights[i] = std::clamp(weights[i], 0.0, 1.0);
      }
      nonbinary += std::min(weights[i], 1.0 - weights[i]);
      max_weight = std::max(max_weight, weights[i]);
    }
    if (max_weight < 0.5 && nonbinary < 1e-6) {
      throw Error(ErrorCode::AllOutliers,
                  "every correspondence exceeds the noise bound of " +
                      std::to_string(params.robust_noise_bound) + " m");
    }
    if (nonbinary < 1e-6) {
      weights_binary = true;  // one more fit with the binary weights, then stop
    }
    mu *= params.gnc_mu_update_factor;
  }

  // inliers hold weight >= 0.5; by construction their residual is within
  // the noise bound once the weights are binary
  double inlier_sum_r2 = 0.0;
  int inliers = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (weights[i] >= 0.5) {
      inlier_sum_r2 += residual2[i];
      ++inliers;
    }
  }
  if (inliers == 0) {
    throw Error(ErrorCode::AllOutliers,
                "no correspondence within the noise bound of " +
                    std::to_string(params.robust_noise_bound) + " m");
  }
  result.inlier_count = inliers;
  result.rmse = std::sqrt(inlier_sum_r2 / static_cast<double>(inliers));
  return result;
}

namespace {

double bounding_diameter(const PointCloud& cloud) {
  Eigen::Vector3d lo = cloud.points.front();
  Eigen::Vector3d hi = lo;
  for (const auto& p : cloud.points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  return (hi - lo).norm();
}

// Centroid shift plus a coarse-to-fine gate schedule. Large relative
// motions (a jaw swinging 60 degrees) put most points outside the final
// correspondence gate, so the first rounds run with gates scaled to the
// cloud diameter before the final-gate solve.
RigidTransform coarse_init(const PointCloud& source, const PointCloud& target,
                           const RigidTransform& init,
                           const RegistrationParams& params) {
  RigidTransform t = RigidTransform::from_translation(
                         target.centroid() -
                         transform_cloud(init, source).centroid()) *
                     init;
  const double diameter =
      std::max(bounding_diameter(source), bounding_diameter(target));
  RegistrationParams stage = params;
  stage.max_icp_iterations = std::min(params.max_icp_iterations, 20);
  for (const double gate : {diameter, diameter / 4.0}) {
    if (gate <= params.max_correspondence_dist) break;
    stage.max_correspondence_dist = gate;
    try {
      t = icp(source, target, t, stage).transform;
    } catch (const Error&) {
      // a failed coarse stage leaves the previous estimate in place
    }
  }
  return t;
}

}  // namespace

RegistrationResult register_pair(const PointCloud& source,
                                 const PointCloud& target,
                                 const RigidTransform& init,
                                 const RegistrationParams& params) {
  const RigidTransform warm = coarse_init(source, target, init, params);
  const RegistrationResult coarse = icp(source, target, warm, params);
  RegistrationResult result =
      robust_refine(source, target, coarse.transform, params);
  result.method = RegistrationMethod::IcpThenRobust;
  return result;
}

std::vector<RegistrationResult> register_part_across_scenes(
    const SceneSet& set, int part_id, const RegistrationParams& params,
    unsigned jobs) {
  if (set.scenes.empty()) {
    throw Error(ErrorCode::MissingScene, "scene set is empty");
  }
  // validates presence of the part in every scene up front
  for (std::size_t s = 0; s < set.scenes.size(); ++s) {
    (void)set.cloud(s, part_id);
  }

  const PointCloud& reference = set.cloud(0, part_id);
  std::vector<RegistrationResult> results(set.scenes.size());
  results[0].transform = RigidTransform::identity();
  results[0].method = RegistrationMethod::IcpThenRobust;
  results[0].converged = true;
  results[0].inlier_count = static_cast<int>(reference.size());

  parallel_for(set.scenes.size() - 1, jobs, [&](std::size_t k) {
    const std::size_t s = k + 1;
    try {
      results[s] = register_pair(reference, set.cloud(s, part_id),
                                 RigidTransform::identity(), params);
    } catch (const Error& e) {
      throw Error(e.code(), "part " + std::to_string(part_id) + " scene " +
                                std::to_string(set.scenes[s].id) + ": " +
                                e.what());
    }
  });
  return results;
}

std::vector<std::vector<RegistrationResult>> register_all_parts(
    const SceneSet& set, const RegistrationParams& params, unsigned jobs) {
  const std::vector<int> ids = set.part_ids();
  std::vector<std::vector<RegistrationResult>> all(ids.size());
  // parallelism lives inside each part's scene loop; parts run sequentially
  // so error ordering is stable
  for (std::size_t i = 0; i < ids.size(); ++i) {
    all[i] = register_part_across_scenes(set, ids[i], params, jobs);
  }
  return all;
}

std::vector<AblationRow> ablate_registration(const SceneSet& set,
                                             const RegistrationParams& params,
                                             const AblationParams& bench) {
  const std::vector<int> ids = set.part_ids();
  const RegistrationMethod methods[] = {RegistrationMethod::IcpOnly,
                                        RegistrationMethod::RobustOnly,
                                        RegistrationMethod::IcpThenRobust};
  std::vector<AblationRow> rows(3);
  for (int m = 0; m < 3; ++m) rows[m].method = methods[m];

  int cases = 0;
  for (std::size_t pi = 0; pi < ids.size(); ++pi) {
    const PointCloud& cloud = set.cloud(0, ids[pi]);
    Eigen::Vector3d lo = cloud.points.front();
    Eigen::Vector3d hi = lo;
    for (const auto& p : cloud.points) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
    const Eigen::Vector3d mid = (lo + hi) / 2.0;
    const Eigen::Vector3d half = 1.5 * (hi - lo) / 2.0;

    for (int trial = 0; trial < bench.trials_per_part; ++trial) {
      Rng rng(Rng::mix(bench.seed, (pi << 16) | static_cast<uint64_t>(trial)));
      const Eigen::Vector3d axis = rng.unit_vector();
      const double angle = rng.uniform(0.25, 1.0) * bench.rotation_rad;
      const Eigen::Vector3d t = rng.uniform_box(
          -Eigen::Vector3d::Constant(bench.translation_m),
          Eigen::Vector3d::Constant(bench.translation_m));
      const RigidTransform truth =
          RigidTransform::from_axis_angle(axis, angle, t);

      PointCloud corrupted = transform_cloud(truth, cloud);
      for (auto& p : corrupted.points) {
        if (rng.uniform(0.0, 1.0) < bench.outlier_fraction) {
          p = rng.uniform_box(mid - half, mid + half);
        } else {
          p += rng.gaussian_vector(bench.noise_sigma_m);
        }
      }

      ++cases;
      for (int m = 0; m < 3; ++m) {
        RigidTransform estimate;  // identity: the failure fallback
        bool failed = false;
        try {
          switch (methods[m]) {
            case RegistrationMethod::IcpOnly:
              estimate = icp(cloud, corrupted, RigidTransform::identity(),
                             params).transform;
              break;
            case RegistrationMethod::RobustOnly:
              estimate = robust_refine(cloud, corrupted,
                                       RigidTransform::identity(), params)
                             .transform;
              break;
            case RegistrationMethod::IcpThenRobust:
              estimate = register_pair(cloud, corrupted,
                                       RigidTransform::identity(), params)
                             .transform;
              break;
          }
        } catch (const Error&) {
          failed = true;
        }
        const double rot = estimate.rotation_distance(truth);
        const double trans = estimate.translation_distance(truth);
        rows[m].mean_rotation_error_rad += rot;
        rows[m].mean_translation_error_m += trans;
        rows[m].mean_combined_error += rot + trans;
        rows[m].failures += failed ? 1 : 0;
      }
    }
  }

  if (cases > 0) {
    for (auto& row : rows) {
      row.mean_rotation_error_rad /= cases;
      row.mean_translation_error_m /= cases;
      row.mean_combined_error /= cases;
    }
  }
  return rows;
}

}  // namespace kinfit
