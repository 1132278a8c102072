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

#include <cmath>
#include <random>

#include <doctest.h>

#include "kinfit/chamfer.hpp"
#include "kinfit/error.hpp"
#include "kinfit/geometry.hpp"
#include "kinfit/kdtree.hpp"
#include "kinfit/point_cloud.hpp"
#include "test_helpers.hpp"

using namespace kinfit;
using namespace kinfit::testing;

namespace {
const double kPi = 3.14159265358979323846;
}

TEST_CASE("compose: identity and inverse") {
  const RigidTransform id;
  CHECK(id.compose(id).is_approx(id, 1e-12));

  std::mt19937_64 rng(101);
  for (int i = 0; i < 20; ++i) {
    const RigidTransform t = random_transform(rng, kPi, 2.0);
    CHECK(t.compose(t.inverse()).is_approx(RigidTransform::identity(), 1e-9));
    CHECK(t.inverse().compose(t).is_approx(RigidTransform::identity(), 1e-9));
    CHECK(std::abs(t.rotation().norm() - 1.0) < 1e-9);
  }
}

TEST_CASE("compose: two quarter turns make a half turn") {
  const RigidTransform rz90 =
      RigidTransform::from_axis_angle(Eigen::Vector3d::UnitZ(), kPi / 2.0);
  const Eigen::Vector3d p = rz90.compose(rz90) * Eigen::Vector3d(1, 0, 0);
  CHECK(p.isApprox(Eigen::Vector3d(-1, 0, 0), 1e-12));
}

TEST_CASE("quaternion canonicalized to w >= 0") {
  const Eigen::Quaterniond q(-std::sqrt(0.5), 0.0, 0.0, -std::sqrt(0.5));
  const RigidTransform t(q, Eigen::Vector3d::Zero());
  CHECK(t.rotation().w() >= 0.0);
  CHECK(t.rotation_distance(RigidTransform(q.conjugate().conjugate(),
                                           Eigen::Vector3d::Zero())) < 1e-12);
}

TEST_CASE("quaternion-matrix round trip") {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 50; ++i) {
    const RigidTransform t = random_transform(rng, kPi, 1.0);
    const RigidTransform back = RigidTransform::from_matrix(t.matrix());
    CHECK(back.rotation_distance(t) < 1e-9);
    CHECK(back.translation_distance(t) < 1e-9);
  }
}

TEST_CASE("transform_cloud basics") {
  PointCloud c;
  c.append({0, 0, 0}, 3);

  SUBCASE("identity is a no-op") {
    const PointCloud out = transform_cloud(RigidTransform::identity(), c);
    CHECK(out.points[0].isApprox(c.points[0], 0.0));
    CHECK(out.ids == c.ids);
  }
  SUBCASE("pure translation") {
    const PointCloud out = transform_cloud(
        RigidTransform::from_translation({0, 0, 1}), c);
    CHECK(out.points[0].isApprox(Eigen::Vector3d(0, 0, 1), 1e-15));
  }
  SUBCASE("quarter turn about z") {
    PointCloud unit_x;
    unit_x.append({1, 0, 0});
    const PointCloud out = transform_cloud(
        RigidTransform::from_axis_angle(Eigen::Vector3d::UnitZ(), kPi / 2.0),
        unit_x);
    CHECK((out.points[0] - Eigen::Vector3d(0, 1, 0)).norm() < 1e-12);
  }
}

TEST_CASE("kd-tree equals linear scan on 1000 random queries") {
  std::mt19937_64 rng(2024);
  PointCloud cloud = random_cloud(rng, 500);
  // Duplicated points force distance ties; the lowest index must win.
  for (int i = 0; i < 50; ++i) cloud.append(cloud.points[i * 7]);
  NearestNeighborIndex index(cloud);

  for (int i = 0; i < 1000; ++i) {
    Eigen::Vector3d q = random_point(rng, -0.6, 0.6);
    if (i % 5 == 0) q = cloud.points[i % cloud.size()];  // exact hits
    const auto got = index.nearest(q);
    const auto want = brute_force_nearest(cloud, q);
    CHECK(got.index == want.first);
    CHECK(got.distance == want.second);
  }
}

TEST_CASE("chamfer trivial cases") {
  PointCloud a;
  a.append({0, 0, 0});
  PointCloud b;
  b.append({0, 0, 2});

  SUBCASE("self distance is zero") {
    std::mt19937_64 rng(5);
    const PointCloud c = random_cloud(rng, 64);
    const ChamferReport r = chamfer(c, c);
    CHECK(r.symmetric_mean == 0.0);
    CHECK(r.forward_mean == 0.0);
    CHECK(r.backward_mean == 0.0);
  }
  SUBCASE("single point pair") {
    const ChamferReport r = chamfer(a, b);
    CHECK(r.symmetric_mean == doctest::Approx(2.0));
  }
  SUBCASE("empty cloud rejected") {
    CHECK_THROWS_AS(chamfer(PointCloud{}, a), Error);
  }
}

TEST_CASE("chamfer equals brute force oracle, 20 random cases") {
  for (int seed = 7; seed < 27; ++seed) {
    std::mt19937_64 rng(static_cast<uint64_t>(seed));
    const PointCloud a = random_cloud(rng, 100);
    const PointCloud b = random_cloud(rng, 100);
    const ChamferReport r = chamfer(a, b);
    const double fwd = brute_force_directed_chamfer(a, b);
    const double bwd = brute_force_directed_chamfer(b, a);
    CHECK(r.forward_mean == fwd);
    CHECK(r.backward_mean == bwd);
    CHECK(r.symmetric_mean == (fwd + bwd) / 2.0);
  }
}

TEST_CASE("chamfer symmetry and rigid invariance") {
  std::mt19937_64 rng(13);
  const PointCloud a = random_cloud(rng, 120);
  const PointCloud b = random_cloud(rng, 80);

  const ChamferReport ab = chamfer(a, b);
  const ChamferReport ba = chamfer(b, a);
  CHECK(ab.symmetric_mean == ba.symmetric_mean);

  for (int i = 0; i < 5; ++i) {
    const RigidTransform t = random_transform(rng, kPi, 1.5);
    const ChamferReport moved =
        chamfer(transform_cloud(t, a), transform_cloud(t, b));
    CHECK(moved.symmetric_mean ==
          doctest::Approx(ab.symmetric_mean).epsilon(1e-9));
  }
}

TEST_CASE("voxel downsample is deterministic and bounded") {
  std::mt19937_64 rng(99);
  PointCloud cloud = random_cloud(rng, 400, 0.05);
  const PointCloud down = voxel_downsample(cloud, 0.02);
  CHECK(down.size() <= cloud.size());
  CHECK(down.size() > 0);
  const PointCloud again = voxel_downsample(cloud, 0.02);
  REQUIRE(again.size() == down.size());
  for (std::size_t i = 0; i < down.size(); ++i) {
    CHECK(down.points[i] == again.points[i]);
  }
  // leaf <= 0 passes through untouched
  CHECK(voxel_downsample(cloud, 0.0).size() == cloud.size());
}

TEST_CASE("subsample keeps at least min_points") {
  std::mt19937_64 rng(3);
  const PointCloud cloud = random_cloud(rng, 1000);
  const PointCloud s = subsample(cloud, 0.05, 50);
  CHECK(s.size() == 50);
  const PointCloud tiny = subsample(cloud, 0.001, 50);
  CHECK(tiny.size() == 50);
  const PointCloud all = subsample(cloud, 2.0, 1);
  CHECK(all.size() == cloud.size());
}
