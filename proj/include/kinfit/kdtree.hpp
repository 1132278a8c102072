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

#ifndef KINFIT_KDTREE_HPP
#define KINFIT_KDTREE_HPP

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "kinfit/point_cloud.hpp"

namespace kinfit {

/// Balanced k-d tree over the points of a cloud. Built once, read-only
/// afterwards; concurrent queries are safe.
///
/// Nearest-neighbor results match an exhaustive linear scan exactly,
/// including the tie rule: equal distances resolve to the lowest point
/// index. Pruning is therefore strict, never discarding an equal-distance
/// subtree.
class NearestNeighborIndex {
 public:
  struct Result {
    std::size_t index = 0;
    double distance = 0.0;  // Euclidean, meters
  };

  explicit NearestNeighborIndex(const PointCloud& cloud);

  Result nearest(const Eigen::Vector3d& query) const;

  std::size_t size() const { return points_.size(); }
  const Eigen::Vector3d& point(std::size_t i) const { return points_[i]; }

 private:
  struct Node {
    int axis = -1;           // -1 marks a leaf bucket
    double split = 0.0;
    std::size_t left = 0;    // child node ids, or [begin,end) into order_
    std::size_t right = 0;
    std::size_t begin = 0;
    std::size_t end = 0;
  };

  std::size_t build(std::size_t begin, std::size_t end);
  void search(std::size_t node_id, const Eigen::Vector3d& query,
              double& best_d2, std::size_t& best_index) const;

  std::vector<Eigen::Vector3d> points_;
  std::vector<std::size_t> order_;
  std::vector<Node> nodes_;
  std::size_t root_ = 0;
};

}  // namespace kinfit

#endif  // KINFIT_KDTREE_HPP
