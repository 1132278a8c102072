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

#include "kinfit/kdtree.hpp"

#include <algorithm>
#include <limits>

#include "kinfit/error.hpp"

namespace kinfit {

namespace {
constexpr std::size_t kLeafSize = 16;
}

NearestNeighborIndex::NearestNeighborIndex(const PointCloud& cloud)
    : points_(cloud.points) {
  if (points_.empty()) {
    throw Error(ErrorCode::EmptyCloud, "cannot index an empty cloud");
  }
  order_.resize(points_.size());
  for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = i;
  nodes_.reserve(2 * points_.size() / kLeafSize + 2);
  root_ = build(0, points_.size());
}

std::size_t NearestNeighborIndex::build(std::size_t begin, std::size_t end) {
  const std::size_t node_id = nodes_.size();
  nodes_.emplace_back();

  if (end - begin <= kLeafSize) {
    nodes_[node_id].begin = begin;
    nodes_[node_id].end = end;
    return node_id;
  }

  Eigen::Vector3d lo = points_[order_[begin]];
  Eigen::Vector3d hi = lo;
  for (std::size_t i = begin + 1; i < end; ++i) {
    lo = lo.cwiseMin(points_[order_[i]]);
    hi = hi.cwiseMax(points_[order_[i]]);
  }
  int axis = 0;
  (hi - lo).maxCoeff(&axis);

  const std::size_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid,
                   order_.begin() + end,
                   [&](std::size_t a, std::size_t b) {
                     const double pa = points_[a](axis);
                     const double pb = points_[b](axis);
                     if (pa != pb) return pa < pb;
                     return a < b;
                   });

  const double split = points_[order_[mid]](axis);
  const std::size_t left = build(begin, mid);
  const std::size_t right = build(mid, end);
  nodes_[node_id].axis = axis;
  nodes_[node_id].split = split;
  nodes_[node_id].left = left;
  nodes_[node_id].right = right;
  return node_id;
}

void NearestNeighborIndex::search(std::size_t node_id,
                                  const Eigen::Vector3d& query,
                                  double& best_d2,
                                  std::size_t& best_index) const {
  const Node& node = nodes_[node_id];
  if (node.axis < 0) {
    for (std::size_t i = node.begin; i < node.end; ++i) {
      const std::size_t idx = order_[i];
      const double d2 = (points_[idx] - query).squaredNorm();
      if (d2 < best_d2 || (d2 == best_d2 && idx < best_index)) {
        best_d2 = d2;
        best_index = idx;
      }
    }
    return;
  }

  const double delta = query(node.axis) - node.split;
  const std::size_t near = delta < 0.0 ? node.left : node.right;
  const std::size_t far = delta < 0.0 ? node.right : node.left;
  search(near, query, best_d2, best_index);
  // Equal plane distance may still hide an equal-distance lower index.
  if (delta * delta <= best_d2) {
    search(far, query, best_d2, best_index);
  }
}

NearestNeighborIndex::Result NearestNeighborIndex::nearest(
    const Eigen::Vector3d& query) const {
  double best_d2 = std::numeric_limits<double>::infinity();
  std::size_t best_index = std::numeric_limits<std::size_t>::max();
  search(root_, query, best_d2, best_index);
  return Result{best_index, std::sqrt(best_d2)};
}

}  // namespace kinfit
