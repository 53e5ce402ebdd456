#pragma once

#include "tactile/tensor.hpp"
#include "tactile/types.hpp"

#include <vector>

namespace tactile {

// Brute-force Euclidean KNN over flattened tensors.
struct KnnIndex {
  int k = 5;
  Eigen::MatrixXd points;  // one row per stored point
  std::vector<GestureClass> labels;
};

// Validates k >= 1, non-empty points, matching label count.
KnnIndex make_knn_index(int k, Eigen::MatrixXd points,
                        std::vector<GestureClass> labels);

// Majority label among the k nearest. Distance ties break toward the lower
// point index, label ties toward the lowest class index.
GestureClass knn_classify(const KnnIndex& index, const Eigen::VectorXd& query);

Eigen::VectorXd flatten(const Tensor3& t);

}  // namespace tactile
