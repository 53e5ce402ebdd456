#include "tactile/knn.hpp"

#include <algorithm>
#include <numeric>

namespace tactile {

KnnIndex make_knn_index(int k, Eigen::MatrixXd points,
                        std::vector<GestureClass> labels) {
  if (k < 1) throw Error(ErrorCode::ConfigInvalid, "k must be >= 1");
  if (points.rows() == 0)
    throw Error(ErrorCode::EmptyDataset, "knn index needs at least one point");
  if (points.rows() != static_cast<Eigen::Index>(labels.size()))
    throw Error(ErrorCode::LengthMismatch, "points/labels count mismatch");
  KnnIndex index;
  index.k = k;
  index.points = std::move(points);
  index.labels = std::move(labels);
  return index;
}

GestureClass knn_classify(const KnnIndex& index, const Eigen::VectorXd& query) {
  if (query.size() != index.points.cols())
    throw Error(ErrorCode::DimensionMismatch,
                "query length " + std::to_string(query.size()) +
                    " vs index dimension " + std::to_string(index.points.cols()));
  const Eigen::Index n = index.points.rows();
  Eigen::VectorXd dist2 =
      (index.points.rowwise() - query.transpose()).rowwise().squaredNorm();

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  const Eigen::Index kn = std::min<Eigen::Index>(index.k, n);
  std::partial_sort(order.begin(), order.begin() + kn, order.end(),
                    [&](Eigen::Index a, Eigen::Index b) {
                      if (dist2[a] != dist2[b]) return dist2[a] < dist2[b];
                      return a < b;  // distance tie: lower point index
                    });

  std::array<int, kClassCount> votes{};
  for (Eigen::Index i = 0; i < kn; ++i)
    votes[static_cast<int>(index.labels[order[i]])]++;
  int best = 0;
  for (int c = 1; c < kClassCount; ++c)
    if (votes[c] > votes[best]) best = c;  // label tie keeps the lower index
  return static_cast<GestureClass>(best);
}

Eigen::VectorXd flatten(const Tensor3& t) { return t.data; }

}  // namespace tactile
