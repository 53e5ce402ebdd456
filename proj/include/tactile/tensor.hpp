#pragma once

#include "tactile/types.hpp"

#include <Eigen/Dense>

#include <array>
#include <string>

namespace tactile {

// Dense 3D array, row-major, with named axes. The common currency between the
// representation builders and the network engine.
template <typename Scalar>
struct Tensor3T {
  std::array<int, 3> dims{0, 0, 0};
  std::array<std::string, 3> axis_names;
  Eigen::Vector<Scalar, Eigen::Dynamic> data;

  Tensor3T() = default;

  Tensor3T(int d0, int d1, int d2, std::array<std::string, 3> names = {})
      : dims{d0, d1, d2}, axis_names(std::move(names)) {
    data = Eigen::Vector<Scalar, Eigen::Dynamic>::Zero(
        static_cast<Eigen::Index>(d0) * d1 * d2);
  }

  Eigen::Index size() const { return data.size(); }

  Scalar& operator()(int i0, int i1, int i2) {
    return data[(static_cast<Eigen::Index>(i0) * dims[1] + i1) * dims[2] + i2];
  }
  Scalar operator()(int i0, int i1, int i2) const {
    return data[(static_cast<Eigen::Index>(i0) * dims[1] + i1) * dims[2] + i2];
  }

  bool same_dims(const Tensor3T& other) const { return dims == other.dims; }

  bool all_finite() const { return data.allFinite(); }
};

using Tensor3 = Tensor3T<double>;

// Channel-blocked activation volume used inside the network engine.
template <typename Scalar>
struct Tensor4T {
  std::array<int, 4> dims{0, 0, 0, 0};  // (channels, d0, d1, d2)
  Eigen::Vector<Scalar, Eigen::Dynamic> data;

  Tensor4T() = default;

  Tensor4T(int c, int d0, int d1, int d2) : dims{c, d0, d1, d2} {
    data = Eigen::Vector<Scalar, Eigen::Dynamic>::Zero(
        static_cast<Eigen::Index>(c) * d0 * d1 * d2);
  }

  Eigen::Index size() const { return data.size(); }

  Scalar& operator()(int c, int i0, int i1, int i2) {
    return data[((static_cast<Eigen::Index>(c) * dims[1] + i0) * dims[2] + i1) *
                    dims[3] +
                i2];
  }
  Scalar operator()(int c, int i0, int i1, int i2) const {
    return data[((static_cast<Eigen::Index>(c) * dims[1] + i0) * dims[2] + i1) *
                    dims[3] +
                i2];
  }
};

using Tensor4 = Tensor4T<double>;

// Wraps a single-volume tensor as the engine's 1-channel input block.
template <typename Scalar>
Tensor4T<Scalar> as_single_channel(const Tensor3T<Scalar>& t) {
  Tensor4T<Scalar> out(1, t.dims[0], t.dims[1], t.dims[2]);
  out.data = t.data;
  return out;
}

}  // namespace tactile
