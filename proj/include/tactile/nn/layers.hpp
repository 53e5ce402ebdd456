#pragma once

#include "tactile/tensor.hpp"
#include "tactile/types.hpp"

#include <array>
#include <vector>

namespace tactile {

enum class LayerKind { Conv3D, Pool3D, Flatten, FullyConnected };

// Conv3D: valid convolution, stride 1, padding 0, kernel (k0,k1,k2), out_channels
// filters spanning all input channels. Pool3D: non-overlapping max pooling.
struct LayerSpec {
  LayerKind kind = LayerKind::Conv3D;
  std::array<int, 3> kernel{1, 1, 1};
  int out_channels = 0;  // Conv3D
  int fc_out = 0;        // FullyConnected
};

struct LayerShape {
  int channels = 1;
  std::array<int, 3> extents{0, 0, 0};
  int flat = 0;  // nonzero once flattened
};

// Valid-convolution output extent; throws ShapeMismatch when the kernel
// exceeds the incoming extent.
int conv_output_extent(int input, int kernel);

// Forward: y[f, o0, o1, o2] = b[f] + sum over (c, k0, k1, k2) of
// x[c, o0+k0, o1+k1, o2+k2] * w[f, c, k0, k1, k2]. No activation.
void conv3d_forward(const Tensor4& x, const std::array<int, 3>& kernel,
                    int out_channels, const double* w, const double* b,
                    Tensor4& y);

// Gradients of the forward map; gw/gb must be zero-initialized by the caller.
void conv3d_backward(const Tensor4& x, const std::array<int, 3>& kernel,
                     int out_channels, const double* w, const Tensor4& gy,
                     Tensor4& gx, double* gw, double* gb);

void relu_forward(Tensor4& t);
// gx masked by the forward pre-activation sign.
void relu_backward(const Tensor4& pre, Tensor4& g);

// Non-overlapping max pooling (stride = kernel); remainder positions dropped.
void maxpool3d_forward(const Tensor4& x, const std::array<int, 3>& kernel,
                       Tensor4& y, std::vector<Eigen::Index>& argmax);
void maxpool3d_backward(const Tensor4& gy, const std::vector<Eigen::Index>& argmax,
                        Tensor4& gx);

// Numerically stable softmax.
Eigen::VectorXd softmax(const Eigen::VectorXd& logits);

// -log(p[label]) with the probability floored at 1e-300.
double cross_entropy(const Eigen::VectorXd& probs, int label);

}  // namespace tactile
