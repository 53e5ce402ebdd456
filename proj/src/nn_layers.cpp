#include "tactile/nn/layers.hpp"

#include <algorithm>
#include <cmath>

namespace tactile {

int conv_output_extent(int input, int kernel) {
  if (kernel < 1 || kernel > input)
    throw Error(ErrorCode::ShapeMismatch,
                "kernel extent " + std::to_string(kernel) +
                    " does not fit input extent " + std::to_string(input));
  return input - kernel + 1;
}

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Patch matrix: row r = (c,k0,k1,k2), column p = output position (o0,o1,o2).
// Chunks along o2 are contiguous in the input, so they copy as runs.
Eigen::MatrixXd im2col(const Tensor4& x, const std::array<int, 3>& kernel,
                       int e0, int e1, int e2) {
  const int in_c = x.dims[0];
  const int xs1 = x.dims[2] * x.dims[3];
  const int xs0 = x.dims[1] * xs1;
  const Eigen::Index rows =
      static_cast<Eigen::Index>(in_c) * kernel[0] * kernel[1] * kernel[2];
  Eigen::MatrixXd col(static_cast<Eigen::Index>(e0) * e1 * e2, rows);
  const double* xp = x.data.data();
  Eigen::Index r = 0;
  for (int c = 0; c < in_c; ++c)
    for (int k0 = 0; k0 < kernel[0]; ++k0)
      for (int k1 = 0; k1 < kernel[1]; ++k1)
        for (int k2 = 0; k2 < kernel[2]; ++k2, ++r) {
          double* dst = col.col(r).data();
          for (int o0 = 0; o0 < e0; ++o0) {
            const double* base = xp + c * xs0 + (o0 + k0) * xs1 + k2;
            for (int o1 = 0; o1 < e1; ++o1) {
              const double* src = base + (o1 + k1) * x.dims[3];
              for (int o2 = 0; o2 < e2; ++o2) *dst++ = src[o2];
            }
          }
        }
  return col;  // (P x K), column-major
}

void col2im_add(const Eigen::MatrixXd& col, const std::array<int, 3>& kernel,
                int e0, int e1, int e2, Tensor4& gx) {
  const int in_c = gx.dims[0];
  const int xs1 = gx.dims[2] * gx.dims[3];
  const int xs0 = gx.dims[1] * xs1;
  double* gxp = gx.data.data();
  Eigen::Index r = 0;
  for (int c = 0; c < in_c; ++c)
    for (int k0 = 0; k0 < kernel[0]; ++k0)
      for (int k1 = 0; k1 < kernel[1]; ++k1)
        for (int k2 = 0; k2 < kernel[2]; ++k2, ++r) {
          const double* src = col.col(r).data();
          for (int o0 = 0; o0 < e0; ++o0) {
            double* base = gxp + c * xs0 + (o0 + k0) * xs1 + k2;
            for (int o1 = 0; o1 < e1; ++o1) {
              double* dst = base + (o1 + k1) * gx.dims[3];
              for (int o2 = 0; o2 < e2; ++o2) dst[o2] += *src++;
            }
          }
        }
}

}  // namespace

void conv3d_forward(const Tensor4& x, const std::array<int, 3>& kernel,
                    int out_channels, const double* w, const double* b,
                    Tensor4& y) {
  const int in_c = x.dims[0];
  const int e0 = conv_output_extent(x.dims[1], kernel[0]);
  const int e1 = conv_output_extent(x.dims[2], kernel[1]);
  const int e2 = conv_output_extent(x.dims[3], kernel[2]);
  y = Tensor4(out_channels, e0, e1, e2);

  const Eigen::Index k = static_cast<Eigen::Index>(in_c) * kernel[0] *
                         kernel[1] * kernel[2];
  const Eigen::Index p = static_cast<Eigen::Index>(e0) * e1 * e2;
  const Eigen::MatrixXd col = im2col(x, kernel, e0, e1, e2);  // P x K
  Eigen::Map<const RowMat> wm(w, out_channels, k);
  Eigen::Map<RowMat> ym(y.data.data(), out_channels, p);
  ym.noalias() = wm * col.transpose();
  for (int f = 0; f < out_channels; ++f) ym.row(f).array() += b[f];
}

void conv3d_backward(const Tensor4& x, const std::array<int, 3>& kernel,
                     int out_channels, const double* w, const Tensor4& gy,
                     Tensor4& gx, double* gw, double* gb) {
  const int in_c = x.dims[0];
  const int e0 = gy.dims[1], e1 = gy.dims[2], e2 = gy.dims[3];
  if (gy.dims[0] != out_channels)
    throw Error(ErrorCode::ShapeMismatch, "upstream channel count mismatch");
  gx = Tensor4(in_c, x.dims[1], x.dims[2], x.dims[3]);

  const Eigen::Index k = static_cast<Eigen::Index>(in_c) * kernel[0] *
                         kernel[1] * kernel[2];
  const Eigen::Index p = static_cast<Eigen::Index>(e0) * e1 * e2;
  const Eigen::MatrixXd col = im2col(x, kernel, e0, e1, e2);  // P x K
  Eigen::Map<const RowMat> wm(w, out_channels, k);
  Eigen::Map<const RowMat> gym(gy.data.data(), out_channels, p);
  Eigen::Map<RowMat> gwm(gw, out_channels, k);
  Eigen::Map<Eigen::VectorXd> gbm(gb, out_channels);

  gwm.noalias() += gym * col;
  gbm += gym.rowwise().sum();
  const Eigen::MatrixXd gcol = gym.transpose() * wm;  // P x K
  col2im_add(gcol, kernel, e0, e1, e2, gx);
}

void relu_forward(Tensor4& t) { t.data = t.data.cwiseMax(0.0); }

void relu_backward(const Tensor4& pre, Tensor4& g) {
  for (Eigen::Index i = 0; i < g.data.size(); ++i)
    if (pre.data[i] <= 0.0) g.data[i] = 0.0;
}

void maxpool3d_forward(const Tensor4& x, const std::array<int, 3>& kernel,
                       Tensor4& y, std::vector<Eigen::Index>& argmax) {
  for (int i = 0; i < 3; ++i)
    if (kernel[i] < 1 || kernel[i] > x.dims[i + 1])
      throw Error(ErrorCode::ShapeMismatch,
                  "pool kernel exceeds input extent");
  const int e0 = x.dims[1] / kernel[0];
  const int e1 = x.dims[2] / kernel[1];
  const int e2 = x.dims[3] / kernel[2];
  y = Tensor4(x.dims[0], e0, e1, e2);
  argmax.assign(y.size(), 0);
  Eigen::Index out = 0;
  for (int c = 0; c < x.dims[0]; ++c)
    for (int o0 = 0; o0 < e0; ++o0)
      for (int o1 = 0; o1 < e1; ++o1)
        for (int o2 = 0; o2 < e2; ++o2) {
          double best = -std::numeric_limits<double>::infinity();
          Eigen::Index best_idx = 0;
          for (int k0 = 0; k0 < kernel[0]; ++k0)
            for (int k1 = 0; k1 < kernel[1]; ++k1)
              for (int k2 = 0; k2 < kernel[2]; ++k2) {
                const Eigen::Index idx =
                    ((static_cast<Eigen::Index>(c) * x.dims[1] +
                      (o0 * kernel[0] + k0)) *
                         x.dims[2] +
                     (o1 * kernel[1] + k1)) *
                        x.dims[3] +
                    (o2 * kernel[2] + k2);
                if (x.data[idx] > best) {
                  best = x.data[idx];
                  best_idx = idx;
                }
              }
          y.data[out] = best;
          argmax[out] = best_idx;
          ++out;
        }
}

void maxpool3d_backward(const Tensor4& gy, const std::vector<Eigen::Index>& argmax,
                        Tensor4& gx) {
  for (Eigen::Index i = 0; i < gy.data.size(); ++i)
    gx.data[argmax[i]] += gy.data[i];
}

Eigen::VectorXd softmax(const Eigen::VectorXd& logits) {
  const double m = logits.maxCoeff();
  Eigen::VectorXd e = (logits.array() - m).exp();
  return e / e.sum();
}

double cross_entropy(const Eigen::VectorXd& probs, int label) {
  return -std::log(std::max(probs[label], 1e-300));
}

}  // namespace tactile
