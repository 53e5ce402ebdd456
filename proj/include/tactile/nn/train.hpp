#pragma once

#include "tactile/nn/model.hpp"

#include <cstdint>
#include <vector>

namespace tactile {

struct TrainConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int batch_size = 32;
  int epochs = 30;
  std::uint64_t seed = 0;
};

struct AdamState {
  Eigen::VectorXd m;
  Eigen::VectorXd v;
  long step = 0;
};

// One bias-corrected Adam update in place.
void adam_step(Eigen::VectorXd& params, const Eigen::VectorXd& grad,
               AdamState& state, const TrainConfig& cfg);

struct Example {
  Tensor3 tensor;
  GestureClass label = GestureClass::NoContact;
};

struct TrainResult {
  Model model;
  std::vector<double> epoch_loss;
};

// Mini-batch Adam on mean cross-entropy. Inputs must already be normalized with
// `stats` (stored into the model). Deterministic for a fixed seed: seeded init,
// seeded shuffles, fixed accumulation order. Throws EmptyDataset / DivergedLoss.
TrainResult train(const ModelSpec& spec, const WindowingConfig& windowing,
                  const RepresentationParams& rep, const ChannelStats& stats,
                  const std::vector<Example>& examples, const TrainConfig& cfg);

// Max relative error between the analytic loss gradient and central finite
// differences (eps = 1e-5) over every parameter.
double grad_check(const Model& model, const Tensor3& input, GestureClass label,
                  double fd_epsilon = 1e-5);

}  // namespace tactile
