#include "tactile/nn/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace tactile {

void adam_step(Eigen::VectorXd& params, const Eigen::VectorXd& grad,
               AdamState& state, const TrainConfig& cfg) {
  if (state.m.size() != params.size()) {
    state.m = Eigen::VectorXd::Zero(params.size());
    state.v = Eigen::VectorXd::Zero(params.size());
    state.step = 0;
  }
  state.step += 1;
  state.m = cfg.beta1 * state.m + (1.0 - cfg.beta1) * grad;
  state.v = cfg.beta2 * state.v + (1.0 - cfg.beta2) * grad.cwiseProduct(grad);
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));
  params -= (cfg.learning_rate / bc1) *
            state.m.cwiseQuotient(((state.v / bc2).cwiseSqrt().array() + cfg.epsilon)
                                      .matrix());
}

TrainResult train(const ModelSpec& spec, const WindowingConfig& windowing,
                  const RepresentationParams& rep, const ChannelStats& stats,
                  const std::vector<Example>& examples, const TrainConfig& cfg) {
  if (examples.empty())
    throw Error(ErrorCode::EmptyDataset, "training set is empty");
  TrainResult result;
  result.model = init_model(spec, windowing, rep, cfg.seed);
  result.model.norm = stats;
  const auto dims = result.model.input_dims();
  for (const Example& ex : examples)
    if (ex.tensor.dims != dims)
      throw Error(ErrorCode::ShapeMismatch,
                  "training tensors must all match the model input dims");

  std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ull);
  std::vector<int> order(examples.size());
  std::iota(order.begin(), order.end(), 0);

  AdamState adam;
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(result.model.params.size());
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    for (std::size_t begin = 0; begin < order.size();
         begin += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t end =
          std::min(order.size(), begin + static_cast<std::size_t>(cfg.batch_size));
      grad.setZero();
      double batch_loss = 0.0;
      for (std::size_t i = begin; i < end; ++i) {
        const Example& ex = examples[order[i]];
        batch_loss += loss_and_grad(result.model, ex.tensor, ex.label, grad);
      }
      const double inv = 1.0 / static_cast<double>(end - begin);
      grad *= inv;
      batch_loss *= inv;
      if (!std::isfinite(batch_loss))
        throw Error(ErrorCode::DivergedLoss,
                    "loss became non-finite at epoch " + std::to_string(epoch));
      adam_step(result.model.params, grad, adam, cfg);
      epoch_loss += batch_loss * static_cast<double>(end - begin);
    }
    epoch_loss /= static_cast<double>(order.size());
    if (!std::isfinite(epoch_loss))
      throw Error(ErrorCode::DivergedLoss,
                  "loss became non-finite at epoch " + std::to_string(epoch));
    result.epoch_loss.push_back(epoch_loss);
  }
  result.model.epochs_trained = cfg.epochs;
  result.model.final_loss =
      result.epoch_loss.empty() ? 0.0 : result.epoch_loss.back();
  return result;
}

double grad_check(const Model& model, const Tensor3& input, GestureClass label,
                  double fd_epsilon) {
  Eigen::VectorXd analytic = Eigen::VectorXd::Zero(model.params.size());
  loss_and_grad(model, input, label, analytic);

  Model probe = model;
  double max_rel = 0.0;
  for (Eigen::Index p = 0; p < probe.params.size(); ++p) {
    const double saved = probe.params[p];
    probe.params[p] = saved + fd_epsilon;
    Eigen::VectorXd probs = forward(probe, input);
    const double lp = cross_entropy(probs, static_cast<int>(label));
    probe.params[p] = saved - fd_epsilon;
    probs = forward(probe, input);
    const double lm = cross_entropy(probs, static_cast<int>(label));
    probe.params[p] = saved;
    const double numeric = (lp - lm) / (2.0 * fd_epsilon);
    const double denom = std::max({std::abs(numeric), std::abs(analytic[p]), 1e-8});
    max_rel = std::max(max_rel, std::abs(numeric - analytic[p]) / denom);
  }
  return max_rel;
}

}  // namespace tactile
