#pragma once

#include "tactile/eval.hpp"
#include "tactile/nn/model.hpp"
#include "tactile/nn/train.hpp"
#include "tactile/representation.hpp"
#include "tactile/series.hpp"
#include "tactile/windowing.hpp"

#include <string>
#include <vector>

namespace tactile {

// Windows -> labeled tensors for one or more sessions (not yet normalized).
std::vector<Example> make_examples(const std::vector<SignalSeries>& sessions,
                                   const WindowingConfig& cfg,
                                   const RepresentationParams& rep);

// Stats on the given examples, then z-scores them in place.
ChannelStats fit_normalization(std::vector<Example>& examples,
                               RepresentationKind kind);

// Full training pipeline: segment, build tensors, fit normalization, train.
TrainResult train_on_sessions(const ModelSpec& spec, const WindowingConfig& cfg,
                              const RepresentationParams& rep,
                              const std::vector<SignalSeries>& sessions,
                              const TrainConfig& train_cfg);

// Window-level inference over a session with the model's own windowing,
// representation and normalization; optionally majority-voted.
PredictionStream predict_series(const Model& model, const SignalSeries& series,
                                bool vote = true);

// predict_series + sample projection.
std::vector<GestureClass> predict_sample_labels(const Model& model,
                                                const SignalSeries& series,
                                                bool vote = true);

// End-to-end evaluation of one session against its ground truth.
EventReport evaluate_session(const Model& model, const SignalSeries& series,
                             bool vote = true);

}  // namespace tactile
