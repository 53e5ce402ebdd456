#include "tactile/pipeline.hpp"

namespace tactile {

std::vector<Example> make_examples(const std::vector<SignalSeries>& sessions,
                                   const WindowingConfig& cfg,
                                   const RepresentationParams& rep) {
  std::vector<Example> examples;
  for (const SignalSeries& s : sessions) {
    for (const LabeledWindow& w : segment_windows(s, cfg)) {
      Example ex;
      ex.tensor = build_representation(w, cfg, rep);
      ex.label = w.label;
      examples.push_back(std::move(ex));
    }
  }
  return examples;
}

ChannelStats fit_normalization(std::vector<Example>& examples,
                               RepresentationKind kind) {
  std::vector<Tensor3> tensors;
  tensors.reserve(examples.size());
  for (const Example& ex : examples) tensors.push_back(ex.tensor);
  const ChannelStats stats = compute_channel_stats(tensors, kind);
  for (Example& ex : examples) normalize(ex.tensor, kind, stats);
  return stats;
}

TrainResult train_on_sessions(const ModelSpec& spec, const WindowingConfig& cfg,
                              const RepresentationParams& rep,
                              const std::vector<SignalSeries>& sessions,
                              const TrainConfig& train_cfg) {
  std::vector<Example> examples = make_examples(sessions, cfg, rep);
  if (examples.empty())
    throw Error(ErrorCode::EmptyDataset, "sessions produced no windows");
  const ChannelStats stats = fit_normalization(examples, rep.kind);
  return train(spec, cfg, rep, stats, examples, train_cfg);
}

PredictionStream predict_series(const Model& model, const SignalSeries& series,
                                bool vote) {
  PredictionStream stream;
  stream.sample_rate = series.sample_rate;
  stream.detect_len = model.windowing.detect_len;
  stream.detect_step = model.windowing.detect_step;
  for (const LabeledWindow& w : segment_windows(series, model.windowing)) {
    Tensor3 tensor = build_representation(w, model.windowing, model.rep);
    normalize(tensor, model.rep.kind, model.norm);
    WindowPrediction p;
    p.start = w.start;
    p.probs = forward(model, tensor);
    Eigen::Index best = 0;
    p.probs.maxCoeff(&best);
    p.cls = static_cast<GestureClass>(best);
    stream.windows.push_back(std::move(p));
  }
  return vote ? majority_vote(stream) : stream;
}

std::vector<GestureClass> predict_sample_labels(const Model& model,
                                                const SignalSeries& series,
                                                bool vote) {
  return to_sample_labels(predict_series(model, series, vote), series.length());
}

EventReport evaluate_session(const Model& model, const SignalSeries& series,
                             bool vote) {
  const std::vector<GestureClass> predicted =
      predict_sample_labels(model, series, vote);
  return evaluate_labels(series.labels, predicted, series.sample_rate);
}

}  // namespace tactile
