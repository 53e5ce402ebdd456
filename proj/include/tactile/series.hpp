#pragma once

#include "tactile/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace tactile {

// A validated, uniformly sampled multi-joint signal with per-sample ground truth.
struct SignalSeries {
  double sample_rate = 200.0;
  std::vector<FeatureFrame> frames;
  std::vector<GestureClass> labels;
  std::vector<std::uint8_t> contact_flags;
  int pose = 1;
  std::string session;

  int length() const { return static_cast<int>(frames.size()); }
};

// Unvalidated candidate, as parsed from a file or produced by a generator.
// Frames are dynamically sized so shape violations survive until validation.
struct RawSeries {
  double sample_rate = 200.0;
  std::vector<double> t_ms;  // may be empty for generator output (implied uniform)
  std::vector<Eigen::MatrixXd> frames;
  std::vector<int> gestures;
  std::vector<int> contacts;
  int pose = 1;
  std::string session;
};

// Checks every SignalSeries invariant; throws Error on the first violation:
// JointCountMismatch, FeatureCountMismatch, NonFiniteValue, SamplingGap
// (spacing outside [0.5, 1.5] x nominal period), LabelFlagInconsistent.
SignalSeries validate_series(const RawSeries& raw);

// Window-label rule: NoContact unless at least half the samples (>= 14 of 28)
// are contact samples; otherwise the most frequent non-NoContact gesture among
// contact samples, ties broken by lowest class index.
GestureClass label_window(const std::vector<GestureClass>& labels);

// A fixed detection window cut from a series.
struct LabeledWindow {
  std::vector<FeatureFrame> frames;
  GestureClass label = GestureClass::NoContact;
  std::string series_id;
  int start = 0;
};

// Dataset file format (31 columns, header mandatory):
// t_ms, j1_e, j1_de, j1_tau, j1_tauext, ..., j7_e, j7_de, j7_tau, j7_tauext, contact, gesture
void write_series_csv(const SignalSeries& series, const std::string& path);
SignalSeries read_series_csv(const std::string& path, double nominal_rate = 200.0);

}  // namespace tactile
