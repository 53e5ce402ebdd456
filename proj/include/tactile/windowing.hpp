#pragma once

#include "tactile/series.hpp"
#include "tactile/types.hpp"

#include <vector>

namespace tactile {

// Detection-window and sliding sub-window geometry.
struct WindowingConfig {
  int detect_len = 28;
  int detect_step = 14;
  int sub_len = 16;
  int sub_hop = 3;

  int frame_count() const { return (detect_len - sub_len) / sub_hop + 1; }
};

// Throws ConfigInvalid unless 1 <= sub_len <= detect_len, sub_hop >= 1 and
// 1 <= detect_step <= detect_len.
void validate_config(const WindowingConfig& cfg);

// Fixed windows at starts 0, detect_step, 2*detect_step, ...; trailing samples
// shorter than a full window are dropped. Each window is labeled via label_window.
std::vector<LabeledWindow> segment_windows(const SignalSeries& series,
                                           const WindowingConfig& cfg);

// Number of windows segment_windows produces for a series of length L.
int window_count(int series_len, const WindowingConfig& cfg);

// Sub-windows of a detect_len x C block; sub-window k covers rows
// [k*sub_hop, k*sub_hop + sub_len). Verbatim slices, no transformation.
std::vector<Eigen::MatrixXd> slide_subwindows(const Eigen::MatrixXd& block,
                                              const WindowingConfig& cfg);

// detect_len x 28 matrix whose column c = channel_index(joint, feature) holds
// that channel's samples over the window.
Eigen::MatrixXd channel_block(const std::vector<FeatureFrame>& frames);

}  // namespace tactile
