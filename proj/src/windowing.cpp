#include "tactile/windowing.hpp"

namespace tactile {

void validate_config(const WindowingConfig& cfg) {
  if (cfg.detect_len < 1)
    throw Error(ErrorCode::ConfigInvalid, "detect_len must be >= 1");
  if (cfg.sub_len < 1 || cfg.sub_len > cfg.detect_len)
    throw Error(ErrorCode::ConfigInvalid,
                "sub_len must be in [1, detect_len]");
  if (cfg.sub_hop < 1)
    throw Error(ErrorCode::ConfigInvalid, "sub_hop must be >= 1");
  if (cfg.detect_step < 1 || cfg.detect_step > cfg.detect_len)
    throw Error(ErrorCode::ConfigInvalid,
                "detect_step must be in [1, detect_len]");
}

int window_count(int series_len, const WindowingConfig& cfg) {
  if (series_len < cfg.detect_len) return 0;
  return (series_len - cfg.detect_len) / cfg.detect_step + 1;
}

std::vector<LabeledWindow> segment_windows(const SignalSeries& series,
                                           const WindowingConfig& cfg) {
  validate_config(cfg);
  std::vector<LabeledWindow> windows;
  const int count = window_count(series.length(), cfg);
  windows.reserve(count);
  for (int w = 0; w < count; ++w) {
    const int start = w * cfg.detect_step;
    LabeledWindow win;
    win.start = start;
    win.series_id = series.session;
    win.frames.assign(series.frames.begin() + start,
                      series.frames.begin() + start + cfg.detect_len);
    std::vector<GestureClass> labels(series.labels.begin() + start,
                                     series.labels.begin() + start + cfg.detect_len);
    win.label = label_window(labels);
    windows.push_back(std::move(win));
  }
  return windows;
}

std::vector<Eigen::MatrixXd> slide_subwindows(const Eigen::MatrixXd& block,
                                              const WindowingConfig& cfg) {
  validate_config(cfg);
  if (block.rows() != cfg.detect_len)
    throw Error(ErrorCode::ConfigInvalid,
                "block has " + std::to_string(block.rows()) +
                    " rows, expected detect_len = " +
                    std::to_string(cfg.detect_len));
  std::vector<Eigen::MatrixXd> frames;
  frames.reserve(cfg.frame_count());
  for (int k = 0; k < cfg.frame_count(); ++k)
    frames.push_back(block.middleRows(k * cfg.sub_hop, cfg.sub_len));
  return frames;
}

Eigen::MatrixXd channel_block(const std::vector<FeatureFrame>& frames) {
  Eigen::MatrixXd block(frames.size(), kChannelCount);
  for (std::size_t t = 0; t < frames.size(); ++t)
    for (int j = 0; j < kJointCount; ++j)
      for (int f = 0; f < kFeatureCount; ++f)
        block(t, channel_index(j, f)) = frames[t](j, f);
  return block;
}

}  // namespace tactile
