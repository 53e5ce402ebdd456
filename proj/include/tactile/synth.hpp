#pragma once

#include "tactile/series.hpp"
#include "tactile/types.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace tactile {

enum class Direction { Left = 0, Right, Front, Back, Up };

inline constexpr int kDirectionCount = 5;

const char* direction_name(Direction d);
Direction direction_from_name(const std::string& name);

// One scripted contact event.
struct GestureEvent {
  GestureClass gesture = GestureClass::SingleTap;
  double onset_s = 0.0;
  double duration_s = 0.1;
  Direction direction = Direction::Up;
  double magnitude = 1.0;
};

// Per-pose channel offsets, slow sinusoidal drift, and per-joint/per-feature
// gains applied to event signals (lever arms and apparent controller
// stiffness change with the arm configuration). Pose 4 sits outside the
// spread of poses 1-3.
struct PoseBaseline {
  Eigen::Matrix<double, kJointCount, kFeatureCount> offset;
  Eigen::Matrix<double, kJointCount, kFeatureCount> drift_amp;
  double drift_freq_hz = 0.2;
  Eigen::Matrix<double, kJointCount, 1> joint_gain;
  Eigen::Matrix<double, kFeatureCount, 1> feature_gain;
};

PoseBaseline pose_baseline_for(int pose);

struct SynthConfig {
  std::uint64_t seed = 0;
  double duration_s = 60.0;
  double sample_rate = 200.0;
  int pose = 1;
  std::vector<GestureEvent> events;
  std::array<double, kFeatureCount> noise_std{0.004, 0.004, 0.02, 0.02};
  PoseBaseline baseline = pose_baseline_for(1);
  std::string session = "s0";
};

// Synthesizes a labeled session: tap = decaying 30 Hz burst on tau_ext/e of
// 2-3 adjacent joints, push = smoothed direction-signed step, grab = sustained
// mixed-sign pressure on joints 6-7 with a slow wobble; baseline and Gaussian
// noise added on top; labels/contact_flags set exactly over event supports.
// Throws ConfigInvalid on overlapping events (naming the pair) or events past
// the session end.
SignalSeries generate_session(const SynthConfig& cfg);

// Balanced, non-overlapping event schedule cycling gestures x directions.
// Durations and magnitudes are drawn from fixed per-gesture ranges.
std::vector<GestureEvent> make_event_schedule(std::uint64_t seed, int event_count,
                                              double session_duration_s);

// Peak |tau_ext| the baseline alone can reach on any channel (offset + drift).
double baseline_tau_ext_bound(const PoseBaseline& baseline);

}  // namespace tactile
