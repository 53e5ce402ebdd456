#include "tactile/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace tactile {

const char* direction_name(Direction d) {
  switch (d) {
    case Direction::Left: return "left";
    case Direction::Right: return "right";
    case Direction::Front: return "front";
    case Direction::Back: return "back";
    case Direction::Up: return "up";
  }
  return "?";
}

Direction direction_from_name(const std::string& name) {
  for (int i = 0; i < kDirectionCount; ++i)
    if (name == direction_name(static_cast<Direction>(i)))
      return static_cast<Direction>(i);
  throw Error(ErrorCode::ConfigInvalid, "unknown direction '" + name + "'");
}

namespace {

// Per-direction joint weight patterns (distal joints emphasized; the arm is
// touched on link 7 / the end effector).
const double kDirectionPattern[kDirectionCount][kJointCount] = {
    {+0.25, -0.15, +0.45, -0.30, +0.70, -0.90, +1.00},  // left
    {-0.25, +0.15, -0.45, +0.30, -0.70, +0.90, -1.00},  // right
    {+0.40, +0.30, -0.20, +0.55, -0.75, +0.60, +0.95},  // front
    {-0.40, -0.30, +0.20, -0.55, +0.75, -0.60, -0.95},  // back
    {+0.15, +0.50, +0.25, -0.40, +0.85, +0.70, +0.80},  // up
};

int tap_center_joint(Direction d) {
  switch (d) {
    case Direction::Left: return 4;
    case Direction::Right: return 5;
    case Direction::Front: return 5;
    case Direction::Back: return 6;
    case Direction::Up: return 6;
  }
  return 5;
}

double smoothstep01(double x) {
  x = std::clamp(x, 0.0, 1.0);
  return x * x * (3.0 - 2.0 * x);
}

double smoothstep01_deriv(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return 6.0 * x * (1.0 - x);
}

constexpr double kTapHz = 50.0;
constexpr double kPushRiseS = 0.08;
constexpr double kGrabRiseS = 0.12;
constexpr double kTremorHz = 25.0;
constexpr double kGrabTremorDepth = 0.45;
constexpr double kPushTremorDepth = 0.10;

// Squeeze pattern: mixed signs, multi-directional pressure.
const double kGrabPattern[kJointCount] = {0.25, -0.35, 0.30, -0.45,
                                          0.70, 1.00,  -0.90};

// Event contribution to one frame, written into `add` (joints x features).
void add_event_signal(const GestureEvent& ev, double t_local,
                      const Eigen::Matrix<double, kJointCount, 1>& joint_gain,
                      Eigen::Matrix<double, kJointCount, kFeatureCount>& add) {
  const double* dir = kDirectionPattern[static_cast<int>(ev.direction)];
  switch (ev.gesture) {
    case GestureClass::SingleTap: {
      const double tau = ev.duration_s / 3.0;
      const double omega = 2.0 * std::numbers::pi * kTapHz;
      const double env = std::exp(-t_local / tau);
      const double burst = env * std::sin(omega * t_local);
      const double burst_dot =
          env * (omega * std::cos(omega * t_local) -
                 std::sin(omega * t_local) / tau);
      const int jc = tap_center_joint(ev.direction);
      for (int dj = -1; dj <= 1; ++dj) {
        const int j = jc + dj;
        if (j < 0 || j >= kJointCount) continue;
        const double w =
            (dj == 0 ? 1.0 : 0.5) * ev.magnitude * joint_gain[j] *
            (dir[j] >= 0 ? 1.0 : -1.0);
        add(j, kFeatTauExt) += w * burst;
        add(j, kFeatTau) += 0.4 * w * burst;
        add(j, kFeatE) += 0.15 * w * burst;
        add(j, kFeatDe) += 0.15 * w * burst_dot / 10.0;
      }
      break;
    }
    case GestureClass::Push: {
      const double rise = smoothstep01(t_local / kPushRiseS);
      const double fall = smoothstep01((ev.duration_s - t_local) / kPushRiseS);
      const double env = std::min(rise, fall);
      const double env_dot =
          (rise < fall ? smoothstep01_deriv(t_local / kPushRiseS) / kPushRiseS
                       : -smoothstep01_deriv((ev.duration_s - t_local) /
                                             kPushRiseS) /
                             kPushRiseS);
      const double tremor =
          1.0 + kPushTremorDepth *
                    std::sin(2.0 * std::numbers::pi * kTremorHz * t_local);
      for (int j = 0; j < kJointCount; ++j) {
        const double w = ev.magnitude * dir[j] * joint_gain[j];
        add(j, kFeatTauExt) += w * env * tremor;
        add(j, kFeatTau) += 0.5 * w * env * tremor;
        add(j, kFeatE) += 0.1 * w * env;
        add(j, kFeatDe) += 0.1 * w * env_dot / 10.0;
      }
      break;
    }
    case GestureClass::Grab: {
      const double rise = smoothstep01(t_local / kGrabRiseS);
      const double fall = smoothstep01((ev.duration_s - t_local) / kGrabRiseS);
      const double env = std::min(rise, fall);
      // sustained pressure with the tremor of a squeezing hand; the tremor
      // texture, not the joint placement, is what separates grab from push
      const double phase = 2.0 * std::numbers::pi * kTremorHz * t_local;
      const double tremor = 1.0 + kGrabTremorDepth * std::sin(phase);
      const double tremor_dot = kGrabTremorDepth * 2.0 * std::numbers::pi *
                                kGrabTremorHz * std::cos(phase);
      for (int j = 0; j < kJointCount; ++j) {
        const double w = ev.magnitude * joint_gain[j] *
                         (kGrabPattern[j] + 0.25 * dir[j]);
        add(j, kFeatTauExt) += w * env * tremor;
        add(j, kFeatTau) += 0.45 * w * env * tremor;
        add(j, kFeatE) += 0.10 * w * env;
        add(j, kFeatDe) += 0.10 * w * env * tremor_dot / 100.0;
      }
      break;
    }
    case GestureClass::NoContact:
      break;
  }
}

}  // namespace

PoseBaseline pose_baseline_for(int pose) {
  if (pose < 1 || pose > 4)
    throw Error(ErrorCode::ConfigInvalid,
                "pose must be in 1..4, got " + std::to_string(pose));
  PoseBaseline b;
  b.offset.setZero();
  b.drift_amp.setZero();
  b.joint_gain.setOnes();
  b.feature_gain.setOnes();
  b.drift_freq_hz = 0.25;

  // Gravity-like torque profile, scaled per pose; poses 1-3 cluster, pose 4
  // sits outside their spread and reshapes the per-joint gain pattern, which
  // moves the across-joint amplitude ratios events are carried on.
  const double base_tau[kJointCount] = {1.8, 6.5, 1.2, 4.8, 0.6, 1.5, 0.3};
  const double tau_scale[5] = {0.0, 0.92, 1.0, 1.08, 1.15};
  const double e_off[5] = {0.0, -0.002, 0.0, 0.002, 0.005};
  const double drift_tau_ext[5] = {0.0, 0.05, 0.06, 0.07, 0.10};
  const double gains[5][kJointCount] = {
      {1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0},
      {1.00, 1.20, 0.85, 1.15, 0.80, 1.10, 0.90},
      {1.20, 0.85, 1.15, 0.80, 1.10, 0.90, 1.00},
      {0.85, 1.10, 0.95, 1.20, 0.85, 1.15, 1.05},
      {1.65, 0.55, 1.55, 0.60, 1.50, 0.58, 1.70},
  };

  for (int j = 0; j < kJointCount; ++j) {
    b.offset(j, kFeatTau) = base_tau[j] * tau_scale[pose];
    b.offset(j, kFeatE) = e_off[pose] * (j % 2 == 0 ? 1.0 : -1.0);
    b.offset(j, kFeatDe) = 0.0;
    b.offset(j, kFeatTauExt) = 0.0;
    b.drift_amp(j, kFeatTauExt) = drift_tau_ext[pose];
    b.drift_amp(j, kFeatTau) = 0.10 * (pose == 4 ? 1.2 : 1.0);
    b.drift_amp(j, kFeatE) = 0.001 * (pose == 4 ? 1.5 : 1.0);
    b.joint_gain[j] = gains[pose][j];
  }
  return b;
}

double baseline_tau_ext_bound(const PoseBaseline& baseline) {
  double bound = 0.0;
  for (int j = 0; j < kJointCount; ++j)
    bound = std::max(bound, std::abs(baseline.offset(j, kFeatTauExt)) +
                                std::abs(baseline.drift_amp(j, kFeatTauExt)));
  return bound;
}

SignalSeries generate_session(const SynthConfig& cfg) {
  if (cfg.duration_s <= 0.0 || cfg.sample_rate <= 0.0)
    throw Error(ErrorCode::ConfigInvalid, "duration and rate must be positive");

  std::vector<GestureEvent> events = cfg.events;
  std::sort(events.begin(), events.end(),
            [](const GestureEvent& a, const GestureEvent& b) {
              return a.onset_s < b.onset_s;
            });
  for (std::size_t i = 0; i < events.size(); ++i) {
    const GestureEvent& ev = events[i];
    if (ev.duration_s <= 0.0)
      throw Error(ErrorCode::ConfigInvalid,
                  "event " + std::to_string(i) + " has non-positive duration");
    if (ev.onset_s < 0.0 || ev.onset_s + ev.duration_s > cfg.duration_s)
      throw Error(ErrorCode::ConfigInvalid,
                  "event " + std::to_string(i) + " (" +
                      gesture_name(ev.gesture) + " @ " +
                      std::to_string(ev.onset_s) + "s) exceeds the session");
    if (i > 0) {
      const GestureEvent& prev = events[i - 1];
      if (ev.onset_s < prev.onset_s + prev.duration_s)
        throw Error(ErrorCode::ConfigInvalid,
                    "events overlap: " + std::string(gesture_name(prev.gesture)) +
                        " @ " + std::to_string(prev.onset_s) + "s and " +
                        gesture_name(ev.gesture) + " @ " +
                        std::to_string(ev.onset_s) + "s");
    }
  }

  const int n = static_cast<int>(std::llround(cfg.duration_s * cfg.sample_rate));
  RawSeries raw;
  raw.sample_rate = cfg.sample_rate;
  raw.pose = cfg.pose;
  raw.session = cfg.session;
  raw.frames.reserve(n);
  raw.gestures.assign(n, 0);
  raw.contacts.assign(n, 0);

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  std::size_t active = 0;
  for (int t = 0; t < n; ++t) {
    const double time_s = t / cfg.sample_rate;
    Eigen::Matrix<double, kJointCount, kFeatureCount> frame = cfg.baseline.offset;
    const double drift =
        std::sin(2.0 * std::numbers::pi * cfg.baseline.drift_freq_hz * time_s);
    frame += cfg.baseline.drift_amp * drift;

    while (active < events.size() &&
           time_s >= events[active].onset_s + events[active].duration_s)
      ++active;
    if (active < events.size() && time_s >= events[active].onset_s) {
      const GestureEvent& ev = events[active];
      Eigen::Matrix<double, kJointCount, kFeatureCount> contrib;
      contrib.setZero();
      add_event_signal(ev, time_s - ev.onset_s, cfg.baseline.joint_gain,
                       contrib);
      frame += contrib * cfg.baseline.feature_gain.asDiagonal();
      raw.gestures[t] = static_cast<int>(ev.gesture);
      raw.contacts[t] = 1;
    }

    for (int j = 0; j < kJointCount; ++j)
      for (int f = 0; f < kFeatureCount; ++f)
        frame(j, f) += cfg.noise_std[f] * gauss(rng);
    raw.frames.push_back(frame);
  }
  return validate_series(raw);
}

std::vector<GestureEvent> make_event_schedule(std::uint64_t seed, int event_count,
                                              double session_duration_s) {
  if (event_count < 1)
    throw Error(ErrorCode::ConfigInvalid, "event count must be >= 1");
  std::mt19937_64 rng(seed ^ 0xd1b54a32d192ed03ull);

  struct Combo {
    GestureClass g;
    Direction d;
  };
  std::vector<Combo> combos;
  combos.reserve(event_count);
  const GestureClass gestures[3] = {GestureClass::SingleTap, GestureClass::Push,
                                    GestureClass::Grab};
  for (int i = 0; i < event_count; ++i)
    combos.push_back({gestures[i % 3],
                      static_cast<Direction>((i / 3) % kDirectionCount)});
  std::shuffle(combos.begin(), combos.end(), rng);

  std::uniform_real_distribution<double> tap_dur(0.10, 0.15);
  std::uniform_real_distribution<double> push_dur(0.70, 1.30);
  std::uniform_real_distribution<double> grab_dur(0.90, 1.50);
  std::uniform_real_distribution<double> tap_mag(2.5, 4.0);
  std::uniform_real_distribution<double> push_mag(1.8, 3.0);
  std::uniform_real_distribution<double> grab_mag(1.5, 2.5);
  std::uniform_real_distribution<double> gap(0.45, 0.85);

  std::vector<GestureEvent> events;
  events.reserve(combos.size());
  double cursor = 0.6;
  for (const Combo& c : combos) {
    GestureEvent ev;
    ev.gesture = c.g;
    ev.direction = c.d;
    switch (c.g) {
      case GestureClass::SingleTap:
        ev.duration_s = tap_dur(rng);
        ev.magnitude = tap_mag(rng);
        break;
      case GestureClass::Push:
        ev.duration_s = push_dur(rng);
        ev.magnitude = push_mag(rng);
        break;
      default:
        ev.duration_s = grab_dur(rng);
        ev.magnitude = grab_mag(rng);
        break;
    }
    ev.onset_s = cursor;
    cursor += ev.duration_s + gap(rng);
    events.push_back(ev);
  }
  if (cursor > session_duration_s)
    throw Error(ErrorCode::ConfigInvalid,
                "schedule needs " + std::to_string(cursor) +
                    " s but the session lasts " +
                    std::to_string(session_duration_s) + " s");
  return events;
}

}  // namespace tactile
