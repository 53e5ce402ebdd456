#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace tactile {

inline constexpr int kJointCount = 7;
inline constexpr int kFeatureCount = 4;
inline constexpr int kChannelCount = kJointCount * kFeatureCount;

// Per-joint feature columns: position error, velocity error, measured torque,
// estimated external torque.
enum Feature : int { kFeatE = 0, kFeatDe = 1, kFeatTau = 2, kFeatTauExt = 3 };

// One timestamp: rows are joints 1..7, columns are (e, de, tau, tau_ext).
using FeatureFrame = Eigen::Matrix<double, kJointCount, kFeatureCount>;

enum class GestureClass : int {
  NoContact = 0,
  SingleTap = 1,
  Push = 2,
  Grab = 3,
};

inline constexpr int kClassCount = 4;

inline bool is_contact(GestureClass g) { return g != GestureClass::NoContact; }

const char* gesture_name(GestureClass g);
GestureClass gesture_from_int(int v);  // throws on values outside 0..3

// Flattened channel index shared by every representation: c = 4*joint + feature,
// joints and features 0-based.
inline int channel_index(int joint, int feature) {
  return joint * kFeatureCount + feature;
}

enum class ErrorCode {
  JointCountMismatch,
  FeatureCountMismatch,
  NonFiniteValue,
  SamplingGap,
  LabelFlagInconsistent,
  LengthMismatch,
  ConfigInvalid,
  OddLength,
  ShapeMismatch,
  RepresentationMismatch,
  EmptyDataset,
  DivergedLoss,
  DimensionMismatch,
  FormatVersionMismatch,
  ChecksumMismatch,
  SpecUnknown,
  EmptyTpRegion,
  IoError,
};

const char* error_code_name(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tactile
