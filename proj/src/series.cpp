#include "tactile/series.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace tactile {

const char* gesture_name(GestureClass g) {
  switch (g) {
    case GestureClass::NoContact: return "no_contact";
    case GestureClass::SingleTap: return "single_tap";
    case GestureClass::Push: return "push";
    case GestureClass::Grab: return "grab";
  }
  return "?";
}

GestureClass gesture_from_int(int v) {
  if (v < 0 || v >= kClassCount)
    throw Error(ErrorCode::LabelFlagInconsistent,
                "gesture value " + std::to_string(v) + " outside 0..3");
  return static_cast<GestureClass>(v);
}

const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::JointCountMismatch: return "JointCountMismatch";
    case ErrorCode::FeatureCountMismatch: return "FeatureCountMismatch";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::SamplingGap: return "SamplingGap";
    case ErrorCode::LabelFlagInconsistent: return "LabelFlagInconsistent";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::OddLength: return "OddLength";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::RepresentationMismatch: return "RepresentationMismatch";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::DivergedLoss: return "DivergedLoss";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::FormatVersionMismatch: return "FormatVersionMismatch";
    case ErrorCode::ChecksumMismatch: return "ChecksumMismatch";
    case ErrorCode::SpecUnknown: return "SpecUnknown";
    case ErrorCode::EmptyTpRegion: return "EmptyTpRegion";
    case ErrorCode::IoError: return "IoError";
  }
  return "?";
}

SignalSeries validate_series(const RawSeries& raw) {
  const std::size_t n = raw.frames.size();
  if (n == 0)
    throw Error(ErrorCode::LengthMismatch, "series has no samples");
  if (raw.gestures.size() != n || raw.contacts.size() != n)
    throw Error(ErrorCode::LengthMismatch,
                "frames/labels/contact_flags lengths differ");
  if (raw.sample_rate <= 0.0)
    throw Error(ErrorCode::ConfigInvalid, "sample rate must be positive");

  SignalSeries out;
  out.sample_rate = raw.sample_rate;
  out.pose = raw.pose;
  out.session = raw.session;
  out.frames.reserve(n);
  out.labels.reserve(n);
  out.contact_flags.reserve(n);

  const double period_ms = 1000.0 / raw.sample_rate;
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::MatrixXd& f = raw.frames[i];
    if (f.rows() != kJointCount)
      throw Error(ErrorCode::JointCountMismatch,
                  "sample " + std::to_string(i) + " has " +
                      std::to_string(f.rows()) + " joints, expected 7");
    if (f.cols() != kFeatureCount)
      throw Error(ErrorCode::FeatureCountMismatch,
                  "sample " + std::to_string(i) + " has " +
                      std::to_string(f.cols()) + " features, expected 4");
    if (!f.allFinite())
      throw Error(ErrorCode::NonFiniteValue,
                  "non-finite value at sample " + std::to_string(i));
    if (!raw.t_ms.empty() && i > 0) {
      const double dt = raw.t_ms[i] - raw.t_ms[i - 1];
      if (dt > 1.5 * period_ms || dt < 0.5 * period_ms)
        throw Error(ErrorCode::SamplingGap,
                    "spacing " + std::to_string(dt) + " ms between samples " +
                        std::to_string(i - 1) + " and " + std::to_string(i) +
                        " outside [0.5, 1.5] x " + std::to_string(period_ms) +
                        " ms");
    }
    const GestureClass g = gesture_from_int(raw.gestures[i]);
    const bool contact = raw.contacts[i] != 0;
    if (contact == (g == GestureClass::NoContact))
      throw Error(ErrorCode::LabelFlagInconsistent,
                  "sample " + std::to_string(i) + ": contact flag " +
                      std::to_string(raw.contacts[i]) + " vs gesture " +
                      gesture_name(g));
    out.frames.push_back(f);
    out.labels.push_back(g);
    out.contact_flags.push_back(contact ? 1 : 0);
  }
  return out;
}

GestureClass label_window(const std::vector<GestureClass>& labels) {
  if (labels.size() != 28)
    throw Error(ErrorCode::LengthMismatch,
                "window labels must have 28 entries, got " +
                    std::to_string(labels.size()));
  std::array<int, kClassCount> counts{};
  for (GestureClass g : labels) counts[static_cast<int>(g)]++;
  const int contact = static_cast<int>(labels.size()) - counts[0];
  if (contact < 14) return GestureClass::NoContact;
  int best = 1;
  for (int c = 2; c < kClassCount; ++c)
    if (counts[c] > counts[best]) best = c;  // tie keeps the lower index
  return static_cast<GestureClass>(best);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

void write_series_csv(const SignalSeries& series, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
  out << "t_ms";
  for (int j = 1; j <= kJointCount; ++j)
    out << ",j" << j << "_e,j" << j << "_de,j" << j << "_tau,j" << j << "_tauext";
  out << ",contact,gesture\n";
  const double period_ms = 1000.0 / series.sample_rate;
  char buf[32];
  for (int t = 0; t < series.length(); ++t) {
    std::snprintf(buf, sizeof(buf), "%.6f", t * period_ms);
    out << buf;
    const FeatureFrame& f = series.frames[t];
    for (int j = 0; j < kJointCount; ++j)
      for (int c = 0; c < kFeatureCount; ++c) {
        std::snprintf(buf, sizeof(buf), "%.10g", f(j, c));
        out << ',' << buf;
      }
    out << ',' << int(series.contact_flags[t]) << ','
        << static_cast<int>(series.labels[t]) << '\n';
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

SignalSeries read_series_csv(const std::string& path, double nominal_rate) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::string line;
  if (!std::getline(in, line))
    throw Error(ErrorCode::IoError, "empty file " + path);
  const auto header = split_csv_line(line);
  if (header.size() != 2 + 1ul + kChannelCount || header[0] != "t_ms")
    throw Error(ErrorCode::IoError,
                "unexpected header in " + path + " (" +
                    std::to_string(header.size()) + " columns)");

  RawSeries raw;
  raw.sample_rate = nominal_rate;
  raw.session = path;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 2 + 1ul + kChannelCount)
      throw Error(ErrorCode::IoError,
                  path + " row " + std::to_string(row) + ": expected 31 fields, got " +
                      std::to_string(fields.size()));
    raw.t_ms.push_back(std::stod(fields[0]));
    Eigen::MatrixXd frame(kJointCount, kFeatureCount);
    for (int j = 0; j < kJointCount; ++j)
      for (int c = 0; c < kFeatureCount; ++c)
        frame(j, c) = std::stod(fields[1 + j * kFeatureCount + c]);
    raw.frames.push_back(frame);
    raw.contacts.push_back(std::stoi(fields[1 + kChannelCount]));
    raw.gestures.push_back(std::stoi(fields[2 + kChannelCount]));
    ++row;
  }
  return validate_series(raw);
}

}  // namespace tactile
