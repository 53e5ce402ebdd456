#pragma once

#include "tactile/types.hpp"

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tactile {

struct WindowPrediction {
  int start = 0;
  GestureClass cls = GestureClass::NoContact;
  Eigen::VectorXd probs;
};

struct PredictionStream {
  std::vector<WindowPrediction> windows;  // sorted by start, spaced detect_step
  double sample_rate = 200.0;
  int detect_len = 28;
  int detect_step = 14;
};

// Incremental 2-of-3 majority filter with hold-previous hysteresis.
class VoteFilter {
 public:
  GestureClass push(GestureClass raw);

 private:
  GestureClass history_[3]{};
  int count_ = 0;
  GestureClass prev_out_ = GestureClass::NoContact;
};

// Window w takes the class appearing at least twice among raw windows
// {w-2, w-1, w}; when all three differ it keeps the previous output.
// The first two windows pass through raw.
PredictionStream majority_vote(const PredictionStream& stream);

// Projects window classes to per-sample classes: each sample takes the most
// recent covering window; samples past the last window's span extend its class.
std::vector<GestureClass> to_sample_labels(const PredictionStream& stream,
                                           int series_len);

// Maximal runs of one non-NoContact class, half-open [start, end).
struct ContactEvent {
  int start = 0;
  int end = 0;
  GestureClass gesture = GestureClass::SingleTap;
};

std::vector<ContactEvent> extract_events(const std::vector<GestureClass>& labels);

// Per ground-truth event bookkeeping. Delays are sample offsets; an event
// counts as detected only when predicted contact appears inside it within the
// delay threshold, and as recovered only when predicted no-contact appears at
// or after its end within the threshold.
struct EventDelay {
  ContactEvent event;
  bool detected = false;
  std::optional<int> dd_samples;
  bool recovered = false;
  std::optional<int> rd_samples;
};

struct DetectionOutcome {
  long long tp = 0, tn = 0, fp = 0, fn = 0;
  std::vector<std::uint8_t> tp_mask;  // per sample, after the failed-event rule
  std::vector<EventDelay> events;
};

// Sample-level contact-vs-no-contact confusion with the event rules: a
// ground-truth event with no predicted contact or with DD beyond the threshold
// counts entirely as FN samples; trailing predicted contact stays FP; DD/RD
// means are taken over successfully detected/recovered events only.
DetectionOutcome contact_outcome(const std::vector<GestureClass>& ground_truth,
                                 const std::vector<GestureClass>& predicted,
                                 double sample_rate,
                                 double delay_threshold_ms = 150.0);

struct MetricBundle {
  long long tp = 0, tn = 0, fp = 0, fn = 0;
  double acc_pct = 0.0;
  double dfr_pct = 0.0;
  double far_pct = 0.0;
  double dd_ms = 0.0;
  double rd_ms = 0.0;
  std::optional<double> gesture_acc_pct;
  // Detection failure rate restricted to ground-truth events of one gesture.
  std::array<std::optional<double>, 3> per_gesture_dfr_pct;  // ST, P, G
};

MetricBundle contact_metrics(const std::vector<GestureClass>& ground_truth,
                             const std::vector<GestureClass>& predicted,
                             double sample_rate,
                             double delay_threshold_ms = 150.0);

// Fills the classification fields of `bundle` from the TP mask: gesture
// accuracy over TP samples plus per-gesture DFR. Throws EmptyTpRegion when the
// mask has no TP samples.
void gesture_metrics(const std::vector<GestureClass>& ground_truth,
                     const std::vector<GestureClass>& predicted,
                     const std::vector<std::uint8_t>& tp_mask,
                     MetricBundle& bundle);

struct EventReport {
  MetricBundle metrics;
  std::vector<EventDelay> events;
};

EventReport evaluate_labels(const std::vector<GestureClass>& ground_truth,
                            const std::vector<GestureClass>& predicted,
                            double sample_rate,
                            double delay_threshold_ms = 150.0);

// Multi-session accumulation: confusion counts are summed, delays pooled
// (converted to ms with each session's own rate).
class EvalAccumulator {
 public:
  void add(const std::vector<GestureClass>& ground_truth,
           const std::vector<GestureClass>& predicted, double sample_rate,
           double delay_threshold_ms = 150.0);
  MetricBundle finalize() const;
  const std::vector<EventDelay>& events() const { return events_; }

 private:
  long long tp_ = 0, tn_ = 0, fp_ = 0, fn_ = 0;
  long long gesture_correct_ = 0;
  std::array<long long, 3> gesture_tp_{0, 0, 0};
  std::array<long long, 3> gesture_fn_{0, 0, 0};
  std::vector<double> dd_ms_, rd_ms_;
  std::vector<EventDelay> events_;
};

struct MetricRecord {
  std::string model;
  std::string experiment;
  MetricBundle metrics;
};

// Aligned text table mirroring the report column layout:
// Acc, DFR, FAR, DD, RD, GC-Acc, DFR-ST, DFR-P, DFR-G.
std::string format_metric_table(std::span<const MetricRecord> records);

// Machine-readable record file, one CSV row per model x experiment.
void write_records_csv(const std::string& path,
                       std::span<const MetricRecord> records);

}  // namespace tactile
