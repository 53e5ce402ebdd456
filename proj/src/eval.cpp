#include "tactile/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace tactile {

GestureClass VoteFilter::push(GestureClass raw) {
  history_[count_ % 3] = raw;
  ++count_;
  if (count_ <= 2) {
    prev_out_ = raw;
    return raw;
  }
  const GestureClass a = history_[(count_ - 3) % 3];
  const GestureClass b = history_[(count_ - 2) % 3];
  const GestureClass c = history_[(count_ - 1) % 3];
  GestureClass out = prev_out_;  // all-different: hold
  if (a == b || a == c)
    out = a;
  else if (b == c)
    out = b;
  prev_out_ = out;
  return out;
}

PredictionStream majority_vote(const PredictionStream& stream) {
  PredictionStream out = stream;
  VoteFilter filter;
  for (WindowPrediction& w : out.windows) w.cls = filter.push(w.cls);
  return out;
}

std::vector<GestureClass> to_sample_labels(const PredictionStream& stream,
                                           int series_len) {
  std::vector<GestureClass> labels(series_len, GestureClass::NoContact);
  if (stream.windows.empty() || series_len <= 0) return labels;
  // later windows overwrite the overlap
  for (const WindowPrediction& w : stream.windows) {
    const int lo = std::clamp(w.start, 0, series_len);
    const int hi = std::clamp(w.start + stream.detect_len, 0, series_len);
    for (int t = lo; t < hi; ++t) labels[t] = w.cls;
  }
  for (int t = 0; t < std::min(series_len, stream.windows.front().start); ++t)
    labels[t] = stream.windows.front().cls;
  const int last_end = stream.windows.back().start + stream.detect_len;
  for (int t = std::max(0, last_end); t < series_len; ++t)
    labels[t] = stream.windows.back().cls;
  return labels;
}

std::vector<ContactEvent> extract_events(const std::vector<GestureClass>& labels) {
  std::vector<ContactEvent> events;
  const int n = static_cast<int>(labels.size());
  int t = 0;
  while (t < n) {
    if (!is_contact(labels[t])) {
      ++t;
      continue;
    }
    const GestureClass g = labels[t];
    int end = t + 1;
    while (end < n && labels[end] == g) ++end;
    events.push_back({t, end, g});
    t = end;
  }
  return events;
}

DetectionOutcome contact_outcome(const std::vector<GestureClass>& ground_truth,
                                 const std::vector<GestureClass>& predicted,
                                 double sample_rate, double delay_threshold_ms) {
  if (ground_truth.size() != predicted.size())
    throw Error(ErrorCode::LengthMismatch,
                "ground truth and prediction lengths differ");
  const int n = static_cast<int>(ground_truth.size());
  DetectionOutcome out;
  out.tp_mask.assign(n, 0);

  const double samples_to_ms = 1000.0 / sample_rate;
  for (const ContactEvent& ev : extract_events(ground_truth)) {
    EventDelay delay;
    delay.event = ev;
    for (int t = ev.start; t < ev.end; ++t) {
      if (is_contact(predicted[t])) {
        delay.dd_samples = t - ev.start;
        break;
      }
    }
    delay.detected = delay.dd_samples.has_value() &&
                     *delay.dd_samples * samples_to_ms <= delay_threshold_ms;
    for (int t = ev.end; t < n; ++t) {
      if (!is_contact(predicted[t])) {
        delay.rd_samples = t - ev.end;
        break;
      }
    }
    delay.recovered = delay.detected && delay.rd_samples.has_value() &&
                      *delay.rd_samples * samples_to_ms <= delay_threshold_ms;
    out.events.push_back(delay);

    if (delay.detected)
      for (int t = ev.start; t < ev.end; ++t)
        out.tp_mask[t] = is_contact(predicted[t]) ? 1 : 0;
    // an undetected (or too-late) event counts entirely as FN samples
  }

  for (int t = 0; t < n; ++t) {
    if (is_contact(ground_truth[t])) {
      out.tp_mask[t] ? ++out.tp : ++out.fn;
    } else {
      is_contact(predicted[t]) ? ++out.fp : ++out.tn;
    }
  }
  return out;
}

namespace {

double pct(long long num, long long den) {
  return den == 0 ? 0.0 : 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

MetricBundle bundle_from_counts(long long tp, long long tn, long long fp,
                                long long fn,
                                const std::vector<EventDelay>& events,
                                double sample_rate) {
  MetricBundle b;
  b.tp = tp;
  b.tn = tn;
  b.fp = fp;
  b.fn = fn;
  b.acc_pct = pct(tp + tn, tp + tn + fp + fn);
  b.dfr_pct = pct(fn, tp + fn);
  b.far_pct = pct(fp, tn + fp);
  const double samples_to_ms = 1000.0 / sample_rate;
  double dd_sum = 0.0, rd_sum = 0.0;
  long long dd_n = 0, rd_n = 0;
  for (const EventDelay& e : events) {
    if (e.detected) {
      dd_sum += *e.dd_samples * samples_to_ms;
      ++dd_n;
    }
    if (e.recovered) {
      rd_sum += *e.rd_samples * samples_to_ms;
      ++rd_n;
    }
  }
  b.dd_ms = dd_n ? dd_sum / static_cast<double>(dd_n) : 0.0;
  b.rd_ms = rd_n ? rd_sum / static_cast<double>(rd_n) : 0.0;
  return b;
}

int gesture_slot(GestureClass g) { return static_cast<int>(g) - 1; }

}  // namespace

MetricBundle contact_metrics(const std::vector<GestureClass>& ground_truth,
                             const std::vector<GestureClass>& predicted,
                             double sample_rate, double delay_threshold_ms) {
  const DetectionOutcome out =
      contact_outcome(ground_truth, predicted, sample_rate, delay_threshold_ms);
  return bundle_from_counts(out.tp, out.tn, out.fp, out.fn, out.events,
                            sample_rate);
}

void gesture_metrics(const std::vector<GestureClass>& ground_truth,
                     const std::vector<GestureClass>& predicted,
                     const std::vector<std::uint8_t>& tp_mask,
                     MetricBundle& bundle) {
  if (ground_truth.size() != predicted.size() ||
      ground_truth.size() != tp_mask.size())
    throw Error(ErrorCode::LengthMismatch, "gesture_metrics length mismatch");
  long long tp_total = 0, correct = 0;
  std::array<long long, 3> g_tp{0, 0, 0}, g_fn{0, 0, 0};
  for (std::size_t t = 0; t < ground_truth.size(); ++t) {
    if (tp_mask[t]) {
      ++tp_total;
      if (predicted[t] == ground_truth[t]) ++correct;
    }
    if (is_contact(ground_truth[t])) {
      const int slot = gesture_slot(ground_truth[t]);
      tp_mask[t] ? ++g_tp[slot] : ++g_fn[slot];
    }
  }
  if (tp_total == 0)
    throw Error(ErrorCode::EmptyTpRegion,
                "no true-positive contact samples; gesture metrics undefined");
  bundle.gesture_acc_pct = pct(correct, tp_total);
  for (int g = 0; g < 3; ++g) {
    if (g_tp[g] + g_fn[g] > 0)
      bundle.per_gesture_dfr_pct[g] = pct(g_fn[g], g_tp[g] + g_fn[g]);
    else
      bundle.per_gesture_dfr_pct[g] = std::nullopt;
  }
}

EventReport evaluate_labels(const std::vector<GestureClass>& ground_truth,
                            const std::vector<GestureClass>& predicted,
                            double sample_rate, double delay_threshold_ms) {
  EventReport report;
  DetectionOutcome out =
      contact_outcome(ground_truth, predicted, sample_rate, delay_threshold_ms);
  report.metrics = bundle_from_counts(out.tp, out.tn, out.fp, out.fn, out.events,
                                      sample_rate);
  if (out.tp > 0)
    gesture_metrics(ground_truth, predicted, out.tp_mask, report.metrics);
  report.events = std::move(out.events);
  return report;
}

void EvalAccumulator::add(const std::vector<GestureClass>& ground_truth,
                          const std::vector<GestureClass>& predicted,
                          double sample_rate, double delay_threshold_ms) {
  DetectionOutcome out =
      contact_outcome(ground_truth, predicted, sample_rate, delay_threshold_ms);
  tp_ += out.tp;
  tn_ += out.tn;
  fp_ += out.fp;
  fn_ += out.fn;
  for (std::size_t t = 0; t < ground_truth.size(); ++t) {
    if (out.tp_mask[t]) {
      if (predicted[t] == ground_truth[t]) ++gesture_correct_;
    }
    if (is_contact(ground_truth[t])) {
      const int slot = gesture_slot(ground_truth[t]);
      out.tp_mask[t] ? ++gesture_tp_[slot] : ++gesture_fn_[slot];
    }
  }
  const double samples_to_ms = 1000.0 / sample_rate;
  for (const EventDelay& e : out.events) {
    if (e.detected) dd_ms_.push_back(*e.dd_samples * samples_to_ms);
    if (e.recovered) rd_ms_.push_back(*e.rd_samples * samples_to_ms);
  }
  events_.insert(events_.end(), out.events.begin(), out.events.end());
}

MetricBundle EvalAccumulator::finalize() const {
  MetricBundle b;
  b.tp = tp_;
  b.tn = tn_;
  b.fp = fp_;
  b.fn = fn_;
  b.acc_pct = pct(tp_ + tn_, tp_ + tn_ + fp_ + fn_);
  b.dfr_pct = pct(fn_, tp_ + fn_);
  b.far_pct = pct(fp_, tn_ + fp_);
  auto mean = [](const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  b.dd_ms = mean(dd_ms_);
  b.rd_ms = mean(rd_ms_);
  if (tp_ > 0) b.gesture_acc_pct = pct(gesture_correct_, tp_);
  for (int g = 0; g < 3; ++g)
    if (gesture_tp_[g] + gesture_fn_[g] > 0)
      b.per_gesture_dfr_pct[g] =
          pct(gesture_fn_[g], gesture_tp_[g] + gesture_fn_[g]);
  return b;
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string fmt_opt(const std::optional<double>& v, const char* absent = "-") {
  return v ? fmt(*v) : absent;
}

}  // namespace

std::string format_metric_table(std::span<const MetricRecord> records) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof(line),
                "%-16s %-10s %8s %8s %8s %8s %8s %8s %8s %8s %8s\n", "Model",
                "Exp", "Acc", "DFR", "FAR", "DD(ms)", "RD(ms)", "GC-Acc",
                "DFR-ST", "DFR-P", "DFR-G");
  out << line;
  for (const MetricRecord& r : records) {
    const MetricBundle& m = r.metrics;
    std::snprintf(line, sizeof(line),
                  "%-16s %-10s %8s %8s %8s %8s %8s %8s %8s %8s %8s\n",
                  r.model.c_str(), r.experiment.c_str(), fmt(m.acc_pct).c_str(),
                  fmt(m.dfr_pct).c_str(), fmt(m.far_pct).c_str(),
                  fmt(m.dd_ms).c_str(), fmt(m.rd_ms).c_str(),
                  fmt_opt(m.gesture_acc_pct).c_str(),
                  fmt_opt(m.per_gesture_dfr_pct[0]).c_str(),
                  fmt_opt(m.per_gesture_dfr_pct[1]).c_str(),
                  fmt_opt(m.per_gesture_dfr_pct[2]).c_str());
    out << line;
  }
  return out.str();
}

void write_records_csv(const std::string& path,
                       std::span<const MetricRecord> records) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
  out << "model,experiment,acc,dfr,far,dd_ms,rd_ms,gc_acc,dfr_st,dfr_p,dfr_g,"
         "tp,tn,fp,fn\n";
  for (const MetricRecord& r : records) {
    const MetricBundle& m = r.metrics;
    out << r.model << ',' << r.experiment << ',' << fmt(m.acc_pct) << ','
        << fmt(m.dfr_pct) << ',' << fmt(m.far_pct) << ',' << fmt(m.dd_ms) << ','
        << fmt(m.rd_ms) << ',' << fmt_opt(m.gesture_acc_pct, "") << ','
        << fmt_opt(m.per_gesture_dfr_pct[0], "") << ','
        << fmt_opt(m.per_gesture_dfr_pct[1], "") << ','
        << fmt_opt(m.per_gesture_dfr_pct[2], "") << ',' << m.tp << ',' << m.tn
        << ',' << m.fp << ',' << m.fn << '\n';
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

}  // namespace tactile
