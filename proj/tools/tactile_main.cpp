// Command-line front end: dataset generation, training, evaluation, and
// wall-clock streaming replay.

#include "tactile/eval.hpp"
#include "tactile/nn/serialize.hpp"
#include "tactile/nn/train.hpp"
#include "tactile/pipeline.hpp"
#include "tactile/synth.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

namespace fs = std::filesystem;
using namespace tactile;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitDiverged = 3;
constexpr int kExitBudget = 4;

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::DivergedLoss:
      return kExitDiverged;
    default:
      return kExitConfig;
  }
}

std::vector<fs::path> pose_files(const std::string& data_dir, int pose) {
  std::vector<fs::path> files;
  const std::string prefix = "pose" + std::to_string(pose) + "_";
  if (!fs::is_directory(data_dir))
    throw Error(ErrorCode::IoError, "data directory not found: " + data_dir);
  for (const auto& entry : fs::directory_iterator(data_dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (name.rfind(prefix, 0) == 0 && entry.path().extension() == ".csv")
      files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty())
    throw Error(ErrorCode::IoError, "no sessions for pose " +
                                        std::to_string(pose) + " under " +
                                        data_dir);
  return files;
}

std::vector<SignalSeries> load_poses(const std::string& data_dir,
                                     const std::vector<int>& poses,
                                     double rate) {
  std::vector<SignalSeries> sessions;
  for (int pose : poses)
    for (const fs::path& p : pose_files(data_dir, pose)) {
      SignalSeries s = read_series_csv(p.string(), rate);
      s.pose = pose;
      sessions.push_back(std::move(s));
    }
  return sessions;
}

// "tap@0.5:0.12:up:3.0;push@2:1:left:2.5"
std::vector<GestureEvent> parse_event_list(const std::string& text) {
  std::vector<GestureEvent> events;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.empty()) continue;
    GestureEvent ev;
    const auto at = item.find('@');
    if (at == std::string::npos)
      throw Error(ErrorCode::ConfigInvalid, "bad event '" + item + "'");
    const std::string g = item.substr(0, at);
    if (g == "tap") ev.gesture = GestureClass::SingleTap;
    else if (g == "push") ev.gesture = GestureClass::Push;
    else if (g == "grab") ev.gesture = GestureClass::Grab;
    else throw Error(ErrorCode::ConfigInvalid, "bad gesture '" + g + "'");
    std::stringstream rest(item.substr(at + 1));
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(rest, field, ':')) fields.push_back(field);
    if (fields.size() != 4)
      throw Error(ErrorCode::ConfigInvalid,
                  "event '" + item + "' needs onset:duration:direction:magnitude");
    ev.onset_s = std::stod(fields[0]);
    ev.duration_s = std::stod(fields[1]);
    ev.direction = direction_from_name(fields[2]);
    ev.magnitude = std::stod(fields[3]);
    events.push_back(ev);
  }
  return events;
}

std::string report_dir_override(const std::string& flag_value) {
  if (const char* env = std::getenv("TACTILE_REPORT_DIR"); env && *env)
    return env;
  return flag_value;
}

void print_events(const std::vector<ContactEvent>& events) {
  for (const ContactEvent& e : events)
    std::printf("EVENT %s %d %d\n", gesture_name(e.gesture), e.start, e.end);
}

struct GenOptions {
  std::string out_dir = "data";
  std::vector<int> poses{1};
  int sessions = 1;
  double duration_s = 60.0;
  int events_per_session = 30;
  std::uint64_t seed = 1;
  std::string explicit_events;
  double noise_scale = 1.0;
};

int cmd_gen(const GenOptions& opt) {
  fs::create_directories(opt.out_dir);
  std::array<long long, kClassCount> event_counts{};
  for (int pose : opt.poses) {
    for (int s = 0; s < opt.sessions; ++s) {
      SynthConfig cfg;
      cfg.seed = opt.seed + 7919ull * static_cast<std::uint64_t>(pose) +
                 104729ull * static_cast<std::uint64_t>(s);
      cfg.duration_s = opt.duration_s;
      cfg.pose = pose;
      cfg.baseline = pose_baseline_for(pose);
      for (double& ns : cfg.noise_std) ns *= opt.noise_scale;
      cfg.session = "pose" + std::to_string(pose) + "_s" + std::to_string(s);
      cfg.events = opt.explicit_events.empty()
                       ? make_event_schedule(cfg.seed, opt.events_per_session,
                                             opt.duration_s)
                       : parse_event_list(opt.explicit_events);
      const SignalSeries series = generate_session(cfg);
      char name[64];
      std::snprintf(name, sizeof(name), "pose%d_s%03d.csv", pose, s);
      write_series_csv(series, (fs::path(opt.out_dir) / name).string());
      for (const GestureEvent& ev : cfg.events)
        event_counts[static_cast<int>(ev.gesture)]++;
    }
  }
  std::printf("wrote %zu pose(s) x %d session(s) to %s\n", opt.poses.size(),
              opt.sessions, opt.out_dir.c_str());
  for (int g = 1; g < kClassCount; ++g)
    std::printf("events %-10s %lld\n", gesture_name(static_cast<GestureClass>(g)),
                event_counts[g]);
  return kExitOk;
}

struct TrainOptions {
  std::string data_dir = "data";
  std::vector<int> poses{1};
  std::string model = "stft2dcnn";
  std::string out_path = "model.bin";
  std::string loss_log;
  std::string representation = "auto";
  std::string spectral_window = "hann";
  std::string spectral_scale = "magnitude";
  WindowingConfig windowing;
  TrainConfig train_cfg;
  int filters = 8;
  double rate = 200.0;
};

int cmd_train(const TrainOptions& opt) {
  const ModelSpec spec = make_model_spec(opt.model, opt.filters);
  RepresentationParams rep;
  rep.kind = opt.representation == "auto"
                 ? spec.representation
                 : representation_from_name(opt.representation);
  rep.window = spectral_window_from_name(opt.spectral_window);
  rep.scale = spectral_scale_from_name(opt.spectral_scale);

  const std::vector<SignalSeries> sessions =
      load_poses(opt.data_dir, opt.poses, opt.rate);
  TrainResult result =
      train_on_sessions(spec, opt.windowing, rep, sessions, opt.train_cfg);
  save_model(result.model, opt.out_path);
  if (!opt.loss_log.empty()) {
    std::ofstream log(opt.loss_log);
    log << "epoch,loss\n";
    char buf[32];
    for (std::size_t e = 0; e < result.epoch_loss.size(); ++e) {
      std::snprintf(buf, sizeof(buf), "%.12g", result.epoch_loss[e]);
      log << e << ',' << buf << '\n';
    }
  }
  std::printf("trained %s on %zu session(s), final loss %.6f -> %s\n",
              opt.model.c_str(), sessions.size(), result.model.final_loss,
              opt.out_path.c_str());
  return kExitOk;
}

struct EvalOptions {
  std::string model_path = "model.bin";
  std::string data_dir = "data";
  std::vector<int> poses;
  std::vector<std::string> session_files;
  bool no_vote = false;
  std::string experiment = "exp";
  std::string report_dir = "reports";
  double rate = 200.0;
};

int cmd_eval(const EvalOptions& opt) {
  const Model model = load_model(opt.model_path);
  std::vector<SignalSeries> sessions;
  if (!opt.session_files.empty()) {
    for (const std::string& f : opt.session_files)
      sessions.push_back(read_series_csv(f, opt.rate));
  } else {
    if (opt.poses.empty())
      throw Error(ErrorCode::ConfigInvalid, "eval needs --pose or --session");
    sessions = load_poses(opt.data_dir, opt.poses, opt.rate);
  }

  EvalAccumulator acc;
  std::vector<ContactEvent> predicted_events;
  for (const SignalSeries& s : sessions) {
    const std::vector<GestureClass> pred =
        predict_sample_labels(model, s, !opt.no_vote);
    acc.add(s.labels, pred, s.sample_rate);
    const auto events = extract_events(pred);
    predicted_events.insert(predicted_events.end(), events.begin(), events.end());
  }

  MetricRecord record;
  record.model = model.spec.name;
  record.experiment = opt.experiment;
  record.metrics = acc.finalize();
  const std::vector<MetricRecord> records{record};
  std::fputs(format_metric_table(records).c_str(), stdout);
  print_events(predicted_events);

  const std::string dir = report_dir_override(opt.report_dir);
  fs::create_directories(dir);
  const std::string out =
      (fs::path(dir) / (opt.experiment + "_" + model.spec.name + ".csv")).string();
  write_records_csv(out, records);
  std::printf("record -> %s\n", out.c_str());
  return kExitOk;
}

struct StreamOptions {
  std::string model_path = "model.bin";
  std::string session_file;
  double speed = 1.0;
  std::string latency_log;
  double budget_ms = 0.0;  // 0 = detect_step / rate
  double rate = 200.0;
};

int cmd_stream(const StreamOptions& opt) {
  using clock = std::chrono::steady_clock;
  const Model model = load_model(opt.model_path);
  const SignalSeries series = read_series_csv(opt.session_file, opt.rate);
  const WindowingConfig& wcfg = model.windowing;
  const double budget_ms =
      opt.budget_ms > 0.0 ? opt.budget_ms
                          : 1000.0 * wcfg.detect_step / series.sample_rate;

  PredictionStream stream;
  stream.sample_rate = series.sample_rate;
  stream.detect_len = wcfg.detect_len;
  stream.detect_step = wcfg.detect_step;
  VoteFilter filter;
  std::vector<double> latencies_ms;
  std::ofstream log;
  if (!opt.latency_log.empty()) {
    log.open(opt.latency_log);
    log << "window_start,latency_ms,raw,voted\n";
  }

  const auto t0 = clock::now();
  const double period_s = 1.0 / series.sample_rate;
  GestureClass live = GestureClass::NoContact;
  for (int t = 0; t < series.length(); ++t) {
    if (opt.speed > 0.0) {
      const auto due =
          t0 + std::chrono::duration_cast<clock::duration>(
                   std::chrono::duration<double>(t * period_s / opt.speed));
      std::this_thread::sleep_until(due);
    }
    const int have = t + 1;
    if (have < wcfg.detect_len ||
        (have - wcfg.detect_len) % wcfg.detect_step != 0)
      continue;
    const int start = have - wcfg.detect_len;

    const auto w0 = clock::now();
    LabeledWindow window;
    window.start = start;
    window.frames.assign(series.frames.begin() + start,
                         series.frames.begin() + start + wcfg.detect_len);
    Tensor3 tensor = build_representation(window, wcfg, model.rep);
    normalize(tensor, model.rep.kind, model.norm);
    WindowPrediction p;
    p.start = start;
    p.probs = forward(model, tensor);
    Eigen::Index best = 0;
    p.probs.maxCoeff(&best);
    const GestureClass raw = static_cast<GestureClass>(best);
    p.cls = filter.push(raw);
    const double ms =
        std::chrono::duration<double, std::milli>(clock::now() - w0).count();

    latencies_ms.push_back(ms);
    if (log.is_open())
      log << start << ',' << ms << ',' << static_cast<int>(raw) << ','
          << static_cast<int>(p.cls) << '\n';
    if (p.cls != live) {
      std::printf("t=%.3fs window %d -> %s\n", have / series.sample_rate, start,
                  gesture_name(p.cls));
      live = p.cls;
    }
    stream.windows.push_back(std::move(p));
  }

  if (stream.windows.empty())
    throw Error(ErrorCode::ConfigInvalid, "session shorter than one window");

  const std::vector<GestureClass> pred =
      to_sample_labels(stream, series.length());
  print_events(extract_events(pred));
  const EventReport report =
      evaluate_labels(series.labels, pred, series.sample_rate);
  for (const EventDelay& e : report.events) {
    std::printf("gt %s [%d,%d) detected=%d", gesture_name(e.event.gesture),
                e.event.start, e.event.end, e.detected ? 1 : 0);
    if (e.dd_samples)
      std::printf(" dd=%.1fms", *e.dd_samples * 1000.0 / series.sample_rate);
    if (e.rd_samples)
      std::printf(" rd=%.1fms", *e.rd_samples * 1000.0 / series.sample_rate);
    std::printf("\n");
  }

  std::vector<double> sorted = latencies_ms;
  std::sort(sorted.begin(), sorted.end());
  const double worst = sorted.back();
  const double p99 = sorted[static_cast<std::size_t>(
      std::min<double>(sorted.size() - 1.0, 0.99 * sorted.size()))];
  double sum = 0.0;
  for (double v : sorted) sum += v;
  std::printf("windows %zu mean %.3fms p99 %.3fms max %.3fms budget %.1fms\n",
              sorted.size(), sum / sorted.size(), p99, worst, budget_ms);
  if (worst > budget_ms) {
    std::fprintf(stderr, "latency budget exceeded: %.3f ms > %.1f ms\n", worst,
                 budget_ms);
    return kExitBudget;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tactile gesture recognition from joint sensors"};
  app.require_subcommand(1);
  app.set_config("--config", "", "run-config file (sectioned key=value)");
  app.allow_config_extras(true);

  GenOptions gen;
  CLI::App* cgen = app.add_subcommand("gen", "generate synthetic sessions");
  cgen->add_option("--out", gen.out_dir, "output directory");
  cgen->add_option("--poses", gen.poses, "poses to generate")->delimiter(',');
  cgen->add_option("--sessions", gen.sessions, "sessions per pose");
  cgen->add_option("--duration", gen.duration_s, "session length [s]");
  cgen->add_option("--events-per-session", gen.events_per_session,
                   "events per session (balanced over gestures x directions)");
  cgen->add_option("--seed", gen.seed, "generator seed");
  cgen->add_option("--events", gen.explicit_events,
                   "explicit events 'tap@0.5:0.12:up:3.0;push@2:1:left:2.5'");
  cgen->add_option("--noise-scale", gen.noise_scale, "noise multiplier");

  TrainOptions train;
  CLI::App* ctrain = app.add_subcommand("train", "train a model");
  ctrain->add_option("--data", train.data_dir, "dataset directory");
  ctrain->add_option("--poses", train.poses, "training poses")->delimiter(',');
  ctrain->add_option("--model", train.model, "architecture name");
  ctrain->add_option("--out", train.out_path, "model file");
  ctrain->add_option("--loss-log", train.loss_log, "per-epoch loss CSV");
  ctrain->add_option("--representation", train.representation,
                     "stft|stt|rt|auto");
  ctrain->add_option("--spectral-window", train.spectral_window, "hann|rect");
  ctrain->add_option("--spectral-scale", train.spectral_scale,
                     "magnitude|power|logmag");
  ctrain->add_option("--detect-len", train.windowing.detect_len);
  ctrain->add_option("--detect-step", train.windowing.detect_step);
  ctrain->add_option("--sub-len", train.windowing.sub_len);
  ctrain->add_option("--sub-hop", train.windowing.sub_hop);
  ctrain->add_option("--lr", train.train_cfg.learning_rate);
  ctrain->add_option("--batch", train.train_cfg.batch_size);
  ctrain->add_option("--epochs", train.train_cfg.epochs);
  ctrain->add_option("--seed", train.train_cfg.seed);
  ctrain->add_option("--filters", train.filters);

  EvalOptions eval;
  CLI::App* ceval = app.add_subcommand("eval", "evaluate a model");
  ceval->add_option("--model", eval.model_path, "model file");
  ceval->add_option("--data", eval.data_dir, "dataset directory");
  ceval->add_option("--pose", eval.poses, "test poses")->delimiter(',');
  ceval->add_option("--session", eval.session_files, "explicit session files");
  ceval->add_flag("--no-vote", eval.no_vote, "skip majority voting");
  ceval->add_option("--experiment", eval.experiment, "experiment tag");
  ceval->add_option("--report-dir", eval.report_dir,
                    "report directory (TACTILE_REPORT_DIR overrides)");

  StreamOptions stream;
  CLI::App* cstream = app.add_subcommand("stream", "wall-clock replay");
  cstream->add_option("--model", stream.model_path, "model file");
  cstream->add_option("--session", stream.session_file, "session CSV")
      ->required();
  cstream->add_option("--speed", stream.speed, "pacing factor, 0 = no pacing");
  cstream->add_option("--latency-log", stream.latency_log, "latency CSV");
  cstream->add_option("--budget-ms", stream.budget_ms,
                      "latency budget (default detect_step/rate)");

  try {
    app.parse(argc, argv);
    if (cgen->parsed()) return cmd_gen(gen);
    if (ctrain->parsed()) return cmd_train(train);
    if (ceval->parsed()) return cmd_eval(eval);
    if (cstream->parsed()) return cmd_stream(stream);
    return kExitConfig;
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "unexpected error: %s\n", e.what());
    return 1;
  }
}
