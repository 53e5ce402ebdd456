#include "tactile/representation.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace tactile {

const char* representation_name(RepresentationKind k) {
  switch (k) {
    case RepresentationKind::STFT: return "stft";
    case RepresentationKind::STT: return "stt";
    case RepresentationKind::RT: return "rt";
  }
  return "?";
}

RepresentationKind representation_from_name(const std::string& name) {
  if (name == "stft") return RepresentationKind::STFT;
  if (name == "stt") return RepresentationKind::STT;
  if (name == "rt") return RepresentationKind::RT;
  throw Error(ErrorCode::ConfigInvalid, "unknown representation '" + name + "'");
}

const char* spectral_window_name(SpectralWindow w) {
  return w == SpectralWindow::Hann ? "hann" : "rect";
}

SpectralWindow spectral_window_from_name(const std::string& name) {
  if (name == "hann") return SpectralWindow::Hann;
  if (name == "rect") return SpectralWindow::Rectangular;
  throw Error(ErrorCode::ConfigInvalid, "unknown window '" + name + "'");
}

const char* spectral_scale_name(SpectralScale s) {
  switch (s) {
    case SpectralScale::Magnitude: return "magnitude";
    case SpectralScale::Power: return "power";
    case SpectralScale::LogMagnitude: return "logmag";
  }
  return "?";
}

SpectralScale spectral_scale_from_name(const std::string& name) {
  if (name == "magnitude") return SpectralScale::Magnitude;
  if (name == "power") return SpectralScale::Power;
  if (name == "logmag") return SpectralScale::LogMagnitude;
  throw Error(ErrorCode::ConfigInvalid, "unknown scale '" + name + "'");
}

std::array<int, 3> representation_dims(RepresentationKind kind,
                                       const WindowingConfig& cfg) {
  validate_config(cfg);
  switch (kind) {
    case RepresentationKind::STFT:
      if (cfg.sub_len % 2 != 0)
        throw Error(ErrorCode::OddLength, "sub_len must be even for STFT");
      return {kChannelCount, cfg.sub_len / 2 + 1, cfg.frame_count()};
    case RepresentationKind::STT:
      return {kChannelCount, cfg.sub_len, cfg.frame_count()};
    case RepresentationKind::RT:
      return {cfg.detect_len, kJointCount, kFeatureCount};
  }
  throw Error(ErrorCode::ConfigInvalid, "bad representation kind");
}

Eigen::VectorXd dft_magnitude_oracle(const Eigen::VectorXd& samples) {
  const int n = static_cast<int>(samples.size());
  if (n < 2 || n % 2 != 0)
    throw Error(ErrorCode::OddLength,
                "oracle needs an even length >= 2, got " + std::to_string(n));
  Eigen::VectorXd mags(n / 2 + 1);
  for (int b = 0; b <= n / 2; ++b) {
    std::complex<double> acc{0.0, 0.0};
    for (int i = 0; i < n; ++i)
      acc += samples[i] *
             std::exp(std::complex<double>(0.0, -2.0 * std::numbers::pi * b * i / n));
    mags[b] = std::abs(acc);
  }
  return mags;
}

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Iterative radix-2 Cooley-Tukey, in place.
void fft_radix2(std::vector<std::complex<double>>& a) {
  const int n = static_cast<int>(a.size());
  for (int i = 1, j = 0; i < n; ++i) {
    int bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (int len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * std::numbers::pi / len;
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (int i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (int k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

}  // namespace

Eigen::VectorXd spectrum_magnitude(const Eigen::VectorXd& samples) {
  const int n = static_cast<int>(samples.size());
  if (n < 2 || n % 2 != 0)
    throw Error(ErrorCode::OddLength,
                "spectrum needs an even length >= 2, got " + std::to_string(n));
  Eigen::VectorXd mags(n / 2 + 1);
  if (is_power_of_two(n)) {
    std::vector<std::complex<double>> a(n);
    for (int i = 0; i < n; ++i) a[i] = samples[i];
    fft_radix2(a);
    for (int b = 0; b <= n / 2; ++b) mags[b] = std::abs(a[b]);
  } else {
    // Even non-power-of-two lengths take the direct path.
    for (int b = 0; b <= n / 2; ++b) {
      double re = 0.0, im = 0.0;
      for (int i = 0; i < n; ++i) {
        const double ang = -2.0 * std::numbers::pi * b * i / n;
        re += samples[i] * std::cos(ang);
        im += samples[i] * std::sin(ang);
      }
      mags[b] = std::hypot(re, im);
    }
  }
  return mags;
}

namespace {

Eigen::VectorXd window_weights(SpectralWindow w, int n) {
  Eigen::VectorXd weights(n);
  if (w == SpectralWindow::Rectangular) {
    weights.setOnes();
  } else {
    // Periodic Hann.
    for (int i = 0; i < n; ++i)
      weights[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * i / n));
  }
  return weights;
}

double scale_value(SpectralScale s, double magnitude) {
  switch (s) {
    case SpectralScale::Magnitude: return magnitude;
    case SpectralScale::Power: return magnitude * magnitude;
    case SpectralScale::LogMagnitude: return std::log1p(magnitude);
  }
  return magnitude;
}

void check_window(const LabeledWindow& window, const WindowingConfig& cfg) {
  if (static_cast<int>(window.frames.size()) != cfg.detect_len)
    throw Error(ErrorCode::ConfigInvalid,
                "window has " + std::to_string(window.frames.size()) +
                    " frames, expected " + std::to_string(cfg.detect_len));
}

}  // namespace

Tensor3 build_stft(const LabeledWindow& window, const WindowingConfig& cfg,
                   const RepresentationParams& params) {
  check_window(window, cfg);
  const auto dims = representation_dims(RepresentationKind::STFT, cfg);
  Tensor3 out(dims[0], dims[1], dims[2], {"channel", "frequency", "frame"});
  const Eigen::MatrixXd block = channel_block(window.frames);
  const auto subs = slide_subwindows(block, cfg);
  const Eigen::VectorXd weights = window_weights(params.window, cfg.sub_len);
  for (int c = 0; c < kChannelCount; ++c) {
    for (int k = 0; k < dims[2]; ++k) {
      const Eigen::VectorXd weighted = subs[k].col(c).cwiseProduct(weights);
      const Eigen::VectorXd mags = spectrum_magnitude(weighted);
      for (int b = 0; b < dims[1]; ++b)
        out(c, b, k) = scale_value(params.scale, mags[b]);
    }
  }
  return out;
}

Tensor3 build_stt(const LabeledWindow& window, const WindowingConfig& cfg) {
  check_window(window, cfg);
  const auto dims = representation_dims(RepresentationKind::STT, cfg);
  Tensor3 out(dims[0], dims[1], dims[2], {"channel", "position", "frame"});
  const Eigen::MatrixXd block = channel_block(window.frames);
  for (int c = 0; c < kChannelCount; ++c)
    for (int p = 0; p < dims[1]; ++p)
      for (int k = 0; k < dims[2]; ++k)
        out(c, p, k) = block(k * cfg.sub_hop + p, c);
  return out;
}

Tensor3 build_rt(const LabeledWindow& window) {
  const int len = static_cast<int>(window.frames.size());
  Tensor3 out(len, kJointCount, kFeatureCount, {"time", "joint", "feature"});
  for (int t = 0; t < len; ++t)
    for (int j = 0; j < kJointCount; ++j)
      for (int f = 0; f < kFeatureCount; ++f)
        out(t, j, f) = window.frames[t](j, f);
  return out;
}

Tensor3 build_representation(const LabeledWindow& window,
                             const WindowingConfig& cfg,
                             const RepresentationParams& params) {
  switch (params.kind) {
    case RepresentationKind::STFT: return build_stft(window, cfg, params);
    case RepresentationKind::STT: return build_stt(window, cfg);
    case RepresentationKind::RT: return build_rt(window);
  }
  throw Error(ErrorCode::ConfigInvalid, "bad representation kind");
}

ChannelStats compute_channel_stats(std::span<const Tensor3> tensors,
                                   RepresentationKind kind) {
  if (tensors.empty())
    throw Error(ErrorCode::EmptyDataset, "no tensors to compute stats on");
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(kChannelCount);
  Eigen::VectorXd sumsq = Eigen::VectorXd::Zero(kChannelCount);
  Eigen::VectorXd count = Eigen::VectorXd::Zero(kChannelCount);
  for (const Tensor3& t : tensors) {
    for (int i0 = 0; i0 < t.dims[0]; ++i0)
      for (int i1 = 0; i1 < t.dims[1]; ++i1)
        for (int i2 = 0; i2 < t.dims[2]; ++i2) {
          const int c = tensor_channel(kind, i0, i1, i2);
          const double v = t(i0, i1, i2);
          sum[c] += v;
          sumsq[c] += v * v;
          count[c] += 1.0;
        }
  }
  ChannelStats stats;
  stats.mean = sum.cwiseQuotient(count);
  Eigen::VectorXd var =
      sumsq.cwiseQuotient(count) - stats.mean.cwiseProduct(stats.mean);
  stats.std = var.cwiseMax(0.0).cwiseSqrt();
  return stats;
}

void normalize(Tensor3& tensor, RepresentationKind kind,
               const ChannelStats& stats) {
  for (int i0 = 0; i0 < tensor.dims[0]; ++i0)
    for (int i1 = 0; i1 < tensor.dims[1]; ++i1)
      for (int i2 = 0; i2 < tensor.dims[2]; ++i2) {
        const int c = tensor_channel(kind, i0, i1, i2);
        tensor(i0, i1, i2) = (tensor(i0, i1, i2) - stats.mean[c]) /
                             std::max(stats.std[c], 1e-8);
      }
}

}  // namespace tactile
