#pragma once

#include "tactile/series.hpp"
#include "tactile/tensor.hpp"
#include "tactile/windowing.hpp"

#include <span>
#include <string>
#include <vector>

namespace tactile {

enum class RepresentationKind { STFT, STT, RT };

enum class SpectralWindow { Hann, Rectangular };
enum class SpectralScale { Magnitude, Power, LogMagnitude };

struct RepresentationParams {
  RepresentationKind kind = RepresentationKind::STFT;
  SpectralWindow window = SpectralWindow::Hann;
  SpectralScale scale = SpectralScale::Magnitude;
};

const char* representation_name(RepresentationKind k);
RepresentationKind representation_from_name(const std::string& name);
const char* spectral_window_name(SpectralWindow w);
SpectralWindow spectral_window_from_name(const std::string& name);
const char* spectral_scale_name(SpectralScale s);
SpectralScale spectral_scale_from_name(const std::string& name);

// Input dims a representation produces under a windowing config:
// STFT (28, sub_len/2+1, frames), STT (28, sub_len, frames), RT (detect_len, 7, 4).
std::array<int, 3> representation_dims(RepresentationKind kind,
                                       const WindowingConfig& cfg);

// Spectrogram stack: entry [c, b, k] = scaled one-sided DFT bin b of the
// windowed k-th sub-window of channel c. Axes (channel, frequency, time-frame).
Tensor3 build_stft(const LabeledWindow& window, const WindowingConfig& cfg,
                   const RepresentationParams& params = {});

// Pseudo-spectrogram: same sub-window layout, raw time-domain values.
// Entry [c, p, k] = channel c at window-local index k*sub_hop + p.
Tensor3 build_stt(const LabeledWindow& window, const WindowingConfig& cfg);

// Raw-time stack: entry [t, i, f] = frame t, joint i, feature f.
Tensor3 build_rt(const LabeledWindow& window);

Tensor3 build_representation(const LabeledWindow& window,
                             const WindowingConfig& cfg,
                             const RepresentationParams& params);

// Independent O(N^2) reference transform used by tests and acceptance checks:
// bin b = |sum_n x[n] exp(-i 2 pi b n / N)| for b = 0..N/2. Throws OddLength.
Eigen::VectorXd dft_magnitude_oracle(const Eigen::VectorXd& samples);

// One-sided DFT magnitudes on the production path (radix-2 FFT for power-of-two
// lengths, direct accumulation otherwise). N must be even.
Eigen::VectorXd spectrum_magnitude(const Eigen::VectorXd& samples);

// Per-channel normalization statistics estimated on a training set.
struct ChannelStats {
  Eigen::VectorXd mean;  // size 28
  Eigen::VectorXd std;   // size 28
};

// Representation channel of a tensor entry: axis 0 for STFT/STT, the
// joint-major (i1, i2) pair for RT. Identical ordering across all three kinds.
inline int tensor_channel(RepresentationKind kind, int i0, int i1, int i2) {
  (void)i2;
  return kind == RepresentationKind::RT ? i1 * kFeatureCount + i2 : i0;
}

ChannelStats compute_channel_stats(std::span<const Tensor3> tensors,
                                   RepresentationKind kind);

// z-score with std floored at 1e-8.
void normalize(Tensor3& tensor, RepresentationKind kind,
               const ChannelStats& stats);

}  // namespace tactile
