#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "wakegate/audio_io.hpp"

namespace wakegate {

struct MelConfig {
  int sample_rate = 16000;
  int win_len = 400;
  int hop = 160;
  int fft_size = 512;  // >= win_len; frames are zero-padded up to this
  int n_mels = 32;
  double f_min = 60.0;
  double f_max = 3800.0;
};

// Front-end preset: 25 ms window, 10 ms hop, 32 bins over 60..3800 Hz.
inline MelConfig pipeline_mel_config() { return MelConfig{}; }

// Preset for the 96-bin speaker embedding: 2048 window/FFT, hop 512.
inline MelConfig approach_a_mel_config() {
  return MelConfig{16000, 2048, 512, 2048, 96, 0.0, 8000.0};
}

// One scaled log-mel frame (n_mels values).
using MelFrame = std::vector<float>;

// Dense row-major matrix of doubles; all DSP intermediates use this.
struct Matrix {
  size_t rows = 0;
  size_t cols = 0;
  std::vector<double> values;

  Matrix() = default;
  Matrix(size_t r, size_t c) : rows(r), cols(c), values(r * c, 0.0) {}
  double& at(size_t r, size_t c) { return values[r * cols + c]; }
  double at(size_t r, size_t c) const { return values[r * cols + c]; }
};

// In-place complex DFT. Radix-2 for power-of-two sizes, Bluestein otherwise,
// so any length gets exact DFT semantics. inverse=true divides by N.
void fft(std::vector<std::complex<double>>& data, bool inverse = false);

// Periodic Hann window: w[n] = 0.5 - 0.5*cos(2*pi*n/len).
std::vector<double> hann_window(int len);

// HTK mel scale.
double hz_to_mel(double hz);
double mel_to_hz(double mel);

// Power spectrogram, [n_frames x (fft_size/2+1)]. Frame f covers samples
// [f*hop, f*hop + win_len), Hann-windowed and zero-padded to fft_size.
// Raises TooShort when the clip cannot hold one window.
Matrix stft_power(const PcmClip& clip, const MelConfig& config);

// Frame count stft_power will produce for n input samples (n >= win_len).
inline size_t stft_frame_count(size_t n, const MelConfig& config) {
  return (n - static_cast<size_t>(config.win_len)) /
             static_cast<size_t>(config.hop) + 1;
}

// Triangular filters with centers evenly spaced on the mel scale between
// f_min and f_max, [n_mels x (fft_size/2+1)]. Weights are >= 0 and each
// filter's support stays inside [f_min, f_max].
Matrix mel_filterbank(const MelConfig& config);

// Elementwise y = x/10 + 2, the normalization the embedding stage expects.
Matrix scale_mels(const Matrix& log_mels);

// Full front end: scale_mels(ln(filterbank * stft_power + 1e-6)) per frame.
// The overload taking a filterbank lets streaming callers build it once.
std::vector<MelFrame> melspectrogram(const PcmClip& clip, const MelConfig& config);
std::vector<MelFrame> melspectrogram(const PcmClip& clip, const MelConfig& config,
                                     const Matrix& filterbank);

}  // namespace wakegate
