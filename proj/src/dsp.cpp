#include "wakegate/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wakegate/error.hpp"

namespace wakegate {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kLogFloorEps = 1e-6;

bool is_pow2(size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Iterative radix-2 Cooley-Tukey; n must be a power of two.
void fft_radix2(std::vector<std::complex<double>>& a, bool inverse) {
  const size_t n = a.size();
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    double ang = kTwoPi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
    std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (size_t k = 0; k < len / 2; ++k) {
        std::complex<double> u = a[i + k];
        std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

// Bluestein's chirp transform: expresses an arbitrary-length DFT as a
// convolution, which runs on the radix-2 path at the next power of two.
void fft_bluestein(std::vector<std::complex<double>>& a, bool inverse) {
  const size_t n = a.size();
  size_t m = 1;
  while (m < 2 * n + 1) m <<= 1;

  const double sign = inverse ? 1.0 : -1.0;
  std::vector<std::complex<double>> chirp(n);
  for (size_t k = 0; k < n; ++k) {
    // k^2 mod 2n keeps the angle argument small for large n
    double ang = std::numbers::pi * static_cast<double>((k * k) % (2 * n)) /
                 static_cast<double>(n);
    chirp[k] = std::complex<double>(std::cos(ang), sign * std::sin(ang));
  }

  std::vector<std::complex<double>> x(m), y(m);
  for (size_t k = 0; k < n; ++k) x[k] = a[k] * chirp[k];
  y[0] = std::conj(chirp[0]);
  for (size_t k = 1; k < n; ++k) {
    y[k] = std::conj(chirp[k]);
    y[m - k] = std::conj(chirp[k]);
  }
  fft_radix2(x, false);
  fft_radix2(y, false);
  for (size_t k = 0; k < m; ++k) x[k] *= y[k];
  fft_radix2(x, true);
  for (size_t k = 0; k < m; ++k) x[k] /= static_cast<double>(m);
  for (size_t k = 0; k < n; ++k) a[k] = x[k] * chirp[k];
}

}  // namespace

void fft(std::vector<std::complex<double>>& data, bool inverse) {
  if (data.size() <= 1) return;
  if (is_pow2(data.size())) {
    fft_radix2(data, inverse);
  } else {
    fft_bluestein(data, inverse);
  }
  if (inverse) {
    double scale = 1.0 / static_cast<double>(data.size());
    for (auto& v : data) v *= scale;
  }
}

std::vector<double> hann_window(int len) {
  if (len < 1) raise(ErrorCode::InvalidConfig, "window length must be >= 1");
  std::vector<double> w(static_cast<size_t>(len));
  for (int n = 0; n < len; ++n)
    w[static_cast<size_t>(n)] = 0.5 - 0.5 * std::cos(kTwoPi * n / len);
  return w;
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

Matrix stft_power(const PcmClip& clip, const MelConfig& config) {
  const size_t n = clip.samples.size();
  const size_t win = static_cast<size_t>(config.win_len);
  const size_t hop = static_cast<size_t>(config.hop);
  const size_t fft_size = static_cast<size_t>(config.fft_size);
  if (config.win_len > config.fft_size)
    raise(ErrorCode::InvalidConfig, "win_len exceeds fft_size");
  if (n < win) raise(ErrorCode::TooShort, "clip shorter than one window");

  const size_t n_frames = (n - win) / hop + 1;
  const size_t n_bins = fft_size / 2 + 1;
  const std::vector<double> window = hann_window(config.win_len);

  Matrix power(n_frames, n_bins);
  std::vector<std::complex<double>> buf(fft_size);
  for (size_t f = 0; f < n_frames; ++f) {
    const float* src = clip.samples.data() + f * hop;
    for (size_t i = 0; i < win; ++i)
      buf[i] = std::complex<double>(static_cast<double>(src[i]) * window[i], 0.0);
    std::fill(buf.begin() + static_cast<long>(win), buf.end(),
              std::complex<double>(0.0, 0.0));
    fft(buf);
    for (size_t k = 0; k < n_bins; ++k) power.at(f, k) = std::norm(buf[k]);
  }
  return power;
}

Matrix mel_filterbank(const MelConfig& config) {
  if (!(config.f_min >= 0.0 && config.f_min < config.f_max &&
        config.f_max <= config.sample_rate / 2.0))
    raise(ErrorCode::InvalidRange, "need 0 <= f_min < f_max <= sample_rate/2");
  if (config.n_mels < 1) raise(ErrorCode::InvalidRange, "n_mels must be >= 1");

  const size_t n_bins = static_cast<size_t>(config.fft_size) / 2 + 1;
  const int n_mels = config.n_mels;

  // n_mels+2 points evenly spaced in mel; consecutive triples are the
  // left edge, center and right edge of each triangle.
  const double mel_lo = hz_to_mel(config.f_min);
  const double mel_hi = hz_to_mel(config.f_max);
  std::vector<double> edges_hz(static_cast<size_t>(n_mels) + 2);
  for (int i = 0; i < n_mels + 2; ++i)
    edges_hz[static_cast<size_t>(i)] =
        mel_to_hz(mel_lo + (mel_hi - mel_lo) * i / (n_mels + 1));

  const double hz_per_bin =
      static_cast<double>(config.sample_rate) / config.fft_size;
  Matrix fb(static_cast<size_t>(n_mels), n_bins);
  for (int m = 0; m < n_mels; ++m) {
    const double left = edges_hz[static_cast<size_t>(m)];
    const double center = edges_hz[static_cast<size_t>(m) + 1];
    const double right = edges_hz[static_cast<size_t>(m) + 2];
    for (size_t k = 0; k < n_bins; ++k) {
      const double f = static_cast<double>(k) * hz_per_bin;
      double w = 0.0;
      if (f > left && f < right) {
        w = f <= center ? (f - left) / (center - left)
                        : (right - f) / (right - center);
      }
      fb.at(static_cast<size_t>(m), k) = std::max(0.0, w);
    }
  }
  return fb;
}

Matrix scale_mels(const Matrix& log_mels) {
  Matrix out = log_mels;
  for (double& v : out.values) v = v / 10.0 + 2.0;
  return out;
}

std::vector<MelFrame> melspectrogram(const PcmClip& clip, const MelConfig& config) {
  return melspectrogram(clip, config, mel_filterbank(config));
}

std::vector<MelFrame> melspectrogram(const PcmClip& clip, const MelConfig& config,
                                     const Matrix& filterbank) {
  const Matrix power = stft_power(clip, config);
  const size_t n_mels = filterbank.rows;
  const size_t n_bins = filterbank.cols;

  std::vector<MelFrame> frames(power.rows);
  for (size_t f = 0; f < power.rows; ++f) {
    MelFrame& frame = frames[f];
    frame.resize(n_mels);
    for (size_t m = 0; m < n_mels; ++m) {
      double acc = 0.0;
      const double* w = filterbank.values.data() + m * n_bins;
      const double* p = power.values.data() + f * n_bins;
      for (size_t k = 0; k < n_bins; ++k) acc += w[k] * p[k];
      frame[m] = static_cast<float>(std::log(acc + kLogFloorEps) / 10.0 + 2.0);
    }
  }
  return frames;
}

}  // namespace wakegate
