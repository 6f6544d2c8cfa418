#include "wakegate/augment.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "wakegate/dsp.hpp"
#include "wakegate/error.hpp"
#include "wakegate/rng.hpp"

namespace wakegate {

namespace {

constexpr double kSilenceRms = 1e-8;

float clip_sample(double v) {
  return static_cast<float>(std::clamp(v, -1.0, 1.0));
}

double rms(const std::vector<float>& samples) {
  if (samples.empty()) return 0.0;
  double acc = 0.0;
  for (float s : samples) acc += static_cast<double>(s) * static_cast<double>(s);
  return std::sqrt(acc / static_cast<double>(samples.size()));
}

}  // namespace

GainResult apply_gain(const PcmClip& clip, double db) {
  if (!std::isfinite(db)) raise(ErrorCode::InvalidConfig, "gain dB must be finite");
  const double g = std::pow(10.0, db / 20.0);
  GainResult result;
  result.clip.sample_rate = clip.sample_rate;
  result.clip.samples.reserve(clip.samples.size());
  for (float s : clip.samples) {
    const double v = static_cast<double>(s) * g;
    if (v > 1.0 || v < -1.0) ++result.clipped;
    result.clip.samples.push_back(clip_sample(v));
  }
  return result;
}

PcmClip add_noise_snr(const PcmClip& clip, const PcmClip& noise, double snr_db) {
  const double rms_sig = rms(clip.samples);
  if (rms_sig <= kSilenceRms) raise(ErrorCode::SilentSignal, "signal is silent");
  if (noise.samples.empty() || rms(noise.samples) <= kSilenceRms)
    raise(ErrorCode::SilentNoise, "noise is silent");

  std::vector<float> tiled(clip.samples.size());
  for (size_t i = 0; i < tiled.size(); ++i)
    tiled[i] = noise.samples[i % noise.samples.size()];
  const double rms_tiled = rms(tiled);
  if (rms_tiled <= kSilenceRms) raise(ErrorCode::SilentNoise, "tiled noise is silent");

  const double scale = rms_sig * std::pow(10.0, -snr_db / 20.0) / rms_tiled;
  PcmClip out;
  out.sample_rate = clip.sample_rate;
  out.samples.reserve(clip.samples.size());
  for (size_t i = 0; i < clip.samples.size(); ++i)
    out.samples.push_back(clip_sample(static_cast<double>(clip.samples[i]) +
                                      static_cast<double>(tiled[i]) * scale));
  return out;
}

PcmClip convolve_rir(const PcmClip& clip, const PcmClip& rir) {
  if (rir.samples.empty()) raise(ErrorCode::EmptyRir, "empty impulse response");
  if (clip.samples.empty()) return clip;

  const size_t n = clip.samples.size();
  const size_t m = rir.samples.size();
  size_t fft_size = 1;
  while (fft_size < n + m - 1) fft_size <<= 1;

  std::vector<std::complex<double>> a(fft_size), b(fft_size);
  for (size_t i = 0; i < n; ++i) a[i] = static_cast<double>(clip.samples[i]);
  for (size_t i = 0; i < m; ++i) b[i] = static_cast<double>(rir.samples[i]);
  fft(a);
  fft(b);
  for (size_t i = 0; i < fft_size; ++i) a[i] *= b[i];
  fft(a, true);

  double in_peak = 0.0;
  for (float s : clip.samples) in_peak = std::max(in_peak, std::abs(static_cast<double>(s)));
  double out_peak = 0.0;
  for (size_t i = 0; i < n; ++i) out_peak = std::max(out_peak, std::abs(a[i].real()));
  const double scale = (out_peak > 0.0 && in_peak > 0.0) ? in_peak / out_peak : 1.0;

  PcmClip out;
  out.sample_rate = clip.sample_rate;
  out.samples.reserve(n);
  for (size_t i = 0; i < n; ++i) out.samples.push_back(clip_sample(a[i].real() * scale));
  return out;
}

PcmClip band_stop(const PcmClip& clip, double f_lo, double f_hi) {
  const double nyquist = clip.sample_rate / 2.0;
  if (!(0.0 < f_lo && f_lo < f_hi && f_hi < nyquist))
    raise(ErrorCode::InvalidBand, "need 0 < f_lo < f_hi < " + std::to_string(nyquist));
  if (clip.samples.empty()) return clip;

  const size_t n = clip.samples.size();
  std::vector<std::complex<double>> buf(n);
  for (size_t i = 0; i < n; ++i) buf[i] = static_cast<double>(clip.samples[i]);
  fft(buf);

  const double hz_per_bin = static_cast<double>(clip.sample_rate) / static_cast<double>(n);
  for (size_t k = 0; k <= n / 2; ++k) {
    const double f = static_cast<double>(k) * hz_per_bin;
    if (f >= f_lo && f <= f_hi) {
      buf[k] = 0.0;
      if (k > 0 && k < n - k) buf[n - k] = 0.0;
    }
  }
  fft(buf, true);

  PcmClip out;
  out.sample_rate = clip.sample_rate;
  out.samples.reserve(n);
  for (size_t i = 0; i < n; ++i) out.samples.push_back(clip_sample(buf[i].real()));
  return out;
}

PcmClip tanh_distortion(const PcmClip& clip, double k) {
  if (!(k > 0.0)) raise(ErrorCode::NonPositiveDrive, "drive must be > 0");
  const double denom = std::tanh(k);
  PcmClip out;
  out.sample_rate = clip.sample_rate;
  out.samples.reserve(clip.samples.size());
  for (float s : clip.samples)
    out.samples.push_back(
        clip_sample(std::tanh(k * static_cast<double>(s)) / denom));
  return out;
}

AugmentResult augment_clip(const PcmClip& clip, const AugmentPlan& plan,
                           uint64_t index) {
  if (plan.p_noise > 0.0 && plan.noise_bank.empty())
    raise(ErrorCode::InvalidConfig, "noise bank empty with p_noise > 0");
  if (plan.p_rir > 0.0 && plan.rir_bank.empty())
    raise(ErrorCode::InvalidConfig, "rir bank empty with p_rir > 0");

  SplitMix64 rng(derive_stream_seed(plan.seed, index));
  AugmentResult result;
  result.clip = clip;
  result.ops = nlohmann::ordered_json::array();

  // Fixed draw order keeps (seed, index) -> output stable even when an op
  // does not fire: every branch consumes the same draws.
  const bool do_noise = rng.next_unit() < plan.p_noise;
  size_t noise_idx = 0;
  double snr_db = 0.0;
  if (do_noise) {
    noise_idx = rng.next_below(plan.noise_bank.size());
    snr_db = rng.next_uniform(plan.snr_lo_db, plan.snr_hi_db);
  }

  // Pitch shifting is not implemented; its selection and parameter draws
  // are still consumed so later draws keep their positions.
  const bool do_pitch = rng.next_unit() < plan.p_pitch;
  (void)rng.next_unit();
  (void)do_pitch;

  const bool do_rir = rng.next_unit() < plan.p_rir;
  size_t rir_idx = 0;
  if (do_rir) rir_idx = rng.next_below(plan.rir_bank.size());

  const double gain_db = rng.next_uniform(plan.gain_lo_db, plan.gain_hi_db);

  if (do_noise) {
    result.clip = add_noise_snr(result.clip, plan.noise_bank[noise_idx], snr_db);
    result.ops.push_back({{"op", "noise"},
                          {"bank_index", noise_idx},
                          {"snr_db", snr_db}});
  }
  if (do_rir) {
    result.clip = convolve_rir(result.clip, plan.rir_bank[rir_idx]);
    result.ops.push_back({{"op", "rir"}, {"bank_index", rir_idx}});
  }
  GainResult gained = apply_gain(result.clip, gain_db);
  result.clip = std::move(gained.clip);
  result.ops.push_back(
      {{"op", "gain"}, {"db", gain_db}, {"clipped", gained.clipped}});
  return result;
}

}  // namespace wakegate
