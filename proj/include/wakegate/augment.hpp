#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wakegate/audio_io.hpp"

namespace wakegate {

struct GainResult {
  PcmClip clip;
  size_t clipped = 0;  // samples hard-limited to [-1, 1]
};

// samples * 10^(db/20), hard-clipped.
GainResult apply_gain(const PcmClip& clip, double db);

// Noise tiled to the clip length and scaled so
// 20*log10(rms_signal / rms_scaled_noise) == snr_db, then added and clipped.
PcmClip add_noise_snr(const PcmClip& clip, const PcmClip& noise, double snr_db);

// Full linear convolution truncated to the input length, peak-renormalized
// to the input's peak.
PcmClip convolve_rir(const PcmClip& clip, const PcmClip& rir);

// Brick-wall: whole-clip DFT, bins with |f| in [f_lo, f_hi] zeroed, inverse.
PcmClip band_stop(const PcmClip& clip, double f_lo, double f_hi);

// tanh(k*x)/tanh(k): odd, monotone, unit gain at full scale.
PcmClip tanh_distortion(const PcmClip& clip, double k);

struct AugmentPlan {
  uint64_t seed = 0;
  double p_noise = 0.75;
  double p_pitch = 0.25;  // draws are consumed, op not implemented
  double p_rir = 0.50;
  std::vector<PcmClip> noise_bank;
  std::vector<PcmClip> rir_bank;
  double snr_lo_db = 5.0;
  double snr_hi_db = 30.0;
  double gain_lo_db = -6.0;
  double gain_hi_db = 6.0;
};

struct AugmentResult {
  PcmClip clip;
  nlohmann::ordered_json ops;  // array of applied ops with their parameters
};

// Pure function of (clip, plan, index). Draw order: noise (select, bank
// pick, SNR), pitch (select, one discarded parameter), rir (select, bank
// pick), gain dB (always). Applied as noise -> rir -> gain.
AugmentResult augment_clip(const PcmClip& clip, const AugmentPlan& plan,
                           uint64_t index);

}  // namespace wakegate
