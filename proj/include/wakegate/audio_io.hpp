#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace wakegate {

// Mono audio in [-1, 1]. Everything in the pipeline runs at 16 kHz.
struct PcmClip {
  std::vector<float> samples;
  int sample_rate = 16000;

  size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
};

struct VadParams {
  int frame_len = 400;           // samples per analysis frame
  int hop = 160;                 // samples between frames
  double energy_floor_db = 10.0; // speech must sit this far above the noise floor
  int min_speech_frames = 3;     // shortest run counted as speech
  int hangover_frames = 5;       // frames kept after a speech run ends
};

// Reads a RIFF/WAVE file. Only PCM 16-bit little-endian mono 16 kHz is
// accepted; anything else raises UnsupportedFormat. Samples map as v/32768.
PcmClip read_wav(const std::string& path);

// Writes the clip as PCM 16-bit mono. Values are rounded to the nearest
// 16-bit step and clamped to [-32768, 32767], so a round trip through disk
// stays within one quantization step of the original.
void write_wav(const PcmClip& clip, const std::string& path);

struct NormalizeResult {
  PcmClip clip;
  double gain = 1.0;
  size_t clipped = 0;  // samples hard-clipped after applying the gain
};

// Scales the clip so its RMS hits target_dbfs (0 dBFS = RMS 1.0). Raises
// SilentInput when the RMS is at or below 1e-8.
NormalizeResult rms_normalize(const PcmClip& clip, double target_dbfs = -20.0);

struct VadResult {
  PcmClip clip;                // contiguous sub-range of the input
  bool speech_detected = false;
  size_t start_sample = 0;     // offset of the returned range in the input
  size_t end_sample = 0;       // one past the last returned sample
};

// Energy-based trim: frames whose energy clears the estimated noise floor by
// energy_floor_db, sustained for min_speech_frames and extended by
// hangover_frames, delimit the returned range. Inputs with no qualifying
// frames come back empty with speech_detected=false.
VadResult vad_trim(const PcmClip& clip, const VadParams& params = {});

}  // namespace wakegate
