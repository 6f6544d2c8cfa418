#include "wakegate/audio_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "wakegate/error.hpp"

namespace wakegate {

namespace {

constexpr int kSampleRate = 16000;

// Thresholds for the VAD's noise-floor logic. The relative threshold
// (floor + energy_floor_db) is capped 3 dB below the loudest frame so a clip
// that is speech end-to-end still detects, and an absolute -60 dBFS gate
// keeps digital silence from ever counting as speech.
constexpr double kVadPeakMarginDb = 3.0;
constexpr double kVadAbsSilenceDb = -60.0;

uint32_t read_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (!in) raise(ErrorCode::TruncatedFile, "unexpected end of file");
  return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
         (static_cast<uint32_t>(b[2]) << 16) |
         (static_cast<uint32_t>(b[3]) << 24);
}

uint16_t read_u16(std::istream& in) {
  unsigned char b[2];
  in.read(reinterpret_cast<char*>(b), 2);
  if (!in) raise(ErrorCode::TruncatedFile, "unexpected end of file");
  return static_cast<uint16_t>(b[0] | (b[1] << 8));
}

void write_u32(std::ostream& out, uint32_t v) {
  char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
               static_cast<char>((v >> 16) & 0xff),
               static_cast<char>((v >> 24) & 0xff)};
  out.write(b, 4);
}

void write_u16(std::ostream& out, uint16_t v) {
  char b[2] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff)};
  out.write(b, 2);
}

}  // namespace

PcmClip read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::IoError, "cannot open " + path);

  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "RIFF", 4) != 0)
    raise(ErrorCode::NotWav, path + ": missing RIFF header");
  read_u32(in);  // riff size, not trusted
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "WAVE", 4) != 0)
    raise(ErrorCode::NotWav, path + ": not a WAVE container");

  bool have_fmt = false;
  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  PcmClip clip;

  while (in.read(magic, 4)) {
    uint32_t chunk_size = read_u32(in);
    if (std::memcmp(magic, "fmt ", 4) == 0) {
      if (chunk_size < 16) raise(ErrorCode::TruncatedFile, path + ": short fmt chunk");
      format = read_u16(in);
      channels = read_u16(in);
      rate = read_u32(in);
      read_u32(in);  // byte rate
      read_u16(in);  // block align
      bits = read_u16(in);
      in.ignore(chunk_size - 16);
      have_fmt = true;
    } else if (std::memcmp(magic, "data", 4) == 0) {
      if (!have_fmt) raise(ErrorCode::NotWav, path + ": data before fmt");
      if (format != 1 || bits != 16)
        raise(ErrorCode::UnsupportedFormat, path + ": only PCM 16-bit is accepted");
      if (channels != 1)
        raise(ErrorCode::UnsupportedFormat, path + ": only mono is accepted");
      if (rate != kSampleRate)
        raise(ErrorCode::UnsupportedFormat, path + ": only 16 kHz is accepted");
      size_t n = chunk_size / 2;
      clip.samples.resize(n);
      for (size_t i = 0; i < n; ++i) {
        unsigned char b[2];
        in.read(reinterpret_cast<char*>(b), 2);
        if (!in) raise(ErrorCode::TruncatedFile, path + ": data chunk cut short");
        int16_t v = static_cast<int16_t>(b[0] | (b[1] << 8));
        clip.samples[i] = static_cast<float>(v) / 32768.0f;
      }
      clip.sample_rate = static_cast<int>(rate);
      return clip;
    } else {
      // skip unknown chunk, padded to even length
      in.ignore(chunk_size + (chunk_size & 1));
    }
  }
  raise(ErrorCode::TruncatedFile, path + ": no data chunk");
}

void write_wav(const PcmClip& clip, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(ErrorCode::IoError, "cannot open " + path + " for writing");

  uint32_t data_bytes = static_cast<uint32_t>(clip.samples.size() * 2);
  out.write("RIFF", 4);
  write_u32(out, 36 + data_bytes);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  write_u32(out, 16);
  write_u16(out, 1);  // PCM
  write_u16(out, 1);  // mono
  write_u32(out, static_cast<uint32_t>(clip.sample_rate));
  write_u32(out, static_cast<uint32_t>(clip.sample_rate) * 2);
  write_u16(out, 2);   // block align
  write_u16(out, 16);  // bits
  out.write("data", 4);
  write_u32(out, data_bytes);
  for (float s : clip.samples) {
    long q = std::lrint(static_cast<double>(s) * 32768.0);
    q = std::clamp(q, -32768l, 32767l);
    write_u16(out, static_cast<uint16_t>(static_cast<int16_t>(q)));
  }
  if (!out) raise(ErrorCode::IoError, "write failed: " + path);
}

NormalizeResult rms_normalize(const PcmClip& clip, double target_dbfs) {
  double sumsq = 0.0;
  for (float s : clip.samples) sumsq += static_cast<double>(s) * s;
  double rms = clip.samples.empty() ? 0.0 : std::sqrt(sumsq / clip.samples.size());
  if (rms <= 1e-8) raise(ErrorCode::SilentInput, "clip RMS at or below 1e-8");

  double target = std::pow(10.0, target_dbfs / 20.0);
  double gain = target / rms;

  NormalizeResult result;
  result.gain = gain;
  result.clip.sample_rate = clip.sample_rate;
  result.clip.samples.reserve(clip.samples.size());
  for (float s : clip.samples) {
    double v = static_cast<double>(s) * gain;
    if (v > 1.0) {
      v = 1.0;
      ++result.clipped;
    } else if (v < -1.0) {
      v = -1.0;
      ++result.clipped;
    }
    result.clip.samples.push_back(static_cast<float>(v));
  }
  return result;
}

VadResult vad_trim(const PcmClip& clip, const VadParams& params) {
  VadResult result;
  result.clip.sample_rate = clip.sample_rate;

  const size_t n = clip.samples.size();
  const size_t frame_len = static_cast<size_t>(params.frame_len);
  const size_t hop = static_cast<size_t>(params.hop);
  if (n < frame_len) return result;  // too short to hold one frame

  const size_t n_frames = (n - frame_len) / hop + 1;
  std::vector<double> energy_db(n_frames);
  for (size_t f = 0; f < n_frames; ++f) {
    double sumsq = 0.0;
    const float* p = clip.samples.data() + f * hop;
    for (size_t i = 0; i < frame_len; ++i) sumsq += static_cast<double>(p[i]) * p[i];
    energy_db[f] = 10.0 * std::log10(sumsq / frame_len + 1e-12);
  }

  // Noise floor = 10th percentile of frame energies.
  std::vector<double> sorted(energy_db);
  std::sort(sorted.begin(), sorted.end());
  double floor_db = sorted[(sorted.size() - 1) / 10];
  double peak_db = sorted.back();
  double threshold = std::min(floor_db + params.energy_floor_db,
                              peak_db - kVadPeakMarginDb);
  threshold = std::max(threshold, kVadAbsSilenceDb);

  // Runs of at least min_speech_frames qualifying frames count as speech;
  // each run is extended by hangover_frames.
  std::vector<bool> speech(n_frames, false);
  size_t run_start = 0, run_len = 0;
  for (size_t f = 0; f <= n_frames; ++f) {
    bool active = f < n_frames && energy_db[f] >= threshold;
    if (active) {
      if (run_len == 0) run_start = f;
      ++run_len;
    } else {
      if (run_len >= static_cast<size_t>(params.min_speech_frames)) {
        size_t run_end = std::min(f - 1 + static_cast<size_t>(params.hangover_frames),
                                  n_frames - 1);
        for (size_t i = run_start; i <= run_end; ++i) speech[i] = true;
      }
      run_len = 0;
    }
  }

  size_t first = n_frames, last = 0;
  for (size_t f = 0; f < n_frames; ++f) {
    if (speech[f]) {
      if (first == n_frames) first = f;
      last = f;
    }
  }
  if (first == n_frames) return result;  // nothing qualified

  result.speech_detected = true;
  result.start_sample = first * hop;
  result.end_sample = std::min(last * hop + frame_len, n);
  result.clip.samples.assign(clip.samples.begin() + result.start_sample,
                             clip.samples.begin() + result.end_sample);
  return result;
}

}  // namespace wakegate
