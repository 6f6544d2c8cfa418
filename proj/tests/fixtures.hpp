#pragma once

// Seeded signal generators and scratch-directory plumbing shared by the
// test binaries. The PRNG here is local to the tests so fixture audio does
// not depend on any library seeding choice.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

#include "wakegate/audio_io.hpp"

namespace testfix {

inline uint64_t mix64(uint64_t& s) {
  s += 0x9e3779b97f4a7c15ULL;
  uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Uniform in [0, 1).
inline double unit(uint64_t& s) {
  return static_cast<double>(mix64(s) >> 11) * 0x1.0p-53;
}

// Uniform in [-1, 1).
inline double sym(uint64_t& s) { return 2.0 * unit(s) - 1.0; }

inline wakegate::PcmClip noise_clip(uint64_t seed, size_t n, float amp = 0.5f) {
  wakegate::PcmClip clip;
  clip.samples.reserve(n);
  uint64_t s = seed;
  for (size_t i = 0; i < n; ++i)
    clip.samples.push_back(amp * static_cast<float>(sym(s)));
  return clip;
}

inline wakegate::PcmClip tone_clip(double freq_hz, size_t n, float amp = 0.5f,
                                   int sample_rate = 16000) {
  wakegate::PcmClip clip;
  clip.sample_rate = sample_rate;
  clip.samples.reserve(n);
  const double w = 2.0 * std::numbers::pi * freq_hz / sample_rate;
  for (size_t i = 0; i < n; ++i)
    clip.samples.push_back(amp * static_cast<float>(std::sin(w * static_cast<double>(i))));
  return clip;
}

// Linear sweep f0 -> f1 over the clip; phase is the integral of the
// instantaneous frequency.
inline wakegate::PcmClip chirp_clip(double f0, double f1, size_t n, float amp = 0.5f,
                                    double phase0 = 0.0, int sample_rate = 16000) {
  wakegate::PcmClip clip;
  clip.sample_rate = sample_rate;
  clip.samples.reserve(n);
  const double total = static_cast<double>(n);
  for (size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / sample_rate;
    const double frac = static_cast<double>(i) / total;
    const double phase =
        phase0 + 2.0 * std::numbers::pi * t * (f0 + 0.5 * (f1 - f0) * frac);
    clip.samples.push_back(amp * static_cast<float>(std::sin(phase)));
  }
  return clip;
}

// Sum of seeded sinusoids confined to [center-halfwidth, center+halfwidth];
// a cheap band-limited noise stand-in with an exactly known support.
inline wakegate::PcmClip band_noise_clip(uint64_t seed, size_t n, double center_hz,
                                         double halfwidth_hz, float amp = 0.3f,
                                         int sample_rate = 16000) {
  constexpr int kPartials = 24;
  wakegate::PcmClip clip;
  clip.sample_rate = sample_rate;
  clip.samples.assign(n, 0.0f);
  uint64_t s = seed;
  for (int p = 0; p < kPartials; ++p) {
    const double f = center_hz + halfwidth_hz * sym(s);
    const double phase = std::numbers::pi * sym(s);
    const double w = 2.0 * std::numbers::pi * f / sample_rate;
    for (size_t i = 0; i < n; ++i)
      clip.samples[i] += static_cast<float>(std::sin(w * static_cast<double>(i) + phase));
  }
  float peak = 0.0f;
  for (float v : clip.samples) peak = std::max(peak, std::abs(v));
  if (peak > 0.0f)
    for (float& v : clip.samples) v = amp * (v / peak);
  return clip;
}

class TempDir {
 public:
  TempDir() {
    static std::atomic<uint64_t> counter{0};
    uint64_t tag = static_cast<uint64_t>(
        std::chrono::steady_clock::now().time_since_epoch().count());
    mix64(tag);
    path_ = std::filesystem::temp_directory_path() /
            ("wakegate-test-" + std::to_string(tag % 0xffffff) + "-" +
             std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path file(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::string read_file_bytes(const std::filesystem::path& path) {
  std::string out;
  FILE* f = std::fopen(path.string().c_str(), "rb");
  if (!f) return out;
  char buf[4096];
  size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, got);
  std::fclose(f);
  return out;
}

}  // namespace testfix
