#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "wakegate/audio_io.hpp"
#include "wakegate/dsp.hpp"
#include "wakegate/stream_state.hpp"

namespace wakegate {

inline constexpr size_t kSpeakerDim = 256;
inline constexpr size_t kSpeakerStatsDim = 128;

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b);

enum class Approach { A, B };

struct AuthConfig {
  Approach approach = Approach::B;
  double auth_threshold = 0.5;
  double wake_threshold = 0.5;  // A's dual gate; mirrors the pipeline threshold
  int a_num_frames = 50;
  int a_required_samples = 27136;  // 2048 + 49*512, the minimum for 50 frames
  int b_chunk_samples = 4000;
};

// 96-bin mel (win 2048, hop 512), first num_frames frames averaged per bin.
std::vector<double> approach_a_embedding(const PcmClip& audio, int num_frames = 50);

enum class EncoderKind { NativeStandin, External };

struct VoiceEncoderSpec {
  EncoderKind kind = EncoderKind::NativeStandin;
  uint64_t seed = 0;
  Matrix p;  // [256 x 128], uniform(-1,1) from the seed
};

VoiceEncoderSpec init_native_encoder(uint64_t seed);

// Pipeline mel frames over exactly chunk_samples samples, summarized as
// [per-bin mean, std, delta-mean, delta-std] (population std, adjacent
// deltas), projected by P and L2-normalized.
std::vector<double> encode_speaker_256(const VoiceEncoderSpec& spec,
                                       const PcmClip& audio, int chunk_samples = 4000);

struct ReferenceProfile {
  std::vector<double> ref_a;  // 96
  std::vector<double> ref_b;  // 256, unit norm
  uint32_t enrolled_clips = 0;
};

// ref_a = mean of per-clip approach_a_embedding; ref_b = normalized mean of
// per-clip encode_speaker_256 on each clip's last b_chunk_samples samples.
ReferenceProfile enroll(const std::vector<PcmClip>& clips,
                        const VoiceEncoderSpec& encoder, const AuthConfig& config);

struct AuthResult {
  bool success = false;
  std::optional<double> similarity;
  Approach approach = Approach::B;
  std::string reason;  // set when the attempt failed before scoring
};

// Approach A: cosine vs ref_a over the last a_required_samples, success iff
// sim >= max(auth_threshold, wake_threshold). Approach B: cosine vs ref_b
// over the last b_chunk_samples, success iff sim >= auth_threshold.
// Errors become unsuccessful results with a reason.
AuthResult authenticate(const ReferenceProfile& profile, const ClientState& state,
                        const VoiceEncoderSpec& encoder, const AuthConfig& config);

// Same, but the audio window ends at absolute stream position end_pos, so
// results do not depend on pushes newer than end_pos.
AuthResult authenticate_at(const ReferenceProfile& profile, const ClientState& state,
                           uint64_t end_pos, const VoiceEncoderSpec& encoder,
                           const AuthConfig& config);

// Profile file: magic "WGSP", u32 96, u32 256, f32 LE ref_a then ref_b,
// u32 enrolled_clips.
void save_profile(const ReferenceProfile& profile, const std::filesystem::path& path);
ReferenceProfile load_profile(const std::filesystem::path& path);

}  // namespace wakegate
