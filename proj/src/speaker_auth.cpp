#include "wakegate/speaker_auth.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "binio.hpp"
#include "wakegate/error.hpp"
#include "wakegate/rng.hpp"

namespace wakegate {

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size())
    raise(ErrorCode::DimMismatch, "cosine over " + std::to_string(a.size()) + " vs " +
                                      std::to_string(b.size()) + " dims");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0)
    raise(ErrorCode::ZeroVector, "cosine similarity of a zero vector");
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::vector<double> approach_a_embedding(const PcmClip& audio, int num_frames) {
  if (num_frames < 1) raise(ErrorCode::InvalidConfig, "num_frames must be >= 1");
  const MelConfig config = approach_a_mel_config();
  const size_t needed = static_cast<size_t>(config.win_len) +
                        static_cast<size_t>(num_frames - 1) *
                            static_cast<size_t>(config.hop);
  if (audio.samples.size() < needed)
    raise(ErrorCode::InsufficientAudio,
          "need " + std::to_string(needed) + " samples for " +
              std::to_string(num_frames) + " frames, have " +
              std::to_string(audio.samples.size()));

  const std::vector<MelFrame> frames = melspectrogram(audio, config);
  std::vector<double> mean(static_cast<size_t>(config.n_mels), 0.0);
  for (int t = 0; t < num_frames; ++t)
    for (size_t m = 0; m < mean.size(); ++m)
      mean[m] += static_cast<double>(frames[static_cast<size_t>(t)][m]);
  for (double& v : mean) v /= static_cast<double>(num_frames);
  return mean;
}

VoiceEncoderSpec init_native_encoder(uint64_t seed) {
  VoiceEncoderSpec spec;
  spec.kind = EncoderKind::NativeStandin;
  spec.seed = seed;
  spec.p = Matrix(kSpeakerDim, kSpeakerStatsDim);
  SplitMix64 rng(seed);
  for (double& v : spec.p.values) v = rng.next_symmetric();
  return spec;
}

std::vector<double> encode_speaker_256(const VoiceEncoderSpec& spec,
                                       const PcmClip& audio, int chunk_samples) {
  if (audio.samples.size() != static_cast<size_t>(chunk_samples))
    raise(ErrorCode::WrongChunkSize,
          "speaker chunk must be exactly " + std::to_string(chunk_samples) +
              " samples, got " + std::to_string(audio.samples.size()));

  const MelConfig config = pipeline_mel_config();
  const std::vector<MelFrame> frames = melspectrogram(audio, config);
  const size_t n_mels = static_cast<size_t>(config.n_mels);
  const size_t n = frames.size();
  if (n < 2) raise(ErrorCode::TooShort, "speaker chunk yields fewer than 2 frames");

  std::vector<double> stats(kSpeakerStatsDim, 0.0);
  for (size_t m = 0; m < n_mels; ++m) {
    double mean = 0.0;
    for (size_t t = 0; t < n; ++t) mean += static_cast<double>(frames[t][m]);
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (size_t t = 0; t < n; ++t) {
      const double d = static_cast<double>(frames[t][m]) - mean;
      var += d * d;
    }
    stats[m] = mean;
    stats[n_mels + m] = std::sqrt(var / static_cast<double>(n));

    double dmean = 0.0;
    for (size_t t = 0; t + 1 < n; ++t)
      dmean += static_cast<double>(frames[t + 1][m]) - static_cast<double>(frames[t][m]);
    dmean /= static_cast<double>(n - 1);
    double dvar = 0.0;
    for (size_t t = 0; t + 1 < n; ++t) {
      const double d = static_cast<double>(frames[t + 1][m]) -
                       static_cast<double>(frames[t][m]) - dmean;
      dvar += d * d;
    }
    stats[2 * n_mels + m] = dmean;
    stats[3 * n_mels + m] = std::sqrt(dvar / static_cast<double>(n - 1));
  }

  if (std::all_of(stats.begin(), stats.end(), [](double v) { return v == 0.0; }))
    raise(ErrorCode::DegenerateAudio, "all-zero statistics vector");

  std::vector<double> y(kSpeakerDim, 0.0);
  for (size_t i = 0; i < kSpeakerDim; ++i) {
    const double* row = spec.p.values.data() + i * kSpeakerStatsDim;
    double acc = 0.0;
    for (size_t j = 0; j < kSpeakerStatsDim; ++j) acc += row[j] * stats[j];
    y[i] = acc;
  }
  double norm = 0.0;
  for (double v : y) norm += v * v;
  norm = std::sqrt(norm);
  if (norm == 0.0) raise(ErrorCode::DegenerateAudio, "zero speaker embedding");
  for (double& v : y) v /= norm;
  return y;
}

ReferenceProfile enroll(const std::vector<PcmClip>& clips,
                        const VoiceEncoderSpec& encoder, const AuthConfig& config) {
  if (clips.empty()) raise(ErrorCode::EmptyEnrollment, "no enrollment clips");

  ReferenceProfile profile;
  profile.ref_a.assign(kEmbeddingDim, 0.0);
  profile.ref_b.assign(kSpeakerDim, 0.0);

  for (const PcmClip& clip : clips) {
    const std::vector<double> a = approach_a_embedding(clip, config.a_num_frames);
    for (size_t i = 0; i < a.size(); ++i) profile.ref_a[i] += a[i];

    const size_t chunk = static_cast<size_t>(config.b_chunk_samples);
    if (clip.samples.size() < chunk)
      raise(ErrorCode::InsufficientAudio,
            "clip shorter than " + std::to_string(chunk) + " samples");
    PcmClip tail;
    tail.sample_rate = clip.sample_rate;
    tail.samples.assign(clip.samples.end() - static_cast<long>(chunk),
                        clip.samples.end());
    const std::vector<double> b = encode_speaker_256(encoder, tail,
                                                     config.b_chunk_samples);
    for (size_t i = 0; i < b.size(); ++i) profile.ref_b[i] += b[i];
  }

  const double inv = 1.0 / static_cast<double>(clips.size());
  for (double& v : profile.ref_a) v *= inv;
  for (double& v : profile.ref_b) v *= inv;

  double norm = 0.0;
  for (double v : profile.ref_b) norm += v * v;
  norm = std::sqrt(norm);
  if (norm == 0.0)
    raise(ErrorCode::ZeroVector, "enrollment embeddings cancel to zero");
  for (double& v : profile.ref_b) v /= norm;

  profile.enrolled_clips = static_cast<uint32_t>(clips.size());
  return profile;
}

namespace {

AuthResult authenticate_window(
    const ReferenceProfile& profile,
    const std::function<std::vector<float>(size_t)>& fetch,
    const VoiceEncoderSpec& encoder, const AuthConfig& config) {
  AuthResult result;
  result.approach = config.approach;
  try {
    if (config.approach == Approach::A) {
      PcmClip audio;
      audio.samples = fetch(static_cast<size_t>(config.a_required_samples));
      const double sim =
          cosine_similarity(approach_a_embedding(audio, config.a_num_frames),
                            profile.ref_a);
      result.similarity = sim;
      result.success = sim >= std::max(config.auth_threshold, config.wake_threshold);
    } else {
      PcmClip audio;
      audio.samples = fetch(static_cast<size_t>(config.b_chunk_samples));
      const double sim = cosine_similarity(
          encode_speaker_256(encoder, audio, config.b_chunk_samples), profile.ref_b);
      result.similarity = sim;
      result.success = sim >= config.auth_threshold;
    }
  } catch (const Error& e) {
    result.success = false;
    result.similarity.reset();
    result.reason = e.what();
  }
  return result;
}

}  // namespace

AuthResult authenticate(const ReferenceProfile& profile, const ClientState& state,
                        const VoiceEncoderSpec& encoder, const AuthConfig& config) {
  return authenticate_window(
      profile, [&](size_t n) { return recent_audio(state, n); }, encoder, config);
}

AuthResult authenticate_at(const ReferenceProfile& profile, const ClientState& state,
                           uint64_t end_pos, const VoiceEncoderSpec& encoder,
                           const AuthConfig& config) {
  return authenticate_window(
      profile, [&](size_t n) { return audio_window(state, end_pos, n); }, encoder,
      config);
}

void save_profile(const ReferenceProfile& profile, const std::filesystem::path& path) {
  if (profile.ref_a.size() != kEmbeddingDim || profile.ref_b.size() != kSpeakerDim)
    raise(ErrorCode::ShapeMismatch, "profile dims must be 96/256");
  auto out = binio::open_out(path, "WGSP");
  binio::write_magic(out, "WGSP");
  binio::write_u32(out, static_cast<uint32_t>(kEmbeddingDim));
  binio::write_u32(out, static_cast<uint32_t>(kSpeakerDim));
  binio::write_f32_array(out, profile.ref_a);
  binio::write_f32_array(out, profile.ref_b);
  binio::write_u32(out, profile.enrolled_clips);
  if (!out) raise(ErrorCode::IoError, "write failed: " + path.string());
}

ReferenceProfile load_profile(const std::filesystem::path& path) {
  auto in = binio::open_in(path, "WGSP");
  binio::expect_magic(in, "WGSP", "WGSP");
  const uint32_t dim_a = binio::read_u32(in, "WGSP dim_a");
  const uint32_t dim_b = binio::read_u32(in, "WGSP dim_b");
  if (dim_a != kEmbeddingDim || dim_b != kSpeakerDim)
    raise(ErrorCode::UnsupportedFormat, "WGSP dims " + std::to_string(dim_a) + "/" +
                                            std::to_string(dim_b) +
                                            ", expected 96/256");
  ReferenceProfile profile;
  profile.ref_a = binio::read_f32_array(in, dim_a, "WGSP ref_a");
  profile.ref_b = binio::read_f32_array(in, dim_b, "WGSP ref_b");
  profile.enrolled_clips = binio::read_u32(in, "WGSP enrolled_clips");
  return profile;
}

}  // namespace wakegate
