#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wakegate/audio_io.hpp"
#include "wakegate/backbone.hpp"
#include "wakegate/dsp.hpp"
#include "wakegate/evalkit.hpp"
#include "wakegate/speaker_auth.hpp"
#include "wakegate/stream_state.hpp"
#include "wakegate/wakeword.hpp"

namespace wakegate {

struct PipelineConfig {
  int mel_samples = 1760;
  int emb_features = 76;
  int emb_step = 8;
  int ww_windows = 16;
  double wake_threshold = 0.5;
  int trigger_level = 4;
  int cooldown_frames = 20;
  size_t audio_ring_capacity = 48000;
  size_t mel_ring_capacity = 512;
  size_t embedding_ring_capacity = 64;
  MelConfig mel = pipeline_mel_config();
  AuthConfig auth;
};

struct DetectionEvent {
  std::string client_id;
  uint64_t audio_time = 0;  // sample offset of the triggering classification
  double probability = 0.0;
  std::optional<double> similarity;
  bool auth_success = false;
  Approach approach = Approach::B;
  std::string reason;  // empty unless auth failed before scoring
};

// Three-stage engine over per-client stream state: 1760-sample chunks to
// mel frames, sliding 76-frame windows to embeddings, 16-embedding windows
// to gate decisions with speaker auth on trigger.
//
// Threaded runs match step() output per client as long as audio arrives in
// blocks of at most mel_samples samples (run_stream and the CLI both feed
// that way).
class Engine {
 public:
  // (client_id, audio_time, probability, flattened classifier input)
  using ProbabilityTap = std::function<void(const std::string&, uint64_t, double,
                                            const std::vector<double>&)>;

  Engine(PipelineConfig config, EmbedderSpec embedder, FcnModel model);
  ~Engine();

  void set_profile(ReferenceProfile profile, VoiceEncoderSpec encoder);
  void set_scorer(std::function<double(const std::vector<double>&)> scorer);
  void set_probability_tap(ProbabilityTap tap);

  void register_client(const std::string& client_id);

  // Pushes samples, then drains ready work chunk by chunk in stage order.
  // Returns this call's events in audio-time order.
  std::vector<DetectionEvent> step(const std::string& client_id,
                                   std::span<const float> samples);

  const PipelineConfig& config() const { return config_; }

 private:
  struct ClientRuntime;

  ClientRuntime& runtime(const std::string& client_id);
  uint64_t classification_audio_time(uint64_t k) const;
  uint64_t classification_chunk(uint64_t k) const;
  bool consume_one_chunk(ClientRuntime& rt);
  bool drain_embeddings(ClientRuntime& rt);
  void drain_classifications(ClientRuntime& rt, std::vector<DetectionEvent>& out);

  PipelineConfig config_;
  EmbedderSpec embedder_;
  FcnModel model_;
  std::optional<ReferenceProfile> profile_;
  std::optional<VoiceEncoderSpec> encoder_;
  std::function<double(const std::vector<double>&)> scorer_;
  ProbabilityTap tap_;
  Matrix filterbank_;
  int frames_per_chunk_ = 0;
  std::map<std::string, std::unique_ptr<ClientRuntime>> clients_;

  friend void run_stream(Engine&, std::vector<struct AudioSource>,
                         const std::function<void(const DetectionEvent&)>&);
};

struct AudioSource {
  std::string client_id;
  // Next block of samples (at most mel_samples for step-mode equivalence),
  // or nullopt on exhaustion.
  std::function<std::optional<std::vector<float>>()> next_block;
};

// Three stage workers (pre-processing, feature extraction, classification
// plus auth) with per-client exclusion and readiness signaling. Per-client
// event sequences equal step-mode output for the same blocks.
void run_stream(Engine& engine, std::vector<AudioSource> sources,
                const std::function<void(const DetectionEvent&)>& sink);

// Every classification probability for one clip fed as 1760-sample blocks,
// gate ignored. This is the raw score stream threshold sweeps consume.
std::vector<double> score_clip(const PcmClip& clip, const EmbedderSpec& embedder,
                               const FcnModel& model, const PipelineConfig& config);

// The flattened classifier inputs for one clip, for training.
std::vector<std::vector<double>> clip_feature_windows(const PcmClip& clip,
                                                      const EmbedderSpec& embedder,
                                                      const PipelineConfig& config);

// JSON-lines; keys in fixed order client_id, audio_time, probability,
// similarity, auth_success, approach, then reason when set.
std::string format_event(const DetectionEvent& event);
DetectionEvent parse_event_line(const std::string& line);
void emit_event_log(const std::vector<DetectionEvent>& events,
                    const std::filesystem::path& path);
std::vector<DetectionEvent> parse_event_log(const std::filesystem::path& path);

struct CollectResult {
  ScoreSet scores;
  std::vector<std::string> skipped;  // "path: reason"
};

// task=Wakeword: per-clip max probability; positives voice-authp,
// voice-authn, tts-wwp; negatives tts-wwn, conversation. task=Auth:
// per-clip similarity; positives voice-authp, negatives voice-authn.
CollectResult collect_scores(const DatasetManifest& manifest, Task task,
                             const EmbedderSpec& embedder, const FcnModel& model,
                             const PipelineConfig& config,
                             const ReferenceProfile* profile,
                             const VoiceEncoderSpec* encoder);

}  // namespace wakegate
