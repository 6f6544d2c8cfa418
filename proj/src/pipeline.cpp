#include "wakegate/pipeline.hpp"

#include <algorithm>
#include <cstddef>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <deque>
#include <fstream>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "wakegate/error.hpp"

namespace wakegate {

namespace {

const std::string kWakewordKey = "ww";

// How far (in chunks) stage 1 may consume ahead of the next pending
// classification. Keeps every ring slice and auth window retrievable in
// threaded runs; see the capacity checks in the Engine constructor.
constexpr uint64_t kMaxChunkLead = 9;

}  // namespace

struct Engine::ClientRuntime {
  ClientState state;
  GateState gate;
  uint64_t chunks_consumed = 0;
  uint64_t frames_appended = 0;
  uint64_t embeddings_produced = 0;
  uint64_t classifications_done = 0;
  std::mutex mutex;
  std::condition_variable cv;

  ClientRuntime(std::string id, const PipelineConfig& config)
      : state(std::move(id), config.audio_ring_capacity, config.mel_ring_capacity) {}
};

Engine::~Engine() = default;

Engine::Engine(PipelineConfig config, EmbedderSpec embedder, FcnModel model)
    : config_(std::move(config)),
      embedder_(std::move(embedder)),
      model_(std::move(model)) {
  if (config_.mel_samples < 1 || config_.emb_features < 1 || config_.emb_step < 1 ||
      config_.ww_windows < 1 || config_.trigger_level < 1 ||
      config_.cooldown_frames < 0)
    raise(ErrorCode::InvalidConfig, "pipeline counts must be >= 1");
  if (config_.emb_step > config_.emb_features)
    raise(ErrorCode::InvalidConfig, "emb_step must not exceed emb_features");
  if (config_.wake_threshold < 0.0 || config_.wake_threshold > 1.0)
    raise(ErrorCode::InvalidConfig, "wake_threshold must be in [0,1]");
  if (config_.mel_samples < config_.mel.win_len)
    raise(ErrorCode::InvalidConfig, "mel_samples shorter than one window");

  frames_per_chunk_ = (config_.mel_samples - config_.mel.win_len) / config_.mel.hop + 1;

  const size_t want_in =
      static_cast<size_t>(config_.emb_features) * static_cast<size_t>(config_.mel.n_mels);
  if (embedder_.in_dim != want_in)
    raise(ErrorCode::ShapeMismatch, "embedder expects input " +
                                        std::to_string(embedder_.in_dim) + ", pipeline needs " +
                                        std::to_string(want_in));
  if (model_.input_dim != static_cast<size_t>(config_.ww_windows) * kEmbeddingDim)
    raise(ErrorCode::ShapeMismatch, "classifier input does not match ww_windows*96");

  const size_t auth_need = static_cast<size_t>(
      config_.auth.approach == Approach::A ? config_.auth.a_required_samples
                                           : config_.auth.b_chunk_samples);
  const size_t lead_samples =
      static_cast<size_t>(kMaxChunkLead + 2) * static_cast<size_t>(config_.mel_samples);
  if (config_.audio_ring_capacity < auth_need + lead_samples)
    raise(ErrorCode::InvalidConfig,
          "audio ring must hold auth window plus stage lead: need >= " +
              std::to_string(auth_need + lead_samples));
  if (config_.mel_ring_capacity <
      static_cast<size_t>(config_.emb_features) +
          static_cast<size_t>(frames_per_chunk_) * (kMaxChunkLead + 2))
    raise(ErrorCode::InvalidConfig, "mel ring too small for stage lead");
  if (config_.embedding_ring_capacity <
      static_cast<size_t>(config_.ww_windows) + 16)
    raise(ErrorCode::InvalidConfig, "embedding ring too small for stage lead");

  filterbank_ = mel_filterbank(config_.mel);
}

void Engine::set_profile(ReferenceProfile profile, VoiceEncoderSpec encoder) {
  profile_ = std::move(profile);
  encoder_ = std::move(encoder);
}

void Engine::set_scorer(std::function<double(const std::vector<double>&)> scorer) {
  scorer_ = std::move(scorer);
}

void Engine::set_probability_tap(ProbabilityTap tap) { tap_ = std::move(tap); }

void Engine::register_client(const std::string& client_id) {
  auto rt = std::make_unique<ClientRuntime>(client_id, config_);
  rt->gate.wake_threshold = config_.wake_threshold;
  rt->gate.trigger_level = config_.trigger_level;
  rt->gate.cooldown_frames = config_.cooldown_frames;
  register_wakeword(rt->state, kWakewordKey, config_.embedding_ring_capacity);
  clients_[client_id] = std::move(rt);
}

Engine::ClientRuntime& Engine::runtime(const std::string& client_id) {
  auto it = clients_.find(client_id);
  if (it == clients_.end())
    raise(ErrorCode::UnknownClient, "client not registered: " + client_id);
  return *it->second;
}

uint64_t Engine::classification_chunk(uint64_t k) const {
  // Classification k consumes the embedding ending at mel frame
  // emb_step*(k + ww_windows - 2) + emb_features; that frame lands in this
  // 1-based chunk.
  const uint64_t frame =
      static_cast<uint64_t>(config_.emb_step) *
          (k + static_cast<uint64_t>(config_.ww_windows) - 2) +
      static_cast<uint64_t>(config_.emb_features);
  const uint64_t fpc = static_cast<uint64_t>(frames_per_chunk_);
  return (frame + fpc - 1) / fpc;
}

uint64_t Engine::classification_audio_time(uint64_t k) const {
  return classification_chunk(k) * static_cast<uint64_t>(config_.mel_samples);
}

bool Engine::consume_one_chunk(ClientRuntime& rt) {
  auto chunk = take_mel_chunk(rt.state, static_cast<size_t>(config_.mel_samples));
  if (!chunk) return false;
  ++rt.chunks_consumed;

  PcmClip clip;
  clip.sample_rate = config_.mel.sample_rate;
  clip.samples = std::move(*chunk);
  const std::vector<MelFrame> frames = melspectrogram(clip, config_.mel, filterbank_);
  append_mels(rt.state, frames);
  rt.frames_appended += frames.size();
  return true;
}

bool Engine::drain_embeddings(ClientRuntime& rt) {
  const uint64_t features = static_cast<uint64_t>(config_.emb_features);
  const uint64_t step = static_cast<uint64_t>(config_.emb_step);
  bool any = false;
  while (rt.frames_appended >= features + step * rt.embeddings_produced) {
    const uint64_t end_offset =
        rt.frames_appended - (features + step * rt.embeddings_produced);
    const std::vector<MelFrame> frames =
        rt.state.mel_ring.slice_last(end_offset, features);

    MelWindow window;
    window.n_frames = features;
    window.n_mels = frames.front().size();
    window.values.reserve(window.n_frames * window.n_mels);
    for (const MelFrame& f : frames)
      window.values.insert(window.values.end(), f.begin(), f.end());

    rt.state.new_mels -= std::min(rt.state.new_mels, static_cast<size_t>(step));
    append_embedding(rt.state, kWakewordKey, embed(embedder_, window));
    ++rt.embeddings_produced;
    any = true;
  }
  return any;
}

void Engine::drain_classifications(ClientRuntime& rt,
                                   std::vector<DetectionEvent>& out) {
  EmbeddingLane& lane = rt.state.lanes.at(kWakewordKey);
  const uint64_t windows = static_cast<uint64_t>(config_.ww_windows);

  while (lane.new_embeddings > 0) {
    const uint64_t e_index = rt.embeddings_produced - lane.new_embeddings + 1;
    if (e_index < windows) {
      --lane.new_embeddings;  // warmup embedding, nothing to classify yet
      continue;
    }
    const std::vector<Embedding96> embs =
        lane.ring.slice_last(lane.new_embeddings - 1, windows);
    --lane.new_embeddings;
    ++rt.classifications_done;

    std::vector<double> x;
    x.reserve(windows * kEmbeddingDim);
    for (const Embedding96& e : embs) x.insert(x.end(), e.begin(), e.end());

    const double p = scorer_ ? scorer_(x) : fcn_forward(model_, x);
    const uint64_t audio_time = classification_audio_time(rt.classifications_done);
    if (tap_) tap_(rt.state.client_id, audio_time, p, x);

    if (gate_update(rt.gate, p) != GateAction::Triggered) continue;

    DetectionEvent ev;
    ev.client_id = rt.state.client_id;
    ev.audio_time = audio_time;
    ev.probability = p;
    ev.approach = config_.auth.approach;
    if (profile_ && encoder_) {
      const AuthResult r =
          authenticate_at(*profile_, rt.state, audio_time, *encoder_, config_.auth);
      ev.similarity = r.similarity;
      ev.auth_success = r.success;
      ev.approach = r.approach;
      ev.reason = r.reason;
    } else {
      ev.auth_success = false;
      ev.reason = "no speaker profile loaded";
    }
    out.push_back(std::move(ev));
  }
}

std::vector<DetectionEvent> Engine::step(const std::string& client_id,
                                         std::span<const float> samples) {
  ClientRuntime& rt = runtime(client_id);
  std::lock_guard<std::mutex> lock(rt.mutex);

  push_audio(rt.state, samples);
  std::vector<DetectionEvent> events;
  while (rt.state.pending_audio.size() >= static_cast<size_t>(config_.mel_samples)) {
    consume_one_chunk(rt);
    drain_embeddings(rt);
    drain_classifications(rt, events);
  }
  return events;
}

void run_stream(Engine& engine, std::vector<AudioSource> sources,
                const std::function<void(const DetectionEvent&)>& sink) {
  using ClientRuntime = Engine::ClientRuntime;

  struct Shared {
    std::mutex m;
    std::condition_variable cv_mels, cv_embs;
    std::deque<ClientRuntime*> mel_q, emb_q;
    bool stage1_done = false;
    bool stage2_done = false;
    std::atomic<bool> aborted{false};
    std::exception_ptr error;
  } sh;

  auto fail = [&](std::exception_ptr e) {
    {
      std::lock_guard<std::mutex> g(sh.m);
      if (!sh.error) sh.error = e;
      sh.aborted.store(true);
      sh.stage1_done = true;
      sh.stage2_done = true;
    }
    sh.cv_mels.notify_all();
    sh.cv_embs.notify_all();
    for (auto& [id, rt] : engine.clients_) rt->cv.notify_all();
  };

  const size_t chunk = static_cast<size_t>(engine.config_.mel_samples);

  auto stage1 = [&] {
    try {
      std::vector<bool> exhausted(sources.size(), false);
      size_t remaining = sources.size();
      while (remaining > 0 && !sh.aborted.load()) {
        for (size_t i = 0; i < sources.size(); ++i) {
          if (exhausted[i] || sh.aborted.load()) continue;
          auto block = sources[i].next_block();
          if (!block) {
            exhausted[i] = true;
            --remaining;
            continue;
          }
          ClientRuntime& rt = engine.runtime(sources[i].client_id);
          {
            std::lock_guard<std::mutex> lk(rt.mutex);
            push_audio(rt.state, *block);
          }
          while (!sh.aborted.load()) {
            bool consumed = false;
            {
              std::unique_lock<std::mutex> lk(rt.mutex);
              if (rt.state.pending_audio.size() < chunk) break;
              rt.cv.wait(lk, [&] {
                return sh.aborted.load() ||
                       rt.chunks_consumed + 1 <=
                           engine.classification_chunk(rt.classifications_done + 1) +
                               kMaxChunkLead;
              });
              if (sh.aborted.load()) break;
              consumed = engine.consume_one_chunk(rt);
            }
            if (consumed) {
              std::lock_guard<std::mutex> g(sh.m);
              sh.mel_q.push_back(&rt);
              sh.cv_mels.notify_one();
            }
          }
        }
      }
      {
        std::lock_guard<std::mutex> g(sh.m);
        sh.stage1_done = true;
      }
      sh.cv_mels.notify_all();
    } catch (...) {
      fail(std::current_exception());
    }
  };

  auto stage2 = [&] {
    try {
      while (true) {
        ClientRuntime* rt = nullptr;
        {
          std::unique_lock<std::mutex> lk(sh.m);
          sh.cv_mels.wait(lk, [&] { return !sh.mel_q.empty() || sh.stage1_done; });
          if (sh.mel_q.empty()) {
            sh.stage2_done = true;
            sh.cv_embs.notify_all();
            return;
          }
          rt = sh.mel_q.front();
          sh.mel_q.pop_front();
        }
        bool produced;
        {
          std::lock_guard<std::mutex> lk(rt->mutex);
          produced = engine.drain_embeddings(*rt);
        }
        if (produced) {
          std::lock_guard<std::mutex> g(sh.m);
          sh.emb_q.push_back(rt);
          sh.cv_embs.notify_one();
        }
      }
    } catch (...) {
      fail(std::current_exception());
    }
  };

  auto stage3 = [&] {
    try {
      while (true) {
        ClientRuntime* rt = nullptr;
        {
          std::unique_lock<std::mutex> lk(sh.m);
          sh.cv_embs.wait(lk, [&] { return !sh.emb_q.empty() || sh.stage2_done; });
          if (sh.emb_q.empty()) return;
          rt = sh.emb_q.front();
          sh.emb_q.pop_front();
        }
        std::vector<DetectionEvent> events;
        {
          std::lock_guard<std::mutex> lk(rt->mutex);
          engine.drain_classifications(*rt, events);
        }
        rt->cv.notify_all();
        if (!sh.aborted.load())
          for (const DetectionEvent& ev : events) sink(ev);
      }
    } catch (...) {
      fail(std::current_exception());
    }
  };

  std::thread t1(stage1), t2(stage2), t3(stage3);
  t1.join();
  t2.join();
  t3.join();
  if (sh.error) std::rethrow_exception(sh.error);
}

namespace {

void feed_clip(Engine& engine, const std::string& client, const PcmClip& clip) {
  const size_t block = static_cast<size_t>(engine.config().mel_samples);
  for (size_t off = 0; off < clip.samples.size(); off += block) {
    const size_t n = std::min(block, clip.samples.size() - off);
    engine.step(client, std::span<const float>(clip.samples.data() + off, n));
  }
}

}  // namespace

std::vector<double> score_clip(const PcmClip& clip, const EmbedderSpec& embedder,
                               const FcnModel& model, const PipelineConfig& config) {
  Engine engine(config, embedder, model);
  engine.register_client("score");
  std::vector<double> probs;
  engine.set_probability_tap(
      [&](const std::string&, uint64_t, double p, const std::vector<double>&) {
        probs.push_back(p);
      });
  feed_clip(engine, "score", clip);
  return probs;
}

std::vector<std::vector<double>> clip_feature_windows(const PcmClip& clip,
                                                      const EmbedderSpec& embedder,
                                                      const PipelineConfig& config) {
  // A throwaway classifier: the tap captures inputs before scoring matters.
  Engine engine(config, embedder,
                init_fcn(0, static_cast<uint32_t>(config.ww_windows), 1));
  engine.register_client("score");
  std::vector<std::vector<double>> windows;
  engine.set_probability_tap(
      [&](const std::string&, uint64_t, double, const std::vector<double>& x) {
        windows.push_back(x);
      });
  feed_clip(engine, "score", clip);
  return windows;
}

std::string format_event(const DetectionEvent& ev) {
  nlohmann::ordered_json j;
  j["client_id"] = ev.client_id;
  j["audio_time"] = ev.audio_time;
  j["probability"] = ev.probability;
  if (ev.similarity)
    j["similarity"] = *ev.similarity;
  else
    j["similarity"] = nullptr;
  j["auth_success"] = ev.auth_success;
  j["approach"] = ev.approach == Approach::A ? "A" : "B";
  if (!ev.reason.empty()) j["reason"] = ev.reason;
  return j.dump();
}

DetectionEvent parse_event_line(const std::string& line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::UnsupportedFormat, std::string("bad event line: ") + e.what());
  }
  DetectionEvent ev;
  ev.client_id = j.at("client_id").get<std::string>();
  ev.audio_time = j.at("audio_time").get<uint64_t>();
  ev.probability = j.at("probability").get<double>();
  if (!j.at("similarity").is_null())
    ev.similarity = j.at("similarity").get<double>();
  ev.auth_success = j.at("auth_success").get<bool>();
  ev.approach = j.at("approach").get<std::string>() == "A" ? Approach::A : Approach::B;
  if (j.contains("reason")) ev.reason = j.at("reason").get<std::string>();
  return ev;
}

void emit_event_log(const std::vector<DetectionEvent>& events,
                    const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) raise(ErrorCode::IoError, "cannot write event log " + path.string());
  for (const DetectionEvent& ev : events) out << format_event(ev) << '\n';
  out.flush();
  if (!out) raise(ErrorCode::IoError, "write failed: " + path.string());
}

std::vector<DetectionEvent> parse_event_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::IoError, "cannot read event log " + path.string());
  std::vector<DetectionEvent> events;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    events.push_back(parse_event_line(line));
  }
  return events;
}

CollectResult collect_scores(const DatasetManifest& manifest, Task task,
                             const EmbedderSpec& embedder, const FcnModel& model,
                             const PipelineConfig& config,
                             const ReferenceProfile* profile,
                             const VoiceEncoderSpec* encoder) {
  CollectResult result;
  result.scores.task = task;

  for (const ManifestEntry& entry : manifest.entries) {
    try {
      if (task == Task::Auth && entry.category != Category::VoiceAuthP &&
          entry.category != Category::VoiceAuthN)
        continue;

      const PcmClip clip = read_wav(entry.path);
      if (task == Task::Wakeword) {
        const std::vector<double> probs = score_clip(clip, embedder, model, config);
        if (probs.empty()) {
          result.skipped.push_back(entry.path + ": too short for one classification");
          continue;
        }
        const double score = *std::max_element(probs.begin(), probs.end());
        const bool positive = entry.category == Category::VoiceAuthP ||
                              entry.category == Category::VoiceAuthN ||
                              entry.category == Category::TtsWwP;
        (positive ? result.scores.positives : result.scores.negatives).push_back(score);
      } else {
        if (profile == nullptr || encoder == nullptr)
          raise(ErrorCode::InvalidConfig, "auth scoring needs a profile and encoder");
        double sim;
        if (config.auth.approach == Approach::B) {
          const size_t need = static_cast<size_t>(config.auth.b_chunk_samples);
          if (clip.samples.size() < need)
            raise(ErrorCode::InsufficientAudio, "clip shorter than speaker chunk");
          PcmClip tail;
          tail.sample_rate = clip.sample_rate;
          tail.samples.assign(clip.samples.end() - static_cast<std::ptrdiff_t>(need),
                              clip.samples.end());
          sim = cosine_similarity(
              encode_speaker_256(*encoder, tail, config.auth.b_chunk_samples),
              profile->ref_b);
        } else {
          const size_t need = static_cast<size_t>(config.auth.a_required_samples);
          if (clip.samples.size() < need)
            raise(ErrorCode::InsufficientAudio, "clip shorter than auth window");
          PcmClip tail;
          tail.sample_rate = clip.sample_rate;
          tail.samples.assign(clip.samples.end() - static_cast<std::ptrdiff_t>(need),
                              clip.samples.end());
          sim = cosine_similarity(
              approach_a_embedding(tail, config.auth.a_num_frames), profile->ref_a);
        }
        (entry.category == Category::VoiceAuthP ? result.scores.positives
                                                : result.scores.negatives)
            .push_back(sim);
      }
    } catch (const Error& e) {
      result.skipped.push_back(entry.path + ": " + e.what());
    }
  }
  return result;
}

}  // namespace wakegate
