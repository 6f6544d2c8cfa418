#include "wakegate/stream_state.hpp"

#include <algorithm>

#include "wakegate/error.hpp"

namespace wakegate {

void register_wakeword(ClientState& state, const std::string& ww_key,
                       size_t capacity) {
  state.lanes.try_emplace(ww_key, capacity);
}

void push_audio(ClientState& state, std::span<const float> samples) {
  for (float s : samples) {
    state.audio_ring.push(s);
    state.pending_audio.push_back(s);
  }
  state.audio_pushed += samples.size();
  if (state.pending_audio.size() > kPendingWarnSamples) state.pending_overflow = true;
}

std::optional<std::vector<float>> take_mel_chunk(ClientState& state, size_t chunk_len) {
  if (state.pending_audio.size() < chunk_len) return std::nullopt;
  std::vector<float> chunk(state.pending_audio.begin(),
                           state.pending_audio.begin() + static_cast<long>(chunk_len));
  state.pending_audio.erase(state.pending_audio.begin(),
                            state.pending_audio.begin() + static_cast<long>(chunk_len));
  return chunk;
}

void append_mels(ClientState& state, const std::vector<MelFrame>& frames) {
  for (const MelFrame& f : frames) state.mel_ring.push(f);
  state.new_mels = std::min(state.new_mels + frames.size(), state.mel_ring.filled());
  state.last_update = std::chrono::steady_clock::now();
}

std::optional<MelWindow> take_embedding_window(ClientState& state,
                                               size_t emb_features, size_t emb_step) {
  if (emb_step < 1 || emb_features < emb_step)
    raise(ErrorCode::InvalidConfig, "need emb_features >= emb_step >= 1");
  if (state.new_mels < emb_step || state.mel_ring.filled() < emb_features)
    return std::nullopt;

  std::vector<MelFrame> frames = state.mel_ring.latest(emb_features);
  state.new_mels -= emb_step;

  MelWindow window;
  window.n_frames = emb_features;
  window.n_mels = frames.front().size();
  window.values.reserve(window.n_frames * window.n_mels);
  for (const MelFrame& f : frames)
    window.values.insert(window.values.end(), f.begin(), f.end());
  return window;
}

void append_embedding(ClientState& state, const std::string& ww_key, Embedding96 emb) {
  auto it = state.lanes.find(ww_key);
  if (it == state.lanes.end())
    raise(ErrorCode::UnknownWakewordKey, "wakeword key not registered: " + ww_key);
  EmbeddingLane& lane = it->second;
  lane.ring.push(std::move(emb));
  lane.new_embeddings = std::min(lane.new_embeddings + 1, lane.ring.filled());
  state.last_update = std::chrono::steady_clock::now();
}

std::vector<float> recent_audio(const ClientState& state, size_t n) {
  if (state.audio_ring.filled() < n)
    raise(ErrorCode::InsufficientAudio,
          "need " + std::to_string(n) + " samples, have " +
              std::to_string(state.audio_ring.filled()));
  return state.audio_ring.latest(n);
}

std::vector<float> audio_window(const ClientState& state, uint64_t end_pos, size_t n) {
  if (end_pos > state.audio_pushed || end_pos < n)
    raise(ErrorCode::InsufficientAudio,
          "window [" + std::to_string(end_pos < n ? 0 : end_pos - n) + ", " +
              std::to_string(end_pos) + ") not available");
  const uint64_t end_offset = state.audio_pushed - end_pos;
  if (end_offset + n > state.audio_ring.filled())
    raise(ErrorCode::InsufficientAudio,
          "window ending at " + std::to_string(end_pos) + " already evicted");
  return state.audio_ring.slice_last(end_offset, n);
}

}  // namespace wakegate
