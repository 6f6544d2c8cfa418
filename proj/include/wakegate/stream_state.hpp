#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wakegate/backbone.hpp"
#include "wakegate/dsp.hpp"
#include "wakegate/error.hpp"

namespace wakegate {

// Fixed-capacity overwrite-oldest buffer. Contents are always the most
// recent min(capacity, total pushed) elements, in push order.
template <typename T>
class RingBuffer {
 public:
  explicit RingBuffer(size_t capacity) : capacity_(capacity), storage_(capacity) {
    if (capacity == 0) raise(ErrorCode::InvalidConfig, "ring capacity must be >= 1");
  }

  size_t capacity() const { return capacity_; }
  size_t filled() const { return filled_; }

  void push(T value) {
    storage_[write_pos_] = std::move(value);
    write_pos_ = (write_pos_ + 1) % capacity_;
    if (filled_ < capacity_) ++filled_;
  }

  // The most recent n elements, oldest first.
  std::vector<T> latest(size_t n) const { return slice_last(0, n); }

  // n elements ending end_offset before the newest, oldest first.
  std::vector<T> slice_last(size_t end_offset, size_t n) const {
    if (end_offset + n > filled_)
      raise(ErrorCode::InvalidRange, "ring slice outside retained history");
    std::vector<T> out;
    out.reserve(n);
    const size_t first = filled_ - end_offset - n;
    for (size_t i = 0; i < n; ++i) {
      const size_t pos = (write_pos_ + capacity_ - filled_ + first + i) % capacity_;
      out.push_back(storage_[pos]);
    }
    return out;
  }

 private:
  size_t capacity_;
  std::vector<T> storage_;
  size_t write_pos_ = 0;
  size_t filled_ = 0;
};

struct EmbeddingLane {
  RingBuffer<Embedding96> ring;
  size_t new_embeddings = 0;

  explicit EmbeddingLane(size_t capacity) : ring(capacity) {}
};

// pending_audio is unbounded staging, bounded in practice by chunk
// consumption; pending_overflow latches when it exceeds 10 s so callers
// can warn about a stalled consumer.
inline constexpr size_t kPendingWarnSamples = 160000;

struct ClientState {
  std::string client_id;
  RingBuffer<float> audio_ring;
  RingBuffer<MelFrame> mel_ring;
  std::deque<float> pending_audio;
  size_t new_mels = 0;
  uint64_t audio_pushed = 0;  // total samples ever pushed to audio_ring
  bool pending_overflow = false;
  std::map<std::string, EmbeddingLane> lanes;
  std::chrono::steady_clock::time_point last_update;

  explicit ClientState(std::string id, size_t audio_capacity = 48000,
                       size_t mel_capacity = 512)
      : client_id(std::move(id)), audio_ring(audio_capacity), mel_ring(mel_capacity) {}
};

void register_wakeword(ClientState& state, const std::string& ww_key,
                       size_t capacity = 64);

// Appends to both audio_ring (for later auth retrieval) and pending_audio
// (for mel extraction).
void push_audio(ClientState& state, std::span<const float> samples);

// Removes and returns the oldest chunk_len samples of pending_audio, or
// nullopt when fewer are staged.
std::optional<std::vector<float>> take_mel_chunk(ClientState& state,
                                                 size_t chunk_len = 1760);

void append_mels(ClientState& state, const std::vector<MelFrame>& frames);

// When new_mels >= emb_step and the ring holds emb_features frames: the
// latest emb_features frames, oldest first, advancing new_mels by emb_step.
std::optional<MelWindow> take_embedding_window(ClientState& state,
                                               size_t emb_features, size_t emb_step);

void append_embedding(ClientState& state, const std::string& ww_key, Embedding96 emb);

// The most recent n samples, oldest first.
std::vector<float> recent_audio(const ClientState& state, size_t n);

// Samples [end_pos - n, end_pos) by absolute stream position, for callers
// that must not observe pushes newer than end_pos.
std::vector<float> audio_window(const ClientState& state, uint64_t end_pos, size_t n);

}  // namespace wakegate
