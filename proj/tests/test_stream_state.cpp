#include <cstdint>
#include <deque>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "wakegate/error.hpp"
#include "wakegate/stream_state.hpp"

using namespace wakegate;

namespace {

MelFrame frame_tagged(float tag, size_t n_mels = 32) {
  MelFrame f(n_mels, 0.0f);
  f[0] = tag;
  return f;
}

std::vector<float> ramp(size_t n, float start = 0.0f) {
  std::vector<float> v(n);
  for (size_t i = 0; i < n; ++i) v[i] = start + static_cast<float>(i);
  return v;
}

}  // namespace

TEST_SUITE("stream_state") {

TEST_CASE("ring buffer keeps the newest elements in order") {
  RingBuffer<int> ring(4);
  for (int v = 1; v <= 6; ++v) ring.push(v);
  CHECK(ring.filled() == 4);
  CHECK(ring.latest(4) == std::vector<int>{3, 4, 5, 6});
  CHECK(ring.latest(2) == std::vector<int>{5, 6});
  CHECK(ring.slice_last(1, 2) == std::vector<int>{4, 5});
  CHECK_THROWS_AS(ring.slice_last(0, 5), Error);
  CHECK_THROWS_AS(ring.slice_last(3, 2), Error);
  CHECK_THROWS_AS(RingBuffer<int>(0), Error);
}

TEST_CASE("ring buffer agrees with a list oracle under random ops") {
  uint64_t s = 77;
  for (size_t capacity : {1u, 3u, 7u, 16u}) {
    RingBuffer<int> ring(capacity);
    std::deque<int> model;
    for (int step = 0; step < 500; ++step) {
      const int v = static_cast<int>(testfix::mix64(s) % 1000);
      ring.push(v);
      model.push_back(v);
      while (model.size() > capacity) model.pop_front();

      REQUIRE(ring.filled() == model.size());
      const auto all = ring.latest(model.size());
      REQUIRE(std::vector<int>(model.begin(), model.end()) == all);

      if (model.size() >= 2) {
        const size_t n = 1 + testfix::mix64(s) % model.size();
        const size_t off = testfix::mix64(s) % (model.size() - n + 1);
        const auto got = ring.slice_last(off, n);
        const std::vector<int> want(model.end() - static_cast<long>(off + n),
                                    model.end() - static_cast<long>(off));
        REQUIRE(got == want);
      }
    }
  }
}

TEST_CASE("push_audio stages samples and mirrors them into the ring") {
  ClientState state("c1", 16, 512);
  push_audio(state, std::vector<float>{});
  CHECK(state.pending_audio.empty());
  CHECK(state.audio_pushed == 0);

  const auto block = ramp(1760);
  push_audio(state, block);
  CHECK(state.pending_audio.size() == 1760);
  CHECK(state.audio_pushed == 1760);
  CHECK(state.audio_ring.filled() == 16);
  CHECK(state.audio_ring.latest(1).front() == 1759.0f);
}

TEST_CASE("take_mel_chunk consumes exactly 1760 samples") {
  ClientState state("c1");
  push_audio(state, ramp(1759));
  CHECK_FALSE(take_mel_chunk(state).has_value());

  push_audio(state, ramp(1, 1759.0f));
  auto chunk = take_mel_chunk(state);
  REQUIRE(chunk.has_value());
  CHECK(chunk->size() == 1760);
  CHECK(chunk->front() == 0.0f);
  CHECK(chunk->back() == 1759.0f);
  CHECK(state.pending_audio.empty());
}

TEST_CASE("take_mel_chunk leaves the remainder staged") {
  ClientState state("c1");
  push_audio(state, ramp(3600));
  auto first = take_mel_chunk(state);
  REQUIRE(first.has_value());
  CHECK(state.pending_audio.size() == 1840);
  auto second = take_mel_chunk(state);
  REQUIRE(second.has_value());
  CHECK(second->front() == 1760.0f);
  CHECK(state.pending_audio.size() == 80);
  CHECK_FALSE(take_mel_chunk(state).has_value());
}

TEST_CASE("pending overflow latches past ten seconds") {
  ClientState state("c1");
  push_audio(state, std::vector<float>(kPendingWarnSamples, 0.0f));
  CHECK_FALSE(state.pending_overflow);
  push_audio(state, std::vector<float>(1, 0.0f));
  CHECK(state.pending_overflow);
}

TEST_CASE("append_mels counts new frames and clamps at capacity") {
  ClientState state("c1", 48000, 8);
  std::vector<MelFrame> nine;
  for (int i = 0; i < 9; ++i) nine.push_back(frame_tagged(static_cast<float>(i)));
  append_mels(state, nine);
  CHECK(state.mel_ring.filled() == 8);  // capacity 8, oldest dropped
  CHECK(state.new_mels == 8);           // clamped to filled

  append_mels(state, {});
  CHECK(state.new_mels == 8);

  ClientState roomy("c2", 48000, 512);
  append_mels(roomy, nine);
  CHECK(roomy.mel_ring.filled() == 9);
  CHECK(roomy.new_mels == 9);
}

TEST_CASE("take_embedding_window warmup arithmetic") {
  ClientState state("c1");
  std::vector<MelFrame> frames;
  for (int i = 0; i < 76; ++i) frames.push_back(frame_tagged(static_cast<float>(i)));
  append_mels(state, frames);
  CHECK(state.new_mels == 76);

  // new_mels 76 supports exactly 9 takes of step 8 (76 = 9*8 + 4).
  for (int call = 0; call < 9; ++call) {
    auto window = take_embedding_window(state, 76, 8);
    REQUIRE(window.has_value());
    CHECK(window->n_frames == 76);
    CHECK(window->n_mels == 32);
  }
  CHECK(state.new_mels == 4);
  CHECK_FALSE(take_embedding_window(state, 76, 8).has_value());
}

TEST_CASE("take_embedding_window needs a full history") {
  ClientState state("c1");
  std::vector<MelFrame> frames;
  for (int i = 0; i < 75; ++i) frames.push_back(frame_tagged(static_cast<float>(i)));
  append_mels(state, frames);
  CHECK(state.new_mels == 75);
  CHECK_FALSE(take_embedding_window(state, 76, 8).has_value());
}

TEST_CASE("take_embedding_window returns frames oldest first") {
  ClientState state("c1");
  std::vector<MelFrame> frames;
  for (int i = 0; i < 80; ++i) frames.push_back(frame_tagged(static_cast<float>(i), 2));
  append_mels(state, frames);

  auto window = take_embedding_window(state, 76, 8);
  REQUIRE(window.has_value());
  REQUIRE(window->values.size() == 76 * 2);
  // Latest 76 of 80 tagged frames: tags 4..79 in order.
  for (size_t r = 0; r < 76; ++r)
    CHECK(window->values[r * 2] == static_cast<float>(r + 4));
}

TEST_CASE("embedding lanes are per-wakeword and guarded") {
  ClientState state("c1");
  CHECK_THROWS_AS(append_embedding(state, "ww", Embedding96(96, 0.0)), Error);

  register_wakeword(state, "ww", 64);
  append_embedding(state, "ww", Embedding96(96, 0.5));
  CHECK(state.lanes.at("ww").new_embeddings == 1);
  CHECK(state.lanes.at("ww").ring.filled() == 1);

  for (int i = 0; i < 64; ++i) {
    Embedding96 e(96, 0.0);
    e[0] = static_cast<double>(i);
    append_embedding(state, "ww", e);
  }
  CHECK(state.lanes.at("ww").ring.filled() == 64);
  // 65 appends total into capacity 64: the very first embedding is gone.
  CHECK(state.lanes.at("ww").ring.latest(64).front()[0] == 0.0);
  CHECK(state.lanes.at("ww").ring.latest(1).front()[0] == 63.0);
}

TEST_CASE("recent_audio returns the newest samples in order") {
  ClientState state("c1");
  push_audio(state, ramp(48000));
  const auto last4000 = recent_audio(state, 4000);
  REQUIRE(last4000.size() == 4000);
  CHECK(last4000.front() == 44000.0f);
  CHECK(last4000.back() == 47999.0f);

  const auto last27136 = recent_audio(state, 27136);
  REQUIRE(last27136.size() == 27136);
  CHECK(last27136.front() == static_cast<float>(48000 - 27136));

  ClientState tiny("c2");
  push_audio(tiny, ramp(100));
  CHECK_THROWS_AS(recent_audio(tiny, 4000), Error);
}

TEST_CASE("audio_window addresses absolute stream positions") {
  ClientState state("c1");
  push_audio(state, ramp(50000));  // ring keeps the last 48000: values 2000..49999

  const auto head = audio_window(state, 50000, 4000);
  CHECK(head.front() == 46000.0f);
  CHECK(head == recent_audio(state, 4000));

  const auto mid = audio_window(state, 10000, 4000);
  CHECK(mid.front() == 6000.0f);
  CHECK(mid.back() == 9999.0f);

  // Needs samples [1000, 5000): sample 1000 already overwritten.
  CHECK_THROWS_AS(audio_window(state, 5000, 4000), Error);
  // end_pos beyond what was pushed.
  CHECK_THROWS_AS(audio_window(state, 50001, 4000), Error);
  // Window would start before the stream did.
  ClientState young("c2");
  push_audio(young, ramp(3000));
  CHECK_THROWS_AS(audio_window(young, 3000, 4000), Error);
}

TEST_CASE("sample conservation under random interleaving") {
  uint64_t s = 555;
  ClientState state("c1");
  size_t pushed = 0, consumed = 0;
  for (int step = 0; step < 400; ++step) {
    if (testfix::mix64(s) % 2 == 0) {
      const size_t n = testfix::mix64(s) % 2500;
      push_audio(state, std::vector<float>(n, 0.1f));
      pushed += n;
    } else {
      while (auto chunk = take_mel_chunk(state)) consumed += chunk->size();
    }
    REQUIRE(consumed + state.pending_audio.size() == pushed);
    REQUIRE(consumed % 1760 == 0);
  }
}

TEST_CASE("new_mels never exceeds filled frames") {
  uint64_t s = 888;
  ClientState state("c1", 48000, 16);
  for (int step = 0; step < 300; ++step) {
    const size_t n = testfix::mix64(s) % 6;
    std::vector<MelFrame> frames(n, frame_tagged(0.5f));
    append_mels(state, frames);
    if (testfix::mix64(s) % 3 == 0) take_embedding_window(state, 8, 2);
    REQUIRE(state.new_mels <= state.mel_ring.filled());
  }
}

}  // TEST_SUITE
