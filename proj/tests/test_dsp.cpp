#include <cmath>
#include <cstdint>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "wakegate/dsp.hpp"
#include "wakegate/error.hpp"

using namespace wakegate;

namespace {

// Relative comparison with a floor of 1, since scaled log-mels sit around
// [0.6, 3] and raw powers can be arbitrarily small.
void check_close(double got, double want, double rel) {
  CHECK(std::abs(got - want) <= rel * std::max(1.0, std::abs(want)));
}

}  // namespace

TEST_SUITE("dsp") {

TEST_CASE("hann_window closed-form values") {
  const std::vector<double> w4 = hann_window(4);
  REQUIRE(w4.size() == 4);
  CHECK(w4[0] == doctest::Approx(0.0));
  CHECK(w4[1] == doctest::Approx(0.5));
  CHECK(w4[2] == doctest::Approx(1.0));
  CHECK(w4[3] == doctest::Approx(0.5));

  const std::vector<double> w1 = hann_window(1);
  REQUIRE(w1.size() == 1);
  CHECK(w1[0] == doctest::Approx(0.0));

  for (int len : {3, 7, 400, 2048}) {
    for (double v : hann_window(len)) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
}

TEST_CASE("mel scale closed-form anchors and inversion") {
  CHECK(hz_to_mel(0.0) == doctest::Approx(0.0));
  CHECK(hz_to_mel(700.0) == doctest::Approx(2595.0 * std::log10(2.0)).epsilon(1e-12));
  CHECK(hz_to_mel(700.0) == doctest::Approx(781.177).epsilon(1e-5));
  for (double hz : {60.0, 500.0, 3800.0, 8000.0})
    CHECK(mel_to_hz(hz_to_mel(hz)) == doctest::Approx(hz).epsilon(1e-9));
}

TEST_CASE("stft_power frame count and zero input") {
  const MelConfig cfg = pipeline_mel_config();
  const Matrix p = stft_power(testfix::noise_clip(1, 1760), cfg);
  CHECK(p.rows == 9);
  CHECK(p.cols == 257);

  PcmClip zeros;
  zeros.samples.assign(1760, 0.0f);
  const Matrix zp = stft_power(zeros, cfg);
  for (double v : zp.values) CHECK(v == 0.0);
}

TEST_CASE("stft_power peaks at the tone bin") {
  const MelConfig cfg = pipeline_mel_config();
  const PcmClip tone = testfix::tone_clip(1000.0, 1760, 1.0f);
  const Matrix p = stft_power(tone, cfg);
  for (size_t f = 0; f < p.rows; ++f) {
    size_t argmax = 0;
    for (size_t k = 1; k < p.cols; ++k)
      if (p.at(f, k) > p.at(f, argmax)) argmax = k;
    CHECK(argmax == 32);  // round(1000 * 512 / 16000)
  }
}

TEST_CASE("stft_power matches the naive DFT oracle") {
  const MelConfig cfg = pipeline_mel_config();
  for (size_t n : {400u, 1760u, 2333u, 4096u}) {
    const PcmClip clip = testfix::noise_clip(100 + n, n, 0.8f);
    const Matrix fast = stft_power(clip, cfg);
    const auto slow = oracle::dft_power(clip, cfg);
    REQUIRE(fast.rows == slow.size());
    double peak = 0.0;
    for (double v : fast.values) peak = std::max(peak, v);
    for (size_t f = 0; f < fast.rows; ++f)
      for (size_t k = 0; k < fast.cols; ++k)
        CHECK(std::abs(fast.at(f, k) - slow[f][k]) <= 1e-6 * std::max(1e-3, peak));
  }
}

TEST_CASE("stft_power scales quadratically with amplitude") {
  const MelConfig cfg = pipeline_mel_config();
  PcmClip clip = testfix::noise_clip(7, 2000, 0.25f);
  PcmClip doubled = clip;
  for (float& v : doubled.samples) v *= 2.0f;
  const Matrix p1 = stft_power(clip, cfg);
  const Matrix p2 = stft_power(doubled, cfg);
  for (size_t i = 0; i < p1.values.size(); ++i)
    check_close(p2.values[i], 4.0 * p1.values[i], 1e-9);
}

TEST_CASE("stft_power input validation") {
  MelConfig cfg = pipeline_mel_config();
  CHECK_THROWS_AS(stft_power(testfix::noise_clip(1, 399), cfg), Error);
  cfg.fft_size = 256;  // smaller than the 400-sample window
  CHECK_THROWS_AS(stft_power(testfix::noise_clip(1, 1760), cfg), Error);
}

TEST_CASE("mel_filterbank structure for the pipeline preset") {
  const MelConfig cfg = pipeline_mel_config();
  const Matrix fb = mel_filterbank(cfg);
  REQUIRE(fb.rows == 32);
  REQUIRE(fb.cols == 257);

  const double hz_per_bin = static_cast<double>(cfg.sample_rate) / cfg.fft_size;
  for (size_t m = 0; m < fb.rows; ++m) {
    double row_max = 0.0;
    for (size_t k = 0; k < fb.cols; ++k) {
      const double w = fb.at(m, k);
      CHECK(w >= 0.0);
      row_max = std::max(row_max, w);
      if (w > 0.0) {
        const double f = static_cast<double>(k) * hz_per_bin;
        CHECK(f > cfg.f_min);
        CHECK(f < cfg.f_max);
      }
    }
    CHECK(row_max > 0.0);  // every filter touches at least one bin
  }
}

TEST_CASE("mel_filterbank rejects bad ranges") {
  MelConfig cfg = pipeline_mel_config();
  cfg.f_min = 4000.0;
  cfg.f_max = 100.0;
  CHECK_THROWS_AS(mel_filterbank(cfg), Error);

  cfg = pipeline_mel_config();
  cfg.f_max = 9000.0;  // above Nyquist
  CHECK_THROWS_AS(mel_filterbank(cfg), Error);

  cfg = pipeline_mel_config();
  cfg.n_mels = 0;
  CHECK_THROWS_AS(mel_filterbank(cfg), Error);
}

TEST_CASE("scale_mels is x/10 + 2") {
  Matrix m(1, 3);
  m.at(0, 0) = 0.0;
  m.at(0, 1) = -20.0;
  m.at(0, 2) = 10.0;
  const Matrix out = scale_mels(m);
  CHECK(out.at(0, 0) == doctest::Approx(2.0));
  CHECK(out.at(0, 1) == doctest::Approx(0.0));
  CHECK(out.at(0, 2) == doctest::Approx(3.0));
}

TEST_CASE("melspectrogram of silence is the floored constant") {
  PcmClip zeros;
  zeros.samples.assign(1760, 0.0f);
  const auto frames = melspectrogram(zeros, pipeline_mel_config());
  REQUIRE(frames.size() == 9);
  const double want = std::log(1e-6) / 10.0 + 2.0;  // ~0.61845
  CHECK(want == doctest::Approx(0.61845).epsilon(1e-4));
  for (const MelFrame& frame : frames) {
    REQUIRE(frame.size() == 32);
    for (float v : frame) CHECK(v == doctest::Approx(want).epsilon(1e-6));
  }
}

TEST_CASE("melspectrogram matches the naive mel oracle") {
  const MelConfig cfg = pipeline_mel_config();
  for (uint64_t seed : {40u, 41u, 42u}) {
    const PcmClip clip = testfix::noise_clip(seed, 1760, 0.7f);
    const auto fast = melspectrogram(clip, cfg);
    const auto slow = oracle::mel_frames(clip, cfg);
    REQUIRE(fast.size() == slow.size());
    for (size_t f = 0; f < fast.size(); ++f) {
      REQUIRE(fast[f].size() == slow[f].size());
      for (size_t m = 0; m < fast[f].size(); ++m)
        check_close(fast[f][m], slow[f][m], 1e-6);
    }
  }
}

TEST_CASE("melspectrogram output is always finite") {
  for (uint64_t seed : {1u, 9u}) {
    const auto frames = melspectrogram(testfix::noise_clip(seed, 3000, 0.05f),
                                       pipeline_mel_config());
    for (const MelFrame& frame : frames)
      for (float v : frame) CHECK(std::isfinite(v));
  }
}

TEST_CASE("frame count formula holds across lengths") {
  const MelConfig cfg = pipeline_mel_config();
  const size_t win = static_cast<size_t>(cfg.win_len);
  const size_t hop = static_cast<size_t>(cfg.hop);
  for (size_t n = win; n <= win + 10 * hop; ++n) {
    const size_t want = (n - win) / hop + 1;
    CHECK(stft_frame_count(n, cfg) == want);
    if (n % 320 == 0 || n == win || n == win + 10 * hop) {
      const auto frames = melspectrogram(testfix::noise_clip(n, n), cfg);
      CHECK(frames.size() == want);
    }
  }
}

TEST_CASE("approach-A preset dimensions") {
  const MelConfig cfg = approach_a_mel_config();
  CHECK(cfg.win_len == 2048);
  CHECK(cfg.hop == 512);
  CHECK(cfg.n_mels == 96);
  CHECK(stft_frame_count(27136, cfg) == 50);
  CHECK(stft_frame_count(27135, cfg) == 49);
}

}  // TEST_SUITE
