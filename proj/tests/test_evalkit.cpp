#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "wakegate/error.hpp"
#include "wakegate/evalkit.hpp"

using namespace wakegate;

namespace {

ScoreSet random_scores(uint64_t seed, size_t n_pos, size_t n_neg,
                       double pos_center, double neg_center, double spread) {
  ScoreSet s;
  uint64_t state = seed;
  auto clamp01 = [](double v) { return std::min(1.0, std::max(0.0, v)); };
  for (size_t i = 0; i < n_pos; ++i)
    s.positives.push_back(clamp01(pos_center + spread * testfix::sym(state)));
  for (size_t i = 0; i < n_neg; ++i)
    s.negatives.push_back(clamp01(neg_center + spread * testfix::sym(state)));
  return s;
}

}  // namespace

TEST_SUITE("evalkit") {

TEST_CASE("frr closed forms") {
  CHECK(frr({0.2, 0.8}, 0.5) == 0.5);
  CHECK(frr({0.2, 0.8}, 0.0) == 0.0);
  // Scores equal to the threshold are accepted.
  CHECK(frr({0.3, 0.3, 0.3}, 0.3) == 0.0);
  CHECK(frr({0.3, 0.3, 0.3}, 0.3000001) == 1.0);
  CHECK_THROWS_AS(frr({}, 0.5), Error);
}

TEST_CASE("far closed forms") {
  CHECK(far({0.1, 0.9}, 0.5) == 0.5);
  CHECK(far({0.1, 0.9}, 1.01) == 0.0);
  CHECK(far({0.5}, 0.5) == 1.0);
  CHECK_THROWS_AS(far({}, 0.5), Error);
}

TEST_CASE("frr and the accepted fraction always sum to one") {
  uint64_t state = 404;
  std::vector<double> pos;
  for (int i = 0; i < 57; ++i) pos.push_back(testfix::unit(state));
  for (double t : {0.0, 0.1, 0.33, 0.5, 0.9, 1.0}) {
    size_t accepted = 0;
    for (double s : pos)
      if (s >= t) ++accepted;
    const double accept_frac = static_cast<double>(accepted) / pos.size();
    CHECK(frr(pos, t) + accept_frac == 1.0);
  }
}

TEST_CASE("sweep emits the full 21-point grid") {
  const ScoreSet s = random_scores(7, 40, 40, 0.8, 0.2, 0.15);
  const std::vector<SweepPoint> pts = sweep(s, 0.05);
  REQUIRE(pts.size() == 21);
  for (size_t i = 0; i < pts.size(); ++i) {
    CHECK(pts[i].threshold == doctest::Approx(0.05 * i).epsilon(1e-12));
    // FRR rises (weakly) with threshold; FAR falls.
    if (i > 0) {
      CHECK(pts[i].frr >= pts[i - 1].frr);
      CHECK(pts[i].far <= pts[i - 1].far);
    }
  }
}

TEST_CASE("perfectly separated scores sweep clean") {
  ScoreSet s;
  s.positives = {0.9, 0.95, 0.99, 0.92};
  s.negatives = {0.05, 0.1, 0.02, 0.08};
  const std::vector<SweepPoint> pts = sweep(s, 0.05);
  for (const SweepPoint& p : pts) {
    if (p.threshold > 0.1 + 1e-12 && p.threshold <= 0.9)
      CHECK(p.frr + p.far == 0.0);
  }
  CHECK(eer(s, EerMethod::SweepInterpolated).eer == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(eer(s, EerMethod::Exact).eer == 0.0);
}

TEST_CASE("identical score distributions give an EER of one half") {
  ScoreSet s;
  for (int i = 1; i <= 9; ++i) {
    s.positives.push_back(0.1 * i);
    s.negatives.push_back(0.1 * i);
  }
  const EerResult exact = eer(s, EerMethod::Exact);
  CHECK(exact.eer == doctest::Approx(0.5).epsilon(1e-12));
  const EerResult swept = eer(s, EerMethod::SweepInterpolated);
  CHECK(swept.eer == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("sweep interpolation tracks the exact computation") {
  for (uint64_t seed : {11u, 12u, 13u, 14u, 15u}) {
    const ScoreSet s = random_scores(seed, 200, 200, 0.75, 0.25, 0.2);
    const double exact = eer(s, EerMethod::Exact).eer;
    const double swept = eer(s, EerMethod::SweepInterpolated).eer;
    CHECK(std::abs(swept - exact) <= 0.01);
  }
}

TEST_CASE("exact EER agrees with the brute-force oracle") {
  for (uint64_t seed : {21u, 22u, 23u, 24u, 25u, 26u, 27u, 28u}) {
    const ScoreSet s = random_scores(seed, 150, 130, 0.7, 0.3, 0.3);
    const EerResult lib = eer(s, EerMethod::Exact);
    const double want = oracle::exact_eer(s.positives, s.negatives);
    CHECK(lib.eer == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("exact EER never exceeds the best sweep point") {
  for (uint64_t seed : {31u, 32u, 33u, 34u}) {
    const ScoreSet s = random_scores(seed, 120, 120, 0.65, 0.35, 0.25);
    const double exact = eer(s, EerMethod::Exact).eer;
    const std::vector<SweepPoint> pts = sweep(s, 0.05);
    double best_sweep = 1.0;
    for (const SweepPoint& p : pts)
      best_sweep = std::min(best_sweep, std::max(p.frr, p.far));
    CHECK(exact <= best_sweep + 1e-12);
  }
}

TEST_CASE("EER is symmetric under swapping classes and flipping scores") {
  uint64_t state = 606;
  ScoreSet s;
  for (int i = 0; i < 80; ++i) s.positives.push_back(0.55 + 0.4 * testfix::sym(state));
  for (int i = 0; i < 70; ++i) s.negatives.push_back(0.45 + 0.4 * testfix::sym(state));
  for (double& v : s.positives) v = std::min(0.999, std::max(0.001, v));
  for (double& v : s.negatives) v = std::min(0.999, std::max(0.001, v));

  ScoreSet flipped;
  for (double v : s.negatives) flipped.positives.push_back(1.0 - v);
  for (double v : s.positives) flipped.negatives.push_back(1.0 - v);

  const double a = eer(s, EerMethod::Exact).eer;
  const double b = eer(flipped, EerMethod::Exact).eer;
  CHECK(a == doctest::Approx(b).epsilon(1e-12));
}

TEST_CASE("eer rejects an empty side") {
  ScoreSet s;
  s.positives = {0.5};
  CHECK_THROWS_AS(eer(s, EerMethod::Exact), Error);
  CHECK_THROWS_AS(sweep(s, 0.05), Error);
}

TEST_CASE("manifest CSV round trips every category") {
  testfix::TempDir dir;
  const std::string path = dir.file("manifest.csv");
  {
    std::ofstream out(path);
    out << "path,category\n";
    out << "clips/a.wav,voice-authp\n";
    out << "clips/b.wav,voice-authn\n";
    out << "clips/c.wav,tts-wwp\n";
    out << "clips/d.wav,tts-wwn\n";
    out << "clips/e.wav,conversation\n";
  }
  const DatasetManifest m = load_manifest(path);
  REQUIRE(m.entries.size() == 5);
  CHECK(m.entries[0].path == "clips/a.wav");
  CHECK(m.entries[0].category == Category::VoiceAuthP);
  CHECK(m.entries[1].category == Category::VoiceAuthN);
  CHECK(m.entries[2].category == Category::TtsWwP);
  CHECK(m.entries[3].category == Category::TtsWwN);
  CHECK(m.entries[4].category == Category::Conversation);

  for (Category c : {Category::VoiceAuthP, Category::VoiceAuthN, Category::TtsWwP,
                     Category::TtsWwN, Category::Conversation})
    CHECK(parse_category(category_name(c)) == c);
}

TEST_CASE("manifest rejects unknown categories, bad headers, missing files") {
  testfix::TempDir dir;
  const std::string bad_cat = dir.file("bad_cat.csv");
  {
    std::ofstream out(bad_cat);
    out << "path,category\n";
    out << "clips/a.wav,wakeish\n";
  }
  CHECK_THROWS_AS(load_manifest(bad_cat), Error);

  const std::string no_header = dir.file("no_header.csv");
  {
    std::ofstream out(no_header);
    out << "clips/a.wav,conversation\n";
  }
  CHECK_THROWS_AS(load_manifest(no_header), Error);

  CHECK_THROWS_AS(load_manifest(dir.file("nonexistent.csv")), Error);
  CHECK_THROWS_AS(parse_category("speech"), Error);
}

TEST_CASE("report files round trip at print precision") {
  const ScoreSet s = random_scores(42, 60, 60, 0.7, 0.3, 0.25);
  const std::vector<SweepPoint> pts = sweep(s, 0.05);
  const EerResult result = eer(s, EerMethod::Exact);

  testfix::TempDir dir;
  const std::string path = dir.file("report.csv");
  write_report(pts, result, path);

  const ParsedReport back = parse_report(path);
  REQUIRE(back.points.size() == pts.size());
  auto match6 = [](double a, double b) {
    return std::llround(a * 1e6) == std::llround(b * 1e6);
  };
  for (size_t i = 0; i < pts.size(); ++i) {
    CHECK(match6(back.points[i].threshold, pts[i].threshold));
    CHECK(match6(back.points[i].frr, pts[i].frr));
    CHECK(match6(back.points[i].far, pts[i].far));
  }
  CHECK(match6(back.result.eer, result.eer));
  CHECK(match6(back.result.threshold, result.threshold));
}

}  // TEST_SUITE
