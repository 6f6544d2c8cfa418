#include "wakegate/evalkit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "wakegate/error.hpp"

namespace wakegate {

double frr(const std::vector<double>& positives, double t) {
  if (positives.empty()) raise(ErrorCode::EmptyPositives, "no positive scores");
  size_t rejected = 0;
  for (double s : positives)
    if (s < t) ++rejected;
  return static_cast<double>(rejected) / static_cast<double>(positives.size());
}

double far(const std::vector<double>& negatives, double t) {
  if (negatives.empty()) raise(ErrorCode::EmptyNegatives, "no negative scores");
  size_t accepted = 0;
  for (double s : negatives)
    if (s >= t) ++accepted;
  return static_cast<double>(accepted) / static_cast<double>(negatives.size());
}

std::vector<SweepPoint> sweep(const ScoreSet& scores, double step) {
  if (!(step > 0.0 && step <= 1.0))
    raise(ErrorCode::InvalidConfig, "sweep step must be in (0, 1]");
  const long n = std::lround(1.0 / step);
  std::vector<SweepPoint> points;
  points.reserve(static_cast<size_t>(n) + 1);
  for (long i = 0; i <= n; ++i) {
    SweepPoint p;
    p.threshold = static_cast<double>(i) * step;
    p.frr = frr(scores.positives, p.threshold);
    p.far = far(scores.negatives, p.threshold);
    points.push_back(p);
  }
  return points;
}

namespace {

EerResult eer_exact(const ScoreSet& scores) {
  std::set<double> candidates{0.0, std::nextafter(1.0, 2.0)};
  candidates.insert(scores.positives.begin(), scores.positives.end());
  candidates.insert(scores.negatives.begin(), scores.negatives.end());

  EerResult best;
  best.method = EerMethod::Exact;
  best.eer = std::numeric_limits<double>::infinity();
  double best_worst = std::numeric_limits<double>::infinity();
  double best_gap = std::numeric_limits<double>::infinity();
  for (double t : candidates) {
    const double fr = frr(scores.positives, t);
    const double fa = far(scores.negatives, t);
    const double worst = std::max(fr, fa);
    const double gap = std::abs(fa - fr);
    if (worst < best_worst || (worst == best_worst && gap < best_gap)) {
      best_worst = worst;
      best_gap = gap;
      best.eer = 0.5 * (fr + fa);
      best.threshold = t;
    }
  }
  return best;
}

EerResult eer_sweep(const ScoreSet& scores) {
  const std::vector<SweepPoint> points = sweep(scores);
  EerResult result;
  result.method = EerMethod::SweepInterpolated;

  // far - frr is non-increasing in the threshold; find its sign change.
  for (size_t i = 0; i < points.size(); ++i) {
    const double d = points[i].far - points[i].frr;
    if (d == 0.0) {
      result.eer = points[i].frr;
      result.threshold = points[i].threshold;
      return result;
    }
    if (d < 0.0) {
      if (i == 0) break;
      const double d_prev = points[i - 1].far - points[i - 1].frr;
      const double alpha = d_prev / (d_prev - d);
      const double fr =
          points[i - 1].frr + alpha * (points[i].frr - points[i - 1].frr);
      const double fa =
          points[i - 1].far + alpha * (points[i].far - points[i - 1].far);
      result.eer = 0.5 * (fr + fa);
      result.threshold =
          points[i - 1].threshold +
          alpha * (points[i].threshold - points[i - 1].threshold);
      return result;
    }
  }

  // No crossing on the grid; report the closest-to-balanced point.
  size_t best = 0;
  double best_gap = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < points.size(); ++i) {
    const double gap = std::abs(points[i].far - points[i].frr);
    if (gap < best_gap) {
      best_gap = gap;
      best = i;
    }
  }
  result.eer = 0.5 * (points[best].frr + points[best].far);
  result.threshold = points[best].threshold;
  return result;
}

}  // namespace

EerResult eer(const ScoreSet& scores, EerMethod method) {
  return method == EerMethod::Exact ? eer_exact(scores) : eer_sweep(scores);
}

Category parse_category(const std::string& name) {
  if (name == "voice-authp") return Category::VoiceAuthP;
  if (name == "voice-authn") return Category::VoiceAuthN;
  if (name == "tts-wwp") return Category::TtsWwP;
  if (name == "tts-wwn") return Category::TtsWwN;
  if (name == "conversation") return Category::Conversation;
  raise(ErrorCode::InvalidRange, "unknown dataset category: " + name);
}

std::string category_name(Category c) {
  switch (c) {
    case Category::VoiceAuthP: return "voice-authp";
    case Category::VoiceAuthN: return "voice-authn";
    case Category::TtsWwP: return "tts-wwp";
    case Category::TtsWwN: return "tts-wwn";
    case Category::Conversation: return "conversation";
  }
  raise(ErrorCode::InvalidRange, "bad category value");
}

namespace {

std::string strip(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

DatasetManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::IoError, "cannot read manifest " + path.string());

  std::string line;
  if (!std::getline(in, line) || strip(line) != "path,category")
    raise(ErrorCode::UnsupportedFormat,
          "manifest must start with header 'path,category'");

  DatasetManifest manifest;
  while (std::getline(in, line)) {
    const std::string row = strip(line);
    if (row.empty()) continue;
    const size_t comma = row.find_last_of(',');
    if (comma == std::string::npos)
      raise(ErrorCode::UnsupportedFormat, "manifest row missing category: " + row);
    ManifestEntry entry;
    entry.path = strip(row.substr(0, comma));
    entry.category = parse_category(strip(row.substr(comma + 1)));
    manifest.entries.push_back(std::move(entry));
  }
  return manifest;
}

void write_report(const std::vector<SweepPoint>& points, const EerResult& result,
                  const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) raise(ErrorCode::IoError, "cannot write report " + path.string());
  out << "threshold,frr,far\n";
  char buf[128];
  for (const SweepPoint& p : points) {
    std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.6f\n", p.threshold, p.frr, p.far);
    out << buf;
  }
  std::snprintf(buf, sizeof buf, "eer,%.6f,%.6f\n", result.eer, result.threshold);
  out << buf;
  if (!out) raise(ErrorCode::IoError, "write failed: " + path.string());
}

ParsedReport parse_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::IoError, "cannot read report " + path.string());

  std::string line;
  if (!std::getline(in, line) || strip(line) != "threshold,frr,far")
    raise(ErrorCode::UnsupportedFormat, "bad report header");

  ParsedReport report;
  while (std::getline(in, line)) {
    const std::string row = strip(line);
    if (row.empty()) continue;
    std::istringstream ss(row);
    std::string first, second, third;
    if (!std::getline(ss, first, ',') || !std::getline(ss, second, ',') ||
        !std::getline(ss, third))
      raise(ErrorCode::UnsupportedFormat, "bad report row: " + row);
    if (first == "eer") {
      report.result.eer = std::stod(second);
      report.result.threshold = std::stod(third);
    } else {
      SweepPoint p;
      p.threshold = std::stod(first);
      p.frr = std::stod(second);
      p.far = std::stod(third);
      report.points.push_back(p);
    }
  }
  return report;
}

}  // namespace wakegate
