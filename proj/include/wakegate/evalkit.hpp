#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace wakegate {

enum class Task { Wakeword, Auth };

struct ScoreSet {
  std::vector<double> positives;
  std::vector<double> negatives;
  Task task = Task::Wakeword;
};

// Accept iff score >= threshold, everywhere.
double frr(const std::vector<double>& positives, double t);
double far(const std::vector<double>& negatives, double t);

struct SweepPoint {
  double threshold = 0.0;
  double frr = 0.0;
  double far = 0.0;
};

// Thresholds 0.00, 0.05, ..., 1.00 (21 points for the default step).
std::vector<SweepPoint> sweep(const ScoreSet& scores, double step = 0.05);

enum class EerMethod { SweepInterpolated, Exact };

struct EerResult {
  double eer = 0.0;
  double threshold = 0.0;
  EerMethod method = EerMethod::SweepInterpolated;
};

// SweepInterpolated: linear interpolation of both curves at the sign change
// of (far - frr) over the 0.05 grid. Exact: evaluates every distinct score
// (plus 0 and 1+eps) and minimizes max(frr, far).
EerResult eer(const ScoreSet& scores, EerMethod method);

enum class Category { VoiceAuthP, VoiceAuthN, TtsWwP, TtsWwN, Conversation };

Category parse_category(const std::string& name);
std::string category_name(Category c);

struct ManifestEntry {
  std::string path;
  Category category = Category::Conversation;
};

struct DatasetManifest {
  std::vector<ManifestEntry> entries;
};

// CSV with header "path,category"; categories from the closed set
// voice-authp, voice-authn, tts-wwp, tts-wwn, conversation.
DatasetManifest load_manifest(const std::filesystem::path& path);

// CSV: header threshold,frr,far; 6-decimal rows; summary row
// "eer,<eer>,<threshold>".
void write_report(const std::vector<SweepPoint>& points, const EerResult& result,
                  const std::filesystem::path& path);

struct ParsedReport {
  std::vector<SweepPoint> points;
  EerResult result;
};

ParsedReport parse_report(const std::filesystem::path& path);

}  // namespace wakegate
