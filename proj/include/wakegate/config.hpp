#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "wakegate/pipeline.hpp"
#include "wakegate/wakeword.hpp"

namespace wakegate {

struct TrainSettings {
  double learning_rate = 1e-3;
  size_t micro_batch = 32;
  size_t accum_steps = 4;
  size_t epochs = 50;
  uint64_t seed = 7;
  uint32_t hidden_dim = 128;
};

struct AugmentSettings {
  uint64_t seed = 0;
  double p_noise = 0.75;
  double p_pitch = 0.25;
  double p_rir = 0.50;
  double snr_lo_db = 5.0;
  double snr_hi_db = 30.0;
  double gain_lo_db = -6.0;
  double gain_hi_db = 6.0;
  int multiplier = 1;
};

struct PrepSettings {
  double target_dbfs = -20.0;
  double energy_floor_db = 10.0;
  int min_speech_frames = 3;
  int hangover_frames = 5;
};

struct PathSettings {
  std::string model;
  std::string profile;
  std::string embedder;  // optional WGEM file; empty means native stand-in
};

struct AppConfig {
  PipelineConfig pipeline;  // includes mel preset and auth settings
  TrainSettings train;
  AugmentSettings augment;
  PrepSettings prep;
  PathSettings paths;
  uint64_t embedder_seed = 42;
  uint64_t encoder_seed = 43;
};

// JSON with groups mel, pipeline, auth, train, augment, prep, paths, seeds.
// Unknown keys anywhere are errors. auth.wake_threshold always mirrors
// pipeline.wake_threshold.
AppConfig load_app_config(const std::filesystem::path& path);

// Range and consistency checks; raises InvalidConfig.
void validate_config(const AppConfig& config);

TrainConfig make_train_config(const AppConfig& config);

}  // namespace wakegate
