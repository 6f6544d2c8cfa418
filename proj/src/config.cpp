#include "wakegate/config.hpp"

#include <cstdint>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "wakegate/error.hpp"

namespace wakegate {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) {
  raise(ErrorCode::InvalidConfig, what);
}

int64_t as_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) bad(where + " must be an integer");
  return v.get<int64_t>();
}

int as_i32(const json& v, const std::string& where) {
  const int64_t x = as_int(v, where);
  if (x < INT32_MIN || x > INT32_MAX) bad(where + " out of range");
  return static_cast<int>(x);
}

uint64_t as_u64(const json& v, const std::string& where) {
  if (v.is_number_unsigned()) return v.get<uint64_t>();
  const int64_t x = as_int(v, where);
  if (x < 0) bad(where + " must be >= 0");
  return static_cast<uint64_t>(x);
}

size_t as_size(const json& v, const std::string& where) {
  return static_cast<size_t>(as_u64(v, where));
}

double as_num(const json& v, const std::string& where) {
  if (!v.is_number()) bad(where + " must be a number");
  return v.get<double>();
}

std::string as_str(const json& v, const std::string& where) {
  if (!v.is_string()) bad(where + " must be a string");
  return v.get<std::string>();
}

void expect_object(const json& v, const std::string& name) {
  if (!v.is_object()) bad("config group '" + name + "' must be an object");
}

void parse_mel(const json& j, MelConfig& mel) {
  expect_object(j, "mel");
  for (const auto& [key, v] : j.items()) {
    const std::string where = "mel." + key;
    if (key == "sample_rate")
      mel.sample_rate = as_i32(v, where);
    else if (key == "win_len")
      mel.win_len = as_i32(v, where);
    else if (key == "hop")
      mel.hop = as_i32(v, where);
    else if (key == "fft_size")
      mel.fft_size = as_i32(v, where);
    else if (key == "n_mels")
      mel.n_mels = as_i32(v, where);
    else if (key == "f_min")
      mel.f_min = as_num(v, where);
    else if (key == "f_max")
      mel.f_max = as_num(v, where);
    else
      bad("unknown key '" + key + "' in group 'mel'");
  }
}

void parse_pipeline(const json& j, PipelineConfig& p) {
  expect_object(j, "pipeline");
  for (const auto& [key, v] : j.items()) {
    const std::string where = "pipeline." + key;
    if (key == "mel_samples")
      p.mel_samples = as_i32(v, where);
    else if (key == "emb_features")
      p.emb_features = as_i32(v, where);
    else if (key == "emb_step")
      p.emb_step = as_i32(v, where);
    else if (key == "ww_windows")
      p.ww_windows = as_i32(v, where);
    else if (key == "wake_threshold")
      p.wake_threshold = as_num(v, where);
    else if (key == "trigger_level")
      p.trigger_level = as_i32(v, where);
    else if (key == "cooldown_frames")
      p.cooldown_frames = as_i32(v, where);
    else if (key == "audio_ring_capacity")
      p.audio_ring_capacity = as_size(v, where);
    else if (key == "mel_ring_capacity")
      p.mel_ring_capacity = as_size(v, where);
    else if (key == "embedding_ring_capacity")
      p.embedding_ring_capacity = as_size(v, where);
    else
      bad("unknown key '" + key + "' in group 'pipeline'");
  }
}

void parse_auth(const json& j, AuthConfig& a) {
  expect_object(j, "auth");
  for (const auto& [key, v] : j.items()) {
    const std::string where = "auth." + key;
    if (key == "approach") {
      const std::string s = as_str(v, where);
      if (s == "A")
        a.approach = Approach::A;
      else if (s == "B")
        a.approach = Approach::B;
      else
        bad("auth.approach must be \"A\" or \"B\"");
    } else if (key == "auth_threshold") {
      a.auth_threshold = as_num(v, where);
    } else if (key == "a_num_frames") {
      a.a_num_frames = as_i32(v, where);
    } else if (key == "a_required_samples") {
      a.a_required_samples = as_i32(v, where);
    } else if (key == "b_chunk_samples") {
      a.b_chunk_samples = as_i32(v, where);
    } else {
      // wake_threshold deliberately rejected: it mirrors the pipeline value.
      bad("unknown key '" + key + "' in group 'auth'");
    }
  }
}

void parse_train(const json& j, TrainSettings& t) {
  expect_object(j, "train");
  for (const auto& [key, v] : j.items()) {
    const std::string where = "train." + key;
    if (key == "learning_rate")
      t.learning_rate = as_num(v, where);
    else if (key == "micro_batch")
      t.micro_batch = as_size(v, where);
    else if (key == "accum_steps")
      t.accum_steps = as_size(v, where);
    else if (key == "epochs")
      t.epochs = as_size(v, where);
    else if (key == "seed")
      t.seed = as_u64(v, where);
    else if (key == "hidden_dim")
      t.hidden_dim = static_cast<uint32_t>(as_u64(v, where));
    else
      bad("unknown key '" + key + "' in group 'train'");
  }
}

void parse_augment(const json& j, AugmentSettings& a) {
  expect_object(j, "augment");
  for (const auto& [key, v] : j.items()) {
    const std::string where = "augment." + key;
    if (key == "seed")
      a.seed = as_u64(v, where);
    else if (key == "p_noise")
      a.p_noise = as_num(v, where);
    else if (key == "p_pitch")
      a.p_pitch = as_num(v, where);
    else if (key == "p_rir")
      a.p_rir = as_num(v, where);
    else if (key == "snr_lo_db")
      a.snr_lo_db = as_num(v, where);
    else if (key == "snr_hi_db")
      a.snr_hi_db = as_num(v, where);
    else if (key == "gain_lo_db")
      a.gain_lo_db = as_num(v, where);
    else if (key == "gain_hi_db")
      a.gain_hi_db = as_num(v, where);
    else if (key == "multiplier")
      a.multiplier = as_i32(v, where);
    else
      bad("unknown key '" + key + "' in group 'augment'");
  }
}

void parse_prep(const json& j, PrepSettings& p) {
  expect_object(j, "prep");
  for (const auto& [key, v] : j.items()) {
    const std::string where = "prep." + key;
    if (key == "target_dbfs")
      p.target_dbfs = as_num(v, where);
    else if (key == "energy_floor_db")
      p.energy_floor_db = as_num(v, where);
    else if (key == "min_speech_frames")
      p.min_speech_frames = as_i32(v, where);
    else if (key == "hangover_frames")
      p.hangover_frames = as_i32(v, where);
    else
      bad("unknown key '" + key + "' in group 'prep'");
  }
}

void parse_paths(const json& j, PathSettings& p) {
  expect_object(j, "paths");
  for (const auto& [key, v] : j.items()) {
    const std::string where = "paths." + key;
    if (key == "model")
      p.model = as_str(v, where);
    else if (key == "profile")
      p.profile = as_str(v, where);
    else if (key == "embedder")
      p.embedder = as_str(v, where);
    else
      bad("unknown key '" + key + "' in group 'paths'");
  }
}

void parse_seeds(const json& j, AppConfig& c) {
  expect_object(j, "seeds");
  for (const auto& [key, v] : j.items()) {
    const std::string where = "seeds." + key;
    if (key == "embedder")
      c.embedder_seed = as_u64(v, where);
    else if (key == "encoder")
      c.encoder_seed = as_u64(v, where);
    else
      bad("unknown key '" + key + "' in group 'seeds'");
  }
}

void check(bool ok, const std::string& what) {
  if (!ok) bad(what);
}

}  // namespace

AppConfig load_app_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::IoError, "cannot read config " + path.string());

  json root;
  try {
    root = json::parse(in);
  } catch (const json::exception& e) {
    bad(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) bad("config root must be an object");

  AppConfig config;
  for (const auto& [key, v] : root.items()) {
    if (key == "mel")
      parse_mel(v, config.pipeline.mel);
    else if (key == "pipeline")
      parse_pipeline(v, config.pipeline);
    else if (key == "auth")
      parse_auth(v, config.pipeline.auth);
    else if (key == "train")
      parse_train(v, config.train);
    else if (key == "augment")
      parse_augment(v, config.augment);
    else if (key == "prep")
      parse_prep(v, config.prep);
    else if (key == "paths")
      parse_paths(v, config.paths);
    else if (key == "seeds")
      parse_seeds(v, config);
    else
      bad("unknown config group '" + key + "'");
  }

  config.pipeline.auth.wake_threshold = config.pipeline.wake_threshold;
  validate_config(config);
  return config;
}

void validate_config(const AppConfig& config) {
  const MelConfig& mel = config.pipeline.mel;
  check(mel.sample_rate >= 1, "mel.sample_rate must be >= 1");
  check(mel.win_len >= 1, "mel.win_len must be >= 1");
  check(mel.hop >= 1, "mel.hop must be >= 1");
  check(mel.fft_size >= mel.win_len, "mel.fft_size must be >= mel.win_len");
  check(mel.n_mels >= 1, "mel.n_mels must be >= 1");
  check(mel.f_min >= 0.0 && mel.f_min < mel.f_max &&
            mel.f_max <= mel.sample_rate / 2.0,
        "mel band must satisfy 0 <= f_min < f_max <= sample_rate/2");

  const PipelineConfig& p = config.pipeline;
  check(p.mel_samples >= mel.win_len, "pipeline.mel_samples must cover one window");
  check(p.emb_step >= 1 && p.emb_features >= p.emb_step,
        "pipeline needs emb_features >= emb_step >= 1");
  check(p.ww_windows >= 1, "pipeline.ww_windows must be >= 1");
  check(p.wake_threshold >= 0.0 && p.wake_threshold <= 1.0,
        "pipeline.wake_threshold must be in [0,1]");
  check(p.trigger_level >= 1, "pipeline.trigger_level must be >= 1");
  check(p.cooldown_frames >= 0, "pipeline.cooldown_frames must be >= 0");
  check(p.audio_ring_capacity >= 1 && p.mel_ring_capacity >= 1 &&
            p.embedding_ring_capacity >= 1,
        "ring capacities must be >= 1");

  const AuthConfig& a = p.auth;
  check(a.auth_threshold >= 0.0 && a.auth_threshold <= 1.0,
        "auth.auth_threshold must be in [0,1]");
  check(a.a_num_frames >= 1, "auth.a_num_frames must be >= 1");
  check(a.a_required_samples >= 2048 + (a.a_num_frames - 1) * 512,
        "auth.a_required_samples too small for a_num_frames");
  check(a.b_chunk_samples >= mel.win_len + mel.hop,
        "auth.b_chunk_samples must yield at least two feature frames");

  const TrainSettings& t = config.train;
  check(t.learning_rate > 0.0, "train.learning_rate must be > 0");
  check(t.micro_batch >= 1, "train.micro_batch must be >= 1");
  check(t.accum_steps >= 1, "train.accum_steps must be >= 1");
  check(t.epochs >= 1, "train.epochs must be >= 1");
  check(t.hidden_dim >= 1, "train.hidden_dim must be >= 1");

  const AugmentSettings& g = config.augment;
  check(g.p_noise >= 0.0 && g.p_noise <= 1.0, "augment.p_noise must be in [0,1]");
  check(g.p_pitch >= 0.0 && g.p_pitch <= 1.0, "augment.p_pitch must be in [0,1]");
  check(g.p_rir >= 0.0 && g.p_rir <= 1.0, "augment.p_rir must be in [0,1]");
  check(g.snr_lo_db <= g.snr_hi_db, "augment SNR range is inverted");
  check(g.gain_lo_db <= g.gain_hi_db, "augment gain range is inverted");
  check(g.multiplier >= 1, "augment.multiplier must be >= 1");

  const PrepSettings& r = config.prep;
  check(r.target_dbfs <= 0.0, "prep.target_dbfs must be <= 0 dBFS");
  check(r.energy_floor_db >= 0.0, "prep.energy_floor_db must be >= 0");
  check(r.min_speech_frames >= 1, "prep.min_speech_frames must be >= 1");
  check(r.hangover_frames >= 0, "prep.hangover_frames must be >= 0");
}

TrainConfig make_train_config(const AppConfig& config) {
  TrainConfig out;
  out.learning_rate = config.train.learning_rate;
  out.micro_batch = config.train.micro_batch;
  out.accum_steps = config.train.accum_steps;
  out.epochs = config.train.epochs;
  out.seed = config.train.seed;
  return out;
}

}  // namespace wakegate
