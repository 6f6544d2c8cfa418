// wakegate CLI: detect / enroll / train / eval / prep / augment.
//
// Exit codes: 0 ok, 2 config error, 3 model or profile load failure,
// 4 unusable data, 5 single-class training data.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "wakegate/audio_io.hpp"
#include "wakegate/augment.hpp"
#include "wakegate/config.hpp"
#include "wakegate/error.hpp"
#include "wakegate/evalkit.hpp"
#include "wakegate/pipeline.hpp"
#include "wakegate/speaker_auth.hpp"
#include "wakegate/wakeword.hpp"

namespace fs = std::filesystem;
using namespace wakegate;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitModel = 3;
constexpr int kExitData = 4;
constexpr int kExitSingleClass = 5;

void warn(const std::string& message) { std::cerr << "wakegate: " << message << "\n"; }

std::vector<fs::path> list_wavs(const fs::path& dir) {
  std::vector<fs::path> paths;
  if (!fs::is_directory(dir)) return paths;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".wav")
      paths.push_back(entry.path());
  std::sort(paths.begin(), paths.end());
  return paths;
}

EmbedderSpec make_embedder(const AppConfig& config) {
  if (!config.paths.embedder.empty()) return load_embedder(config.paths.embedder);
  return init_native_embedder(config.embedder_seed, config.pipeline.emb_features,
                              config.pipeline.mel.n_mels);
}

struct CommonOpts {
  std::string config_path;
  std::string model_path;
  std::string profile_path;
  std::string embedder_path;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "JSON config file");
  cmd->add_option("--model", opts.model_path, "classifier file (WGFC)");
  cmd->add_option("--profile", opts.profile_path, "speaker profile file (WGSP)");
  cmd->add_option("--embedder", opts.embedder_path, "embedder weights file (WGEM)");
}

// Loads the config (defaults when no file given) and applies path overrides.
// Throws Error on any problem; callers map that to kExitConfig.
AppConfig resolve_config(const CommonOpts& opts) {
  AppConfig config;
  if (!opts.config_path.empty()) config = load_app_config(opts.config_path);
  if (!opts.model_path.empty()) config.paths.model = opts.model_path;
  if (!opts.profile_path.empty()) config.paths.profile = opts.profile_path;
  if (!opts.embedder_path.empty()) config.paths.embedder = opts.embedder_path;
  validate_config(config);
  return config;
}

std::vector<float> read_stdin_s16le() {
  std::vector<float> samples;
  char buf[8192];
  std::string carry;
  while (std::cin.read(buf, sizeof buf), std::cin.gcount() > 0) {
    carry.append(buf, static_cast<size_t>(std::cin.gcount()));
    const size_t whole = carry.size() / 2 * 2;
    for (size_t i = 0; i + 1 < whole; i += 2) {
      const int16_t v = static_cast<int16_t>(
          static_cast<uint8_t>(carry[i]) |
          (static_cast<uint16_t>(static_cast<uint8_t>(carry[i + 1])) << 8));
      samples.push_back(static_cast<float>(v) / 32768.0f);
    }
    carry.erase(0, whole);
  }
  return samples;
}

// ----------------------------------------------------------------- detect --

int cmd_detect(const CommonOpts& common, const std::vector<std::string>& inputs) {
  AppConfig config;
  try {
    config = resolve_config(common);
    if (config.paths.model.empty())
      raise(ErrorCode::InvalidConfig, "detect needs a model (--model or paths.model)");
  } catch (const Error& e) {
    warn(e.what());
    return kExitConfig;
  }

  EmbedderSpec embedder;
  FcnModel model;
  std::optional<ReferenceProfile> profile;
  try {
    embedder = make_embedder(config);
    model = load_fcn(config.paths.model);
    if (!config.paths.profile.empty()) profile = load_profile(config.paths.profile);
  } catch (const Error& e) {
    warn(e.what());
    return kExitModel;
  }

  struct NamedClip {
    std::string client;
    PcmClip clip;
  };
  std::vector<NamedClip> clips;
  try {
    if (inputs.empty()) {
      PcmClip clip;
      clip.samples = read_stdin_s16le();
      clips.push_back({"stdin", std::move(clip)});
    } else {
      std::vector<std::string> used;
      for (const std::string& path : inputs) {
        std::string name = fs::path(path).filename().string();
        if (std::find(used.begin(), used.end(), name) != used.end()) name = path;
        used.push_back(name);
        clips.push_back({name, read_wav(path)});
      }
    }
  } catch (const Error& e) {
    warn(e.what());
    return kExitData;
  }

  Engine engine(config.pipeline, embedder, model);
  if (profile)
    engine.set_profile(*profile, init_native_encoder(config.encoder_seed));
  for (const NamedClip& c : clips) engine.register_client(c.client);

  std::vector<AudioSource> sources;
  const size_t block = static_cast<size_t>(config.pipeline.mel_samples);
  for (const NamedClip& c : clips) {
    AudioSource src;
    src.client_id = c.client;
    src.next_block = [&samples = c.clip.samples, block,
                      pos = size_t{0}]() mutable -> std::optional<std::vector<float>> {
      if (pos >= samples.size()) return std::nullopt;
      const size_t n = std::min(block, samples.size() - pos);
      std::vector<float> out(samples.begin() + static_cast<std::ptrdiff_t>(pos),
                             samples.begin() + static_cast<std::ptrdiff_t>(pos + n));
      pos += n;
      return out;
    };
    sources.push_back(std::move(src));
  }

  run_stream(engine, std::move(sources), [](const DetectionEvent& ev) {
    std::cout << format_event(ev) << "\n";
  });
  std::cout.flush();
  return 0;
}

// ----------------------------------------------------------------- enroll --

int cmd_enroll(const CommonOpts& common, const std::string& clips_dir,
               const std::string& out_path) {
  AppConfig config;
  std::string out = out_path;
  try {
    config = resolve_config(common);
    if (out.empty()) out = config.paths.profile;
    if (out.empty())
      raise(ErrorCode::InvalidConfig, "enroll needs an output (--out or paths.profile)");
  } catch (const Error& e) {
    warn(e.what());
    return kExitConfig;
  }

  const AuthConfig& auth = config.pipeline.auth;
  const size_t need_a = 2048 + (static_cast<size_t>(auth.a_num_frames) - 1) * 512;
  const size_t need = std::max(need_a, static_cast<size_t>(auth.b_chunk_samples));

  std::vector<PcmClip> clips;
  std::vector<std::string> names;
  for (const fs::path& path : list_wavs(clips_dir)) {
    try {
      PcmClip clip = read_wav(path.string());
      if (clip.samples.size() < need) {
        warn("skipping " + path.filename().string() + ": too short (" +
             std::to_string(clip.samples.size()) + " < " + std::to_string(need) +
             " samples)");
        continue;
      }
      names.push_back(path.filename().string());
      clips.push_back(std::move(clip));
    } catch (const Error& e) {
      warn("skipping " + path.filename().string() + ": " + e.what());
    }
  }
  if (clips.empty()) {
    warn("no usable enrollment clips in " + clips_dir);
    return kExitData;
  }

  try {
    const VoiceEncoderSpec encoder = init_native_encoder(config.encoder_seed);
    const ReferenceProfile profile = enroll(clips, encoder, auth);
    save_profile(profile, out);

    std::cout << "enrolled " << profile.enrolled_clips << " clips -> " << out << "\n";
    for (size_t i = 0; i < clips.size(); ++i) {
      const std::vector<double> a = approach_a_embedding(clips[i], auth.a_num_frames);
      PcmClip tail;
      tail.sample_rate = clips[i].sample_rate;
      tail.samples.assign(
          clips[i].samples.end() - static_cast<std::ptrdiff_t>(auth.b_chunk_samples),
          clips[i].samples.end());
      const std::vector<double> b =
          encode_speaker_256(encoder, tail, auth.b_chunk_samples);
      std::printf("  %s: A=%.4f B=%.4f\n", names[i].c_str(),
                  cosine_similarity(a, profile.ref_a),
                  cosine_similarity(b, profile.ref_b));
    }
    std::cout.flush();
  } catch (const Error& e) {
    warn(e.what());
    return kExitData;
  }
  return 0;
}

// ------------------------------------------------------------------ train --

int cmd_train(const CommonOpts& common, const std::string& pos_dir,
              const std::string& neg_dir, const std::string& out_path,
              const std::string& loss_path) {
  AppConfig config;
  std::string out = out_path;
  try {
    config = resolve_config(common);
    if (out.empty()) out = config.paths.model;
    if (out.empty())
      raise(ErrorCode::InvalidConfig, "train needs an output (--out or paths.model)");
  } catch (const Error& e) {
    warn(e.what());
    return kExitConfig;
  }

  EmbedderSpec embedder;
  try {
    embedder = make_embedder(config);
  } catch (const Error& e) {
    warn(e.what());
    return kExitModel;
  }

  try {
    std::vector<std::vector<double>> xs;
    std::vector<double> ys;
    for (const auto& [dir, label] : {std::pair{pos_dir, 1.0}, {neg_dir, 0.0}}) {
      const std::vector<fs::path> paths = list_wavs(dir);
      if (paths.empty())
        raise(ErrorCode::EmptyBatch, "no WAV files in " + dir);
      for (const fs::path& path : paths) {
        PcmClip clip;
        try {
          clip = read_wav(path.string());
        } catch (const Error& e) {
          warn("skipping " + path.filename().string() + ": " + e.what());
          continue;
        }
        std::vector<std::vector<double>> windows =
            clip_feature_windows(clip, embedder, config.pipeline);
        if (windows.empty()) {
          warn("skipping " + path.filename().string() + ": too short for one window");
          continue;
        }
        for (auto& w : windows) {
          xs.push_back(std::move(w));
          ys.push_back(label);
        }
      }
    }

    FcnModel model = init_fcn(config.train.seed,
                              static_cast<uint32_t>(config.pipeline.ww_windows),
                              config.train.hidden_dim);
    const TrainResult result = train(model, xs, ys, make_train_config(config));
    save_fcn(model, out);

    const std::string loss_file = loss_path.empty() ? out + ".loss.csv" : loss_path;
    std::ofstream loss_out(loss_file);
    if (!loss_out) raise(ErrorCode::IoError, "cannot write " + loss_file);
    loss_out << "epoch,loss\n";
    for (size_t i = 0; i < result.epoch_loss.size(); ++i) {
      char row[64];
      std::snprintf(row, sizeof row, "%zu,%.9f\n", i + 1, result.epoch_loss[i]);
      loss_out << row;
    }

    std::printf("trained on %zu windows, final BCE %.6f -> %s\n", xs.size(),
                result.epoch_loss.back(), out.c_str());
    std::cout.flush();
  } catch (const Error& e) {
    warn(e.what());
    return e.code() == ErrorCode::SingleClassData ? kExitSingleClass : kExitData;
  }
  return 0;
}

// ------------------------------------------------------------------- eval --

int cmd_eval(const CommonOpts& common, const std::string& manifest_path,
             const std::string& task_name, const std::string& report_path) {
  AppConfig config;
  Task task;
  try {
    config = resolve_config(common);
    if (task_name == "wakeword")
      task = Task::Wakeword;
    else if (task_name == "auth")
      task = Task::Auth;
    else
      raise(ErrorCode::InvalidConfig, "--task must be wakeword or auth");
    if (task == Task::Wakeword && config.paths.model.empty())
      raise(ErrorCode::InvalidConfig, "eval --task wakeword needs a model");
    if (task == Task::Auth && config.paths.profile.empty())
      raise(ErrorCode::InvalidConfig, "eval --task auth needs a profile");
  } catch (const Error& e) {
    warn(e.what());
    return kExitConfig;
  }

  EmbedderSpec embedder;
  FcnModel model;
  std::optional<ReferenceProfile> profile;
  std::optional<VoiceEncoderSpec> encoder;
  try {
    embedder = make_embedder(config);
    model = config.paths.model.empty()
                ? init_fcn(0, static_cast<uint32_t>(config.pipeline.ww_windows), 1)
                : load_fcn(config.paths.model);
    if (!config.paths.profile.empty()) {
      profile = load_profile(config.paths.profile);
      encoder = init_native_encoder(config.encoder_seed);
    }
  } catch (const Error& e) {
    warn(e.what());
    return kExitModel;
  }

  try {
    const DatasetManifest manifest = load_manifest(manifest_path);
    const CollectResult collected =
        collect_scores(manifest, task, embedder, model, config.pipeline,
                       profile ? &*profile : nullptr, encoder ? &*encoder : nullptr);
    for (const std::string& s : collected.skipped) warn("skipped " + s);

    if (collected.scores.positives.empty()) {
      warn(task == Task::Wakeword
               ? "no positive scores: manifest has no usable voice-authp, "
                 "voice-authn, or tts-wwp clips"
               : "no positive scores: manifest has no usable voice-authp clips");
      return kExitData;
    }
    if (collected.scores.negatives.empty()) {
      warn(task == Task::Wakeword
               ? "no negative scores: manifest has no usable tts-wwn or "
                 "conversation clips"
               : "no negative scores: manifest has no usable voice-authn clips");
      return kExitData;
    }

    const std::vector<SweepPoint> points = sweep(collected.scores);
    const EerResult result = eer(collected.scores, EerMethod::SweepInterpolated);
    write_report(points, result, report_path);

    std::printf("Optimal Threshold: %.2f\n", result.threshold);
    std::printf("EER (%%): %.2f\n", result.eer * 100.0);
    std::cout.flush();
  } catch (const Error& e) {
    warn(e.what());
    return kExitData;
  }
  return 0;
}

// ------------------------------------------------------------------- prep --

int cmd_prep(const CommonOpts& common, const std::string& in_dir,
             const std::string& out_dir, bool do_normalize, bool do_vad,
             double segment_s, double gap_s) {
  AppConfig config;
  try {
    config = resolve_config(common);
    if (segment_s < 0.0 || gap_s < 0.0)
      raise(ErrorCode::InvalidConfig, "--segment and --gap must be >= 0");
  } catch (const Error& e) {
    warn(e.what());
    return kExitConfig;
  }

  const std::vector<fs::path> paths = list_wavs(in_dir);
  if (paths.empty()) {
    warn("no WAV files in " + in_dir);
    return kExitData;
  }
  std::error_code ec;
  fs::create_directories(out_dir, ec);

  VadParams vad;
  vad.energy_floor_db = config.prep.energy_floor_db;
  vad.min_speech_frames = config.prep.min_speech_frames;
  vad.hangover_frames = config.prep.hangover_frames;

  size_t files = 0, outputs = 0, silent = 0, failed = 0;
  double trimmed_seconds = 0.0;

  for (const fs::path& path : paths) {
    ++files;
    PcmClip clip;
    try {
      clip = read_wav(path.string());
    } catch (const Error& e) {
      warn(path.filename().string() + ": " + e.what());
      ++failed;
      continue;
    }

    struct Piece {
      PcmClip clip;
      std::string name;
    };
    std::vector<Piece> pieces;
    if (segment_s > 0.0) {
      const size_t seg = static_cast<size_t>(segment_s * clip.sample_rate);
      const size_t stride =
          seg + static_cast<size_t>(gap_s * clip.sample_rate);
      const std::string stem = path.stem().string();
      size_t k = 0;
      for (size_t start = 0; start + seg <= clip.samples.size(); start += stride) {
        Piece piece;
        piece.clip.sample_rate = clip.sample_rate;
        piece.clip.samples.assign(
            clip.samples.begin() + static_cast<std::ptrdiff_t>(start),
            clip.samples.begin() + static_cast<std::ptrdiff_t>(start + seg));
        piece.name = stem + "_seg" + std::to_string(++k) + ".wav";
        pieces.push_back(std::move(piece));
      }
      if (pieces.empty())
        warn(path.filename().string() + ": shorter than one segment, dropped");
    } else {
      pieces.push_back({std::move(clip), path.filename().string()});
    }

    for (Piece& piece : pieces) {
      try {
        if (do_normalize) {
          NormalizeResult norm = rms_normalize(piece.clip, config.prep.target_dbfs);
          if (norm.clipped > 0)
            warn(piece.name + ": " + std::to_string(norm.clipped) +
                 " samples clipped by normalization");
          piece.clip = std::move(norm.clip);
        }
        if (do_vad) {
          const VadResult v = vad_trim(piece.clip, vad);
          if (!v.speech_detected) {
            warn(piece.name + ": no speech, skipped");
            ++silent;
            continue;
          }
          trimmed_seconds +=
              static_cast<double>(piece.clip.samples.size() - v.clip.samples.size()) /
              piece.clip.sample_rate;
          piece.clip = v.clip;
        }
        write_wav(piece.clip, (fs::path(out_dir) / piece.name).string());
        ++outputs;
      } catch (const Error& e) {
        if (e.code() == ErrorCode::SilentInput) {
          warn(piece.name + ": silent, skipped");
          ++silent;
        } else {
          warn(piece.name + ": " + e.what());
          ++failed;
        }
      }
    }
  }

  std::printf("processed %zu files, wrote %zu outputs, trimmed %.2f s, %zu silent\n",
              files, outputs, trimmed_seconds, silent);
  std::cout.flush();
  return (failed == files && files > 0) ? kExitData : 0;
}

// ---------------------------------------------------------------- augment --

int cmd_augment(const CommonOpts& common, const std::string& in_dir,
                const std::string& out_dir, const std::string& noise_dir,
                const std::string& rir_dir, int multiplier_override,
                int64_t seed_override, const std::string& manifest_path) {
  AppConfig config;
  try {
    config = resolve_config(common);
    if (multiplier_override > 0) config.augment.multiplier = multiplier_override;
    if (seed_override >= 0) config.augment.seed = static_cast<uint64_t>(seed_override);
  } catch (const Error& e) {
    warn(e.what());
    return kExitConfig;
  }

  try {
    AugmentPlan plan;
    plan.seed = config.augment.seed;
    plan.p_noise = config.augment.p_noise;
    plan.p_pitch = config.augment.p_pitch;
    plan.p_rir = config.augment.p_rir;
    plan.snr_lo_db = config.augment.snr_lo_db;
    plan.snr_hi_db = config.augment.snr_hi_db;
    plan.gain_lo_db = config.augment.gain_lo_db;
    plan.gain_hi_db = config.augment.gain_hi_db;

    for (const fs::path& p : list_wavs(noise_dir))
      plan.noise_bank.push_back(read_wav(p.string()));
    for (const fs::path& p : list_wavs(rir_dir))
      plan.rir_bank.push_back(read_wav(p.string()));
    if (plan.p_noise > 0.0 && plan.noise_bank.empty())
      raise(ErrorCode::InvalidConfig, "p_noise > 0 but no noise bank (--noise-bank)");
    if (plan.p_rir > 0.0 && plan.rir_bank.empty())
      raise(ErrorCode::InvalidConfig, "p_rir > 0 but no rir bank (--rir-bank)");

    const std::vector<fs::path> inputs = list_wavs(in_dir);
    if (inputs.empty()) raise(ErrorCode::EmptyBatch, "no WAV files in " + in_dir);

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    const std::string manifest_file =
        manifest_path.empty() ? (fs::path(out_dir) / "augment_manifest.jsonl").string()
                              : manifest_path;
    std::ofstream manifest(manifest_file);
    if (!manifest) raise(ErrorCode::IoError, "cannot write " + manifest_file);

    const uint64_t multiplier = static_cast<uint64_t>(config.augment.multiplier);
    size_t outputs = 0;
    for (size_t i = 0; i < inputs.size(); ++i) {
      const PcmClip clip = read_wav(inputs[i].string());
      for (uint64_t m = 0; m < multiplier; ++m) {
        const uint64_t index = static_cast<uint64_t>(i) * multiplier + m;
        const AugmentResult result = augment_clip(clip, plan, index);
        const std::string name =
            inputs[i].stem().string() + "_aug" + std::to_string(m + 1) + ".wav";
        const std::string out_path = (fs::path(out_dir) / name).string();
        write_wav(result.clip, out_path);

        nlohmann::ordered_json line;
        line["input"] = inputs[i].string();
        line["output"] = out_path;
        line["index"] = index;
        line["ops"] = result.ops;
        manifest << line.dump() << "\n";
        ++outputs;
      }
    }
    manifest.flush();
    if (!manifest) raise(ErrorCode::IoError, "write failed: " + manifest_file);

    std::printf("wrote %zu outputs -> %s\n", outputs, out_dir.c_str());
    std::cout.flush();
  } catch (const Error& e) {
    warn(e.what());
    return kExitData;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"streaming wakeword detection and speaker authentication"};
  app.require_subcommand(1);

  CommonOpts common;

  auto* detect = app.add_subcommand("detect", "stream inputs through the pipeline");
  std::vector<std::string> detect_inputs;
  add_common(detect, common);
  detect->add_option("inputs", detect_inputs,
                     "WAV files (omit to read s16le PCM from stdin)");

  auto* enroll_cmd = app.add_subcommand("enroll", "build a speaker profile");
  std::string enroll_dir, enroll_out;
  add_common(enroll_cmd, common);
  enroll_cmd->add_option("--clips", enroll_dir, "directory of enrollment WAVs")
      ->required();
  enroll_cmd->add_option("--out", enroll_out, "output profile path");

  auto* train_cmd = app.add_subcommand("train", "fit the wakeword classifier");
  std::string train_pos, train_neg, train_out, train_loss;
  add_common(train_cmd, common);
  train_cmd->add_option("--pos", train_pos, "directory of positive WAVs")->required();
  train_cmd->add_option("--neg", train_neg, "directory of negative WAVs")->required();
  train_cmd->add_option("--out", train_out, "output model path");
  train_cmd->add_option("--loss", train_loss, "loss trace CSV (default <out>.loss.csv)");

  auto* eval_cmd = app.add_subcommand("eval", "threshold sweep and EER report");
  std::string eval_manifest, eval_task, eval_report;
  add_common(eval_cmd, common);
  eval_cmd->add_option("--manifest", eval_manifest, "dataset manifest CSV")->required();
  eval_cmd->add_option("--task", eval_task, "wakeword or auth")->required();
  eval_cmd->add_option("--report", eval_report, "output report CSV")->required();

  auto* prep_cmd = app.add_subcommand("prep", "normalize / VAD-trim / segment WAVs");
  std::string prep_in, prep_out;
  bool prep_normalize = false, prep_vad = false;
  double prep_segment = 0.0, prep_gap = 2.0;
  add_common(prep_cmd, common);
  prep_cmd->add_option("--in", prep_in, "input directory")->required();
  prep_cmd->add_option("--out", prep_out, "output directory")->required();
  prep_cmd->add_flag("--normalize", prep_normalize, "RMS-normalize");
  prep_cmd->add_flag("--vad", prep_vad, "trim to detected speech");
  prep_cmd->add_option("--segment", prep_segment,
                       "slice into segments of this many seconds");
  prep_cmd->add_option("--gap", prep_gap, "seconds skipped between segments");

  auto* aug_cmd = app.add_subcommand("augment", "randomized noise/rir/gain variants");
  std::string aug_in, aug_out, aug_noise, aug_rir, aug_manifest;
  int aug_multiplier = 0;
  int64_t aug_seed = -1;
  add_common(aug_cmd, common);
  aug_cmd->add_option("--in", aug_in, "input directory")->required();
  aug_cmd->add_option("--out", aug_out, "output directory")->required();
  aug_cmd->add_option("--noise-bank", aug_noise, "directory of noise WAVs");
  aug_cmd->add_option("--rir-bank", aug_rir, "directory of impulse-response WAVs");
  aug_cmd->add_option("--multiplier", aug_multiplier, "outputs per input");
  aug_cmd->add_option("--seed", aug_seed, "override augment seed");
  aug_cmd->add_option("--manifest", aug_manifest, "applied-ops manifest path");

  CLI11_PARSE(app, argc, argv);

  if (detect->parsed()) return cmd_detect(common, detect_inputs);
  if (enroll_cmd->parsed()) return cmd_enroll(common, enroll_dir, enroll_out);
  if (train_cmd->parsed())
    return cmd_train(common, train_pos, train_neg, train_out, train_loss);
  if (eval_cmd->parsed()) return cmd_eval(common, eval_manifest, eval_task, eval_report);
  if (prep_cmd->parsed())
    return cmd_prep(common, prep_in, prep_out, prep_normalize, prep_vad, prep_segment,
                    prep_gap);
  if (aug_cmd->parsed())
    return cmd_augment(common, aug_in, aug_out, aug_noise, aug_rir, aug_multiplier,
                       aug_seed, aug_manifest);
  return kExitConfig;
}
