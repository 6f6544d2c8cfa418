#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "wakegate/dsp.hpp"

namespace wakegate {

inline constexpr size_t kEmbeddingDim = 96;

// One embedder input: emb_features rows of scaled log-mel bins, row-major.
struct MelWindow {
  size_t n_frames = 0;
  size_t n_mels = 0;
  std::vector<float> values;
};

using Embedding96 = std::vector<double>;

enum class EmbedderKind { NativeStandin, External };

struct EmbedderSpec {
  EmbedderKind kind = EmbedderKind::NativeStandin;
  uint64_t seed = 0;
  size_t in_dim = 0;       // flattened window length = emb_features * n_mels
  Matrix w;                // [96 x in_dim]
  std::vector<double> b;   // [96]
};

// Seeded random projection; W then b drawn uniform(-1,1) from one SplitMix64
// stream, so the spec is a pure function of (seed, emb_features, n_mels).
EmbedderSpec init_native_embedder(uint64_t seed, int emb_features, int n_mels = 32);

// y = tanh(W.flatten(window) / sqrt(in_dim) + b)
Embedding96 embed(const EmbedderSpec& spec, const MelWindow& window);

std::vector<Embedding96> embed_batch(const EmbedderSpec& spec,
                                     const std::vector<MelWindow>& windows);

// Weight file: magic "WGEM", u32 rows, u32 cols, f32 LE row-major W, then b.
void save_embedder(const EmbedderSpec& spec, const std::filesystem::path& path);
EmbedderSpec load_embedder(const std::filesystem::path& path);

}  // namespace wakegate
