#include "wakegate/backbone.hpp"

#include <cmath>

#include "binio.hpp"
#include "wakegate/error.hpp"
#include "wakegate/rng.hpp"

namespace wakegate {

EmbedderSpec init_native_embedder(uint64_t seed, int emb_features, int n_mels) {
  if (emb_features < 1 || n_mels < 1)
    raise(ErrorCode::InvalidConfig, "embedder dims must be >= 1");

  EmbedderSpec spec;
  spec.kind = EmbedderKind::NativeStandin;
  spec.seed = seed;
  spec.in_dim = static_cast<size_t>(emb_features) * static_cast<size_t>(n_mels);
  spec.w = Matrix(kEmbeddingDim, spec.in_dim);
  spec.b.resize(kEmbeddingDim);

  SplitMix64 rng(seed);
  for (double& v : spec.w.values) v = rng.next_symmetric();
  for (double& v : spec.b) v = rng.next_symmetric();
  return spec;
}

Embedding96 embed(const EmbedderSpec& spec, const MelWindow& window) {
  if (window.values.size() != spec.in_dim ||
      window.values.size() != window.n_frames * window.n_mels)
    raise(ErrorCode::ShapeMismatch,
          "window size " + std::to_string(window.values.size()) +
              " does not match embedder input " + std::to_string(spec.in_dim));

  const double scale = 1.0 / std::sqrt(static_cast<double>(spec.in_dim));
  Embedding96 out(kEmbeddingDim);
  for (size_t i = 0; i < kEmbeddingDim; ++i) {
    const double* row = spec.w.values.data() + i * spec.in_dim;
    double acc = 0.0;
    for (size_t j = 0; j < spec.in_dim; ++j)
      acc += row[j] * static_cast<double>(window.values[j]);
    out[i] = std::tanh(acc * scale + spec.b[i]);
  }
  return out;
}

std::vector<Embedding96> embed_batch(const EmbedderSpec& spec,
                                     const std::vector<MelWindow>& windows) {
  std::vector<Embedding96> out;
  out.reserve(windows.size());
  for (const MelWindow& w : windows) out.push_back(embed(spec, w));
  return out;
}

void save_embedder(const EmbedderSpec& spec, const std::filesystem::path& path) {
  auto out = binio::open_out(path, "WGEM");
  binio::write_magic(out, "WGEM");
  binio::write_u32(out, static_cast<uint32_t>(spec.w.rows));
  binio::write_u32(out, static_cast<uint32_t>(spec.w.cols));
  binio::write_f32_array(out, spec.w.values);
  binio::write_f32_array(out, spec.b);
  if (!out) raise(ErrorCode::IoError, "write failed: " + path.string());
}

EmbedderSpec load_embedder(const std::filesystem::path& path) {
  auto in = binio::open_in(path, "WGEM");
  binio::expect_magic(in, "WGEM", "WGEM");
  const uint32_t rows = binio::read_u32(in, "WGEM rows");
  const uint32_t cols = binio::read_u32(in, "WGEM cols");
  if (rows != kEmbeddingDim)
    raise(ErrorCode::UnsupportedFormat,
          "WGEM rows " + std::to_string(rows) + ", expected 96");

  EmbedderSpec spec;
  spec.kind = EmbedderKind::External;
  spec.in_dim = cols;
  spec.w = Matrix(rows, cols);
  spec.w.values = binio::read_f32_array(in, static_cast<size_t>(rows) * cols, "WGEM W");
  spec.b = binio::read_f32_array(in, rows, "WGEM b");
  return spec;
}

}  // namespace wakegate
