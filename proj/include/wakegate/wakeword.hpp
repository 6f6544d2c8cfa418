#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace wakegate {

struct FcnModel {
  uint32_t ww_windows = 16;  // embeddings per input window; 0 for raw models
  uint32_t hidden_dim = 128;
  size_t input_dim = 0;
  std::vector<double> w1;  // [hidden_dim x input_dim]
  std::vector<double> b1;  // [hidden_dim]
  std::vector<double> w2;  // [hidden_dim]
  double b2 = 0.0;
};

// W1 ~ U(-1,1)/sqrt(D), W2 ~ U(-1,1)/sqrt(H), biases zero, one SplitMix64
// stream (W1 first). input_dim = ww_windows * 96.
FcnModel init_fcn(uint64_t seed, uint32_t ww_windows, uint32_t hidden_dim = 128);

// Arbitrary input width for hand-sized checks; not persistable.
FcnModel init_fcn_raw(uint64_t seed, size_t input_dim, uint32_t hidden_dim);

// sigmoid(W2.relu(W1.x + b1) + b2)
double fcn_forward(const FcnModel& model, const std::vector<double>& x);

struct FcnGradients {
  double loss = 0.0;
  std::vector<double> w1, b1, w2;
  double b2 = 0.0;
};

// Mean BCE over the batch, p clamped to [1e-7, 1-1e-7] in the loss only;
// gradients are the exact analytic ones (dL/dz2 = p - y).
FcnGradients fcn_loss_and_grad(const FcnModel& model,
                               const std::vector<std::vector<double>>& xs,
                               const std::vector<double>& ys);

struct TrainConfig {
  double learning_rate = 1e-3;
  size_t micro_batch = 32;
  size_t accum_steps = 4;
  size_t epochs = 1;
  uint64_t seed = 0;
  double momentum = 0.9;
};

struct TrainResult {
  std::vector<double> epoch_loss;  // full-dataset BCE after each epoch
};

// SGD + momentum. Each optimizer step averages gradients over accum_steps
// micro-batches (weighted by size, so it equals one step on their union);
// shuffling is driven by config.seed.
TrainResult train(FcnModel& model, const std::vector<std::vector<double>>& xs,
                  const std::vector<double>& ys, const TrainConfig& config);

enum class GateAction { Idle, CooldownSkip, Triggered };

struct GateState {
  double wake_threshold = 0.5;
  int trigger_level = 4;
  int activations = 0;
  int cooldown_counter = 0;
  int cooldown_frames = 20;
};

// Cooldown first (skip + decrement); else p >= wake_threshold increments
// activations and fires at trigger_level (resetting activations, arming
// cooldown); else activations decay by one, floored at zero.
GateAction gate_update(GateState& state, double p);

// Model file: magic "WGFC", u32 ww_windows, u32 hidden_dim, then
// W1, b1, W2, b2 as f32 LE. input_dim is ww_windows * 96.
void save_fcn(const FcnModel& model, const std::filesystem::path& path);
FcnModel load_fcn(const std::filesystem::path& path);

}  // namespace wakegate
