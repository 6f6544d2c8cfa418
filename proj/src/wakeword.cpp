#include "wakegate/wakeword.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "binio.hpp"
#include "wakegate/backbone.hpp"
#include "wakegate/error.hpp"
#include "wakegate/rng.hpp"

namespace wakegate {

namespace {

constexpr double kProbClamp = 1e-7;

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

FcnModel make_fcn(uint64_t seed, uint32_t ww_windows, size_t input_dim,
                  uint32_t hidden_dim) {
  if (input_dim < 1 || hidden_dim < 1)
    raise(ErrorCode::InvalidConfig, "fcn dims must be >= 1");

  FcnModel model;
  model.ww_windows = ww_windows;
  model.hidden_dim = hidden_dim;
  model.input_dim = input_dim;
  model.w1.resize(static_cast<size_t>(hidden_dim) * input_dim);
  model.b1.assign(hidden_dim, 0.0);
  model.w2.resize(hidden_dim);

  SplitMix64 rng(seed);
  const double s1 = 1.0 / std::sqrt(static_cast<double>(input_dim));
  for (double& v : model.w1) v = rng.next_symmetric() * s1;
  const double s2 = 1.0 / std::sqrt(static_cast<double>(hidden_dim));
  for (double& v : model.w2) v = rng.next_symmetric() * s2;
  return model;
}

// Forward pass keeping the pieces backprop needs.
void forward_parts(const FcnModel& m, const std::vector<double>& x,
                   std::vector<double>& h, double& p) {
  h.assign(m.hidden_dim, 0.0);
  double z2 = m.b2;
  for (size_t i = 0; i < m.hidden_dim; ++i) {
    const double* row = m.w1.data() + i * m.input_dim;
    double z = m.b1[i];
    for (size_t j = 0; j < m.input_dim; ++j) z += row[j] * x[j];
    if (z > 0.0) {
      h[i] = z;
      z2 += m.w2[i] * z;
    }
  }
  p = sigmoid(z2);
}

}  // namespace

FcnModel init_fcn(uint64_t seed, uint32_t ww_windows, uint32_t hidden_dim) {
  if (ww_windows < 1) raise(ErrorCode::InvalidConfig, "ww_windows must be >= 1");
  return make_fcn(seed, ww_windows,
                  static_cast<size_t>(ww_windows) * kEmbeddingDim, hidden_dim);
}

FcnModel init_fcn_raw(uint64_t seed, size_t input_dim, uint32_t hidden_dim) {
  return make_fcn(seed, 0, input_dim, hidden_dim);
}

double fcn_forward(const FcnModel& model, const std::vector<double>& x) {
  if (x.size() != model.input_dim)
    raise(ErrorCode::ShapeMismatch, "fcn input size " + std::to_string(x.size()) +
                                        ", expected " +
                                        std::to_string(model.input_dim));
  std::vector<double> h;
  double p = 0.0;
  forward_parts(model, x, h, p);
  return p;
}

FcnGradients fcn_loss_and_grad(const FcnModel& model,
                               const std::vector<std::vector<double>>& xs,
                               const std::vector<double>& ys) {
  if (xs.empty()) raise(ErrorCode::EmptyBatch, "empty batch");
  if (xs.size() != ys.size())
    raise(ErrorCode::ShapeMismatch, "batch inputs and labels differ in length");

  FcnGradients g;
  g.w1.assign(model.w1.size(), 0.0);
  g.b1.assign(model.b1.size(), 0.0);
  g.w2.assign(model.w2.size(), 0.0);

  std::vector<double> h;
  const double inv_n = 1.0 / static_cast<double>(xs.size());
  for (size_t n = 0; n < xs.size(); ++n) {
    const std::vector<double>& x = xs[n];
    if (x.size() != model.input_dim)
      raise(ErrorCode::ShapeMismatch, "batch item size mismatch");
    double p = 0.0;
    forward_parts(model, x, h, p);

    const double pc = std::clamp(p, kProbClamp, 1.0 - kProbClamp);
    g.loss -= (ys[n] * std::log(pc) + (1.0 - ys[n]) * std::log(1.0 - pc)) * inv_n;

    const double d2 = (p - ys[n]) * inv_n;
    g.b2 += d2;
    for (size_t i = 0; i < model.hidden_dim; ++i) {
      if (h[i] <= 0.0) continue;
      g.w2[i] += d2 * h[i];
      const double d1 = d2 * model.w2[i];
      g.b1[i] += d1;
      double* grow = g.w1.data() + i * model.input_dim;
      for (size_t j = 0; j < model.input_dim; ++j) grow[j] += d1 * x[j];
    }
  }
  return g;
}

TrainResult train(FcnModel& model, const std::vector<std::vector<double>>& xs,
                  const std::vector<double>& ys, const TrainConfig& config) {
  if (xs.empty()) raise(ErrorCode::EmptyBatch, "no training data");
  if (xs.size() != ys.size())
    raise(ErrorCode::ShapeMismatch, "training inputs and labels differ in length");
  if (config.micro_batch < 1 || config.accum_steps < 1 || config.epochs < 1 ||
      config.learning_rate <= 0.0)
    raise(ErrorCode::InvalidConfig, "bad train config");

  const bool has_pos = std::any_of(ys.begin(), ys.end(), [](double y) { return y >= 0.5; });
  const bool has_neg = std::any_of(ys.begin(), ys.end(), [](double y) { return y < 0.5; });
  if (!has_pos || !has_neg)
    raise(ErrorCode::SingleClassData, "training data contains a single class");

  std::vector<double> vw1(model.w1.size(), 0.0), vb1(model.b1.size(), 0.0),
      vw2(model.w2.size(), 0.0);
  double vb2 = 0.0;

  std::vector<size_t> order(xs.size());
  std::iota(order.begin(), order.end(), 0);
  SplitMix64 rng(config.seed);

  const size_t step_items = config.micro_batch * config.accum_steps;
  TrainResult result;

  for (size_t epoch = 0; epoch < config.epochs; ++epoch) {
    for (size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[rng.next_below(i)]);

    for (size_t start = 0; start < order.size(); start += step_items) {
      const size_t end = std::min(start + step_items, order.size());

      // Weighted mean over the step's micro-batches equals the mean over
      // their union, which keeps accumulation equal to a full-batch step.
      std::vector<double> gw1(model.w1.size(), 0.0), gb1(model.b1.size(), 0.0),
          gw2(model.w2.size(), 0.0);
      double gb2 = 0.0;
      for (size_t ms = start; ms < end; ms += config.micro_batch) {
        const size_t me = std::min(ms + config.micro_batch, end);
        std::vector<std::vector<double>> bx;
        std::vector<double> by;
        bx.reserve(me - ms);
        by.reserve(me - ms);
        for (size_t i = ms; i < me; ++i) {
          bx.push_back(xs[order[i]]);
          by.push_back(ys[order[i]]);
        }
        FcnGradients g = fcn_loss_and_grad(model, bx, by);
        const double w = static_cast<double>(me - ms);
        for (size_t i = 0; i < gw1.size(); ++i) gw1[i] += w * g.w1[i];
        for (size_t i = 0; i < gb1.size(); ++i) gb1[i] += w * g.b1[i];
        for (size_t i = 0; i < gw2.size(); ++i) gw2[i] += w * g.w2[i];
        gb2 += w * g.b2;
      }
      const double inv = 1.0 / static_cast<double>(end - start);

      for (size_t i = 0; i < vw1.size(); ++i) {
        vw1[i] = config.momentum * vw1[i] + gw1[i] * inv;
        model.w1[i] -= config.learning_rate * vw1[i];
      }
      for (size_t i = 0; i < vb1.size(); ++i) {
        vb1[i] = config.momentum * vb1[i] + gb1[i] * inv;
        model.b1[i] -= config.learning_rate * vb1[i];
      }
      for (size_t i = 0; i < vw2.size(); ++i) {
        vw2[i] = config.momentum * vw2[i] + gw2[i] * inv;
        model.w2[i] -= config.learning_rate * vw2[i];
      }
      vb2 = config.momentum * vb2 + gb2 * inv;
      model.b2 -= config.learning_rate * vb2;
    }

    result.epoch_loss.push_back(fcn_loss_and_grad(model, xs, ys).loss);
  }
  return result;
}

GateAction gate_update(GateState& state, double p) {
  if (state.cooldown_counter > 0) {
    --state.cooldown_counter;
    return GateAction::CooldownSkip;
  }
  if (p >= state.wake_threshold) {
    ++state.activations;
    if (state.activations >= state.trigger_level) {
      state.activations = 0;
      state.cooldown_counter = state.cooldown_frames;
      return GateAction::Triggered;
    }
    return GateAction::Idle;
  }
  state.activations = std::max(0, state.activations - 1);
  return GateAction::Idle;
}

void save_fcn(const FcnModel& model, const std::filesystem::path& path) {
  if (model.ww_windows == 0 ||
      model.input_dim != static_cast<size_t>(model.ww_windows) * kEmbeddingDim)
    raise(ErrorCode::ShapeMismatch, "only ww_windows*96 models are persistable");

  auto out = binio::open_out(path, "WGFC");
  binio::write_magic(out, "WGFC");
  binio::write_u32(out, model.ww_windows);
  binio::write_u32(out, model.hidden_dim);
  binio::write_f32_array(out, model.w1);
  binio::write_f32_array(out, model.b1);
  binio::write_f32_array(out, model.w2);
  binio::write_f32(out, static_cast<float>(model.b2));
  if (!out) raise(ErrorCode::IoError, "write failed: " + path.string());
}

FcnModel load_fcn(const std::filesystem::path& path) {
  auto in = binio::open_in(path, "WGFC");
  binio::expect_magic(in, "WGFC", "WGFC");

  FcnModel model;
  model.ww_windows = binio::read_u32(in, "WGFC ww_windows");
  model.hidden_dim = binio::read_u32(in, "WGFC hidden_dim");
  if (model.ww_windows < 1 || model.hidden_dim < 1)
    raise(ErrorCode::UnsupportedFormat, "WGFC dims must be >= 1");
  model.input_dim = static_cast<size_t>(model.ww_windows) * kEmbeddingDim;
  model.w1 = binio::read_f32_array(
      in, static_cast<size_t>(model.hidden_dim) * model.input_dim, "WGFC W1");
  model.b1 = binio::read_f32_array(in, model.hidden_dim, "WGFC b1");
  model.w2 = binio::read_f32_array(in, model.hidden_dim, "WGFC W2");
  model.b2 = static_cast<double>(binio::read_f32(in, "WGFC b2"));
  return model;
}

}  // namespace wakegate
