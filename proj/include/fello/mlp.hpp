// Three-layer perceptron (input, one ReLU hidden layer, softmax output)
// trained with plain mini-batch SGD on softmax cross-entropy.
//
// Parameters live in one flat vector so that aggregation, corruption and
// serialization all work on the same view. Layout:
//   W1 [hidden x inputs] | b1 [hidden] | W2 [classes x hidden] | b2 [classes]
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "fello/dataset.hpp"
#include "fello/errors.hpp"
#include "fello/random.hpp"

namespace fello {

struct Architecture {
  std::size_t n_features = 784;
  std::size_t hidden = 64;
  std::size_t n_classes = 10;

  std::size_t w1_size() const { return hidden * n_features; }
  std::size_t b1_offset() const { return w1_size(); }
  std::size_t w2_offset() const { return b1_offset() + hidden; }
  std::size_t b2_offset() const { return w2_offset() + n_classes * hidden; }
  std::size_t parameter_count() const { return b2_offset() + n_classes; }

  bool operator==(const Architecture&) const = default;
};

struct ModelParams {
  Architecture arch;
  std::vector<double> values;

  ModelParams() = default;
  explicit ModelParams(const Architecture& a) : arch(a), values(a.parameter_count(), 0.0) {}

  std::size_t size() const { return values.size(); }

  std::span<const double> w1() const { return {values.data(), arch.w1_size()}; }
  std::span<const double> b1() const { return {values.data() + arch.b1_offset(), arch.hidden}; }
  std::span<const double> w2() const {
    return {values.data() + arch.w2_offset(), arch.n_classes * arch.hidden};
  }
  std::span<const double> b2() const {
    return {values.data() + arch.b2_offset(), arch.n_classes};
  }

  bool all_finite() const {
    return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
  }

  bool operator==(const ModelParams&) const = default;
};

struct TrainConfig {
  double learning_rate = 0.05;
  int local_epochs = 2;
  std::size_t batch_size = 32;
  std::uint64_t seed = 1;

  void validate() const {
    if (!(learning_rate > 0.0)) throw DomainError("learning_rate must be > 0");
    if (local_epochs < 1) throw DomainError("local_epochs must be >= 1");
    if (batch_size < 1) throw DomainError("batch_size must be >= 1");
  }
};

// Glorot-uniform weights, zero biases.
inline ModelParams init_model(const Architecture& arch, Rng& rng) {
  ModelParams m(arch);
  auto fill = [&](std::size_t offset, std::size_t count, std::size_t fan_in, std::size_t fan_out) {
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    for (std::size_t i = 0; i < count; ++i)
      m.values[offset + i] = limit * (2.0 * rng.uniform() - 1.0);
  };
  fill(0, arch.w1_size(), arch.n_features, arch.hidden);
  fill(arch.w2_offset(), arch.n_classes * arch.hidden, arch.hidden, arch.n_classes);
  return m;
}

inline void check_shapes(const ModelParams& model, const Dataset& data) {
  if (model.values.size() != model.arch.parameter_count())
    throw ShapeError("parameter vector length does not match architecture");
  if (model.arch.n_features != data.n_features)
    throw ShapeError("model expects " + std::to_string(model.arch.n_features) +
                     " features, dataset has " + std::to_string(data.n_features));
  if (model.arch.n_classes != data.n_classes)
    throw ShapeError("model expects " + std::to_string(model.arch.n_classes) +
                     " classes, dataset has " + std::to_string(data.n_classes));
}

namespace detail {

// Scratch buffers for one sample's forward/backward pass.
struct Workspace {
  std::vector<double> hidden_pre;
  std::vector<double> hidden;
  std::vector<double> probs;
  std::vector<double> delta_hidden;

  explicit Workspace(const Architecture& a)
      : hidden_pre(a.hidden), hidden(a.hidden), probs(a.n_classes), delta_hidden(a.hidden) {}
};

inline void softmax_inplace(std::span<double> z) {
  const double mx = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double& v : z) {
    v = std::exp(v - mx);
    sum += v;
  }
  for (double& v : z) v /= sum;
}

inline void forward(const ModelParams& m, std::span<const double> x, Workspace& ws) {
  const auto& a = m.arch;
  const double* w1 = m.values.data();
  const double* b1 = w1 + a.b1_offset();
  const double* w2 = w1 + a.w2_offset();
  const double* b2 = w1 + a.b2_offset();
  for (std::size_t h = 0; h < a.hidden; ++h) {
    const double* wr = w1 + h * a.n_features;
    double s = b1[h];
    for (std::size_t f = 0; f < a.n_features; ++f) s += wr[f] * x[f];
    ws.hidden_pre[h] = s;
    ws.hidden[h] = s < 0.0 ? 0.0 : s;  // lets NaN through so divergence is caught
  }
  for (std::size_t c = 0; c < a.n_classes; ++c) {
    const double* wr = w2 + c * a.hidden;
    double s = b2[c];
    for (std::size_t h = 0; h < a.hidden; ++h) s += wr[h] * ws.hidden[h];
    ws.probs[c] = s;
  }
  softmax_inplace(ws.probs);
}

// -log p_y with p clamped away from zero.
inline double cross_entropy(std::span<const double> probs, int label) {
  return -std::log(std::max(probs[static_cast<std::size_t>(label)],
                            std::numeric_limits<double>::min()));
}

// Adds this sample's gradient into `grad` (same layout as the parameters).
inline void accumulate_gradient(const ModelParams& m, std::span<const double> x, int label,
                                Workspace& ws, std::span<double> grad) {
  const auto& a = m.arch;
  forward(m, x, ws);
  const double* w2 = m.values.data() + a.w2_offset();
  double* g_w1 = grad.data();
  double* g_b1 = grad.data() + a.b1_offset();
  double* g_w2 = grad.data() + a.w2_offset();
  double* g_b2 = grad.data() + a.b2_offset();

  std::fill(ws.delta_hidden.begin(), ws.delta_hidden.end(), 0.0);
  for (std::size_t c = 0; c < a.n_classes; ++c) {
    const double d = ws.probs[c] - (static_cast<int>(c) == label ? 1.0 : 0.0);
    g_b2[c] += d;
    double* gr = g_w2 + c * a.hidden;
    const double* wr = w2 + c * a.hidden;
    for (std::size_t h = 0; h < a.hidden; ++h) {
      gr[h] += d * ws.hidden[h];
      ws.delta_hidden[h] += d * wr[h];
    }
  }
  // ReLU derivative taken as 0 at the kink.
  for (std::size_t h = 0; h < a.hidden; ++h) {
    if (ws.hidden_pre[h] <= 0.0) continue;
    const double d = ws.delta_hidden[h];
    g_b1[h] += d;
    double* gr = g_w1 + h * a.n_features;
    for (std::size_t f = 0; f < a.n_features; ++f) gr[f] += d * x[f];
  }
}

}  // namespace detail

// Class probabilities for one input row.
inline std::vector<double> predict_proba(const ModelParams& model, std::span<const double> x) {
  detail::Workspace ws(model.arch);
  detail::forward(model, x, ws);
  return ws.probs;
}

// Lowest index wins ties.
inline std::size_t argmax(std::span<const double> v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

// Mean softmax cross-entropy over the dataset.
inline double local_loss(const ModelParams& model, const Dataset& data) {
  check_shapes(model, data);
  if (data.empty()) throw DomainError("loss over an empty dataset");
  detail::Workspace ws(model.arch);
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    detail::forward(model, data.row(i), ws);
    total += detail::cross_entropy(ws.probs, data.labels[i]);
  }
  return total / static_cast<double>(data.size());
}

// Mean gradient of the loss over the selected rows.
inline std::vector<double> batch_gradient(const ModelParams& model, const Dataset& data,
                                          std::span<const std::size_t> rows) {
  check_shapes(model, data);
  std::vector<double> grad(model.size(), 0.0);
  detail::Workspace ws(model.arch);
  for (std::size_t i : rows) detail::accumulate_gradient(model, data.row(i), data.labels[i], ws, grad);
  if (!rows.empty()) {
    const double inv = 1.0 / static_cast<double>(rows.size());
    for (double& g : grad) g *= inv;
  }
  return grad;
}

// One shuffled pass of mini-batch SGD.
inline ModelParams sgd_epoch(ModelParams model, const Dataset& data, const TrainConfig& cfg,
                             Rng& rng) {
  check_shapes(model, data);
  if (cfg.batch_size < 1) throw DomainError("batch_size must be >= 1");
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(order.begin(), order.end());

  std::vector<double> grad(model.size());
  detail::Workspace ws(model.arch);
  for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
    const std::size_t end = std::min(order.size(), start + cfg.batch_size);
    std::fill(grad.begin(), grad.end(), 0.0);
    for (std::size_t b = start; b < end; ++b)
      detail::accumulate_gradient(model, data.row(order[b]), data.labels[order[b]], ws, grad);
    const double step = cfg.learning_rate / static_cast<double>(end - start);
    for (std::size_t p = 0; p < grad.size(); ++p) {
      if (!std::isfinite(grad[p]))
        throw NumericalError("non-finite gradient at parameter " + std::to_string(p) +
                             " (batch starting at " + std::to_string(start) + ", lr " +
                             std::to_string(cfg.learning_rate) + ")");
      model.values[p] -= step * grad[p];
    }
  }
  return model;
}

// Starts from the received global model and runs cfg.local_epochs epochs.
// local_epochs == 0 returns the global model unchanged.
inline ModelParams train_local(const Dataset& shard, const ModelParams& global,
                               const TrainConfig& cfg, Rng& rng) {
  ModelParams m = global;
  for (int e = 0; e < cfg.local_epochs; ++e) m = sgd_epoch(std::move(m), shard, cfg, rng);
  return m;
}

struct EvalResult {
  double accuracy = 0.0;
  double loss = 0.0;
};

inline EvalResult evaluate(const ModelParams& model, const Dataset& test) {
  check_shapes(model, test);
  if (test.empty()) throw DomainError("evaluation on an empty test set");
  detail::Workspace ws(model.arch);
  std::size_t correct = 0;
  double loss = 0.0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    detail::forward(model, test.row(i), ws);
    if (static_cast<int>(argmax(ws.probs)) == test.labels[i]) ++correct;
    loss += detail::cross_entropy(ws.probs, test.labels[i]);
  }
  const double n = static_cast<double>(test.size());
  return {static_cast<double>(correct) / n, loss / n};
}

// Forward+backward multiply-adds per sample: 2*fan_in*fan_out per layer
// forward, three times that with the backward pass.
inline double train_flops_per_sample(const Architecture& a) {
  const double fwd = 2.0 * static_cast<double>(a.n_features * a.hidden + a.hidden * a.n_classes);
  return 3.0 * fwd;
}

}  // namespace fello
