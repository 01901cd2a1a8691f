// Copyright 2026 The PhosForge Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "phosforge/nn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "phosforge/error.hpp"
#include "phosforge/simd/kernels.hpp"

namespace phosforge::nn {

// --- Architecture -----------------------------------------------------------

void Architecture::validate() const {
  if (input_dim == 0 || output_dim == 0) throw DataError("layer widths must be >= 1");
  if (hidden.empty()) throw DataError("architecture needs at least one hidden layer");
  for (std::size_t w : hidden) {
    if (w == 0) throw DataError("layer widths must be >= 1");
  }
}

std::vector<std::size_t> Architecture::widths() const {
  std::vector<std::size_t> w;
  w.reserve(hidden.size() + 2);
  w.push_back(input_dim);
  w.insert(w.end(), hidden.begin(), hidden.end());
  w.push_back(output_dim);
  return w;
}

std::size_t Architecture::hidden_units() const {
  return std::accumulate(hidden.begin(), hidden.end(), std::size_t{0});
}

std::size_t Architecture::parameter_count() const {
  const auto w = widths();
  std::size_t n = 0;
  for (std::size_t l = 1; l < w.size(); ++l) n += w[l] * w[l - 1] + w[l];
  return n;
}

std::string Architecture::to_string() const {
  std::string s;
  for (std::size_t w : widths()) {
    if (!s.empty()) s += '-';
    s += std::to_string(w);
  }
  return s;
}

Architecture Architecture::ann1() { return {kFeatureCount, {16, 8}, 1}; }
Architecture Architecture::ann2() { return {kFeatureCount, {144, 256, 64}, 1}; }
Architecture Architecture::ann3() { return {kFeatureCount, {128, 128, 128, 64}, 1}; }

// --- Parameters -------------------------------------------------------------

Parameters::Parameters(Architecture arch) : arch_(std::move(arch)) {
  arch_.validate();
  const auto w = arch_.widths();
  std::size_t offset = 0;
  for (std::size_t l = 1; l < w.size(); ++l) {
    offsets_.push_back(offset);
    offset += w[l] * w[l - 1] + w[l];
  }
  data_.assign(offset, 0.0);
}

LayerSpan<double> Parameters::layer(std::size_t l) {
  const std::size_t fan_in = l == 0 ? arch_.input_dim : arch_.hidden[l - 1];
  const std::size_t fan_out = l < arch_.hidden.size() ? arch_.hidden[l] : arch_.output_dim;
  std::span<double> all(data_);
  return {fan_in, fan_out, all.subspan(offsets_[l], fan_in * fan_out),
          all.subspan(offsets_[l] + fan_in * fan_out, fan_out)};
}

LayerSpan<const double> Parameters::layer(std::size_t l) const {
  const std::size_t fan_in = l == 0 ? arch_.input_dim : arch_.hidden[l - 1];
  const std::size_t fan_out = l < arch_.hidden.size() ? arch_.hidden[l] : arch_.output_dim;
  std::span<const double> all(data_);
  return {fan_in, fan_out, all.subspan(offsets_[l], fan_in * fan_out),
          all.subspan(offsets_[l] + fan_in * fan_out, fan_out)};
}

void Parameters::fill(double value) { std::fill(data_.begin(), data_.end(), value); }

bool Parameters::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

Parameters init_params(const Architecture& arch, std::uint64_t seed) {
  Parameters p(arch);
  std::mt19937_64 rng(seed);
  for (std::size_t l = 0; l < p.layer_count(); ++l) {
    auto layer = p.layer(l);
    const double limit = std::sqrt(6.0 / static_cast<double>(layer.fan_in + layer.fan_out));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (double& w : layer.weights) w = dist(rng);
  }
  return p;
}

// --- Forward / backward -----------------------------------------------------

void forward_into(const Parameters& params, std::span<const double> x, ForwardCache& cache) {
  const std::size_t layers = params.layer_count();
  if (x.size() != params.architecture().input_dim) {
    throw DataError("forward: input has " + std::to_string(x.size()) + " values, network expects " +
                    std::to_string(params.architecture().input_dim));
  }
  cache.pre.resize(layers);
  cache.act.resize(layers + 1);
  cache.act[0].assign(x.begin(), x.end());
  const auto& k = simd::active();
  for (std::size_t l = 0; l < layers; ++l) {
    const auto layer = params.layer(l);
    auto& z = cache.pre[l];
    auto& a = cache.act[l + 1];
    z.resize(layer.fan_out);
    a.resize(layer.fan_out);
    const double* in = cache.act[l].data();
    for (std::size_t j = 0; j < layer.fan_out; ++j) {
      z[j] = k.dot(layer.weights.data() + j * layer.fan_in, in, layer.fan_in) + layer.bias[j];
      a[j] = sigmoid(z[j]);
    }
  }
}

ForwardCache forward(const Parameters& params, std::span<const double> x) {
  ForwardCache cache;
  forward_into(params, x, cache);
  return cache;
}

double loss(std::span<const double> y_hat, std::span<const double> y) {
  if (y_hat.size() != y.size()) throw DataError("loss: length mismatch");
  if (y.empty()) throw DataError("loss: empty input");
  double acc = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double d = y[i] - y_hat[i];
    acc += d * d;
  }
  return acc / static_cast<double>(y.size());
}

void accumulate_gradient(const Parameters& params, const ForwardCache& cache, double y,
                         Gradients& acc, std::vector<double>& scratch) {
  const auto& k = simd::active();
  const std::size_t layers = params.layer_count();

  // delta holds dL/dz for the current layer; scratch receives the next one.
  std::vector<double> delta(cache.act.back().size());
  {
    const double a = cache.output();
    delta[0] = 2.0 * (a - y) * a * (1.0 - a);
  }
  for (std::size_t l = layers; l-- > 0;) {
    const auto layer = params.layer(l);
    auto grad = acc.layer(l);
    const double* a_prev = cache.act[l].data();
    for (std::size_t j = 0; j < layer.fan_out; ++j) {
      grad.bias[j] += delta[j];
      k.axpy(delta[j], a_prev, grad.weights.data() + j * layer.fan_in, layer.fan_in);
    }
    if (l == 0) break;
    scratch.assign(layer.fan_in, 0.0);
    for (std::size_t j = 0; j < layer.fan_out; ++j) {
      k.axpy(delta[j], layer.weights.data() + j * layer.fan_in, scratch.data(), layer.fan_in);
    }
    for (std::size_t i = 0; i < layer.fan_in; ++i) {
      const double a = a_prev[i];
      scratch[i] *= a * (1.0 - a);
    }
    delta.swap(scratch);
  }
}

Gradients backward(const Parameters& params, const ForwardCache& cache, double y) {
  Gradients g(params.architecture());
  std::vector<double> scratch;
  accumulate_gradient(params, cache, y, g, scratch);
  return g;
}

Gradients numeric_gradient(const Parameters& params, std::span<const double> x, double y,
                           double h) {
  if (!(h > 0.0)) throw DataError("numeric_gradient needs h > 0");
  Parameters probe = params;
  Gradients g(params.architecture());
  ForwardCache cache;
  auto sample_loss = [&]() {
    forward_into(probe, x, cache);
    const double d = cache.output() - y;
    return d * d;
  };
  auto theta = probe.flat();
  auto out = g.flat();
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double saved = theta[i];
    theta[i] = saved + h;
    const double up = sample_loss();
    theta[i] = saved - h;
    const double down = sample_loss();
    theta[i] = saved;
    out[i] = (up - down) / (2.0 * h);
  }
  return g;
}

// --- Adam -------------------------------------------------------------------

void AdamConfig::validate() const {
  if (!(learning_rate > 0.0)) throw DataError("learning rate must be > 0");
  if (!(beta1 > 0.0 && beta1 < 1.0)) throw DataError("beta1 must lie in (0, 1)");
  if (!(beta2 > 0.0 && beta2 < 1.0)) throw DataError("beta2 must lie in (0, 1)");
  if (!(epsilon > 0.0)) throw DataError("epsilon must be > 0");
}

AdamState AdamState::zeros(const Parameters& params) {
  return {std::vector<double>(params.size(), 0.0), std::vector<double>(params.size(), 0.0), 0};
}

void adam_step(Parameters& params, const Gradients& grads, AdamState& state,
               const AdamConfig& config) {
  if (grads.size() != params.size() || state.m.size() != params.size() ||
      state.v.size() != params.size()) {
    throw DataError("adam_step: shape mismatch");
  }
  ++state.t;
  const double t = static_cast<double>(state.t);
  const simd::AdamCoefficients c{
      config.learning_rate,
      config.beta1,
      config.beta2,
      config.epsilon,
      1.0 - std::pow(config.beta1, t),
      1.0 - std::pow(config.beta2, t),
  };
  simd::active().adam_update(params.flat().data(), grads.flat().data(), state.m.data(),
                             state.v.data(), params.size(), c);
}

// --- Training ---------------------------------------------------------------

void TrainConfig::validate() const {
  if (epochs == 0) throw DataError("epochs must be >= 1");
  if (batch_size == 0) throw DataError("batch size must be >= 1");
  adam.validate();
  if (early_stopping && early_stopping->patience == 0) {
    throw DataError("early stopping patience must be >= 1");
  }
}

double predict_normalized(const Parameters& params, std::span<const double> x) {
  ForwardCache cache;
  forward_into(params, x, cache);
  return cache.output();
}

double evaluate_loss(const Parameters& params, const Samples& samples) {
  if (samples.empty()) throw DataError("evaluate_loss: empty sample set");
  ForwardCache cache;
  double acc = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    forward_into(params, samples.row(i), cache);
    const double d = samples.y[i] - cache.output();
    acc += d * d;
  }
  return acc / static_cast<double>(samples.size());
}

TrainResult train(const Samples& train_set, const Samples* val_set, const Architecture& arch,
                  const TrainConfig& config) {
  arch.validate();
  config.validate();
  if (train_set.empty()) throw DataError("training set is empty");
  if (train_set.dim != arch.input_dim) {
    throw DataError("training samples have " + std::to_string(train_set.dim) +
                    " features, architecture expects " + std::to_string(arch.input_dim));
  }
  if (config.batch_size > train_set.size()) {
    throw DataError("batch size exceeds training set size");
  }
  const bool have_val = val_set != nullptr && !val_set->empty();
  if (config.early_stopping && !have_val) {
    throw DataError("early stopping needs a validation set");
  }

  const std::size_t n = train_set.size();
  const std::size_t batch = config.batch_size;

  TrainResult result{init_params(arch, config.seed), {}};
  Parameters& params = result.params;
  TrainReport& report = result.report;
  report.iterations_per_epoch = (n + batch - 1) / batch;

  AdamState state = AdamState::zeros(params);
  Gradients grads(arch);
  ForwardCache cache;
  std::vector<double> scratch;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 shuffle_rng(config.seed ^ 0x9e3779b97f4a7c15ULL);

  std::optional<Parameters> best_params;
  double best_loss = 0.0;

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    for (std::size_t i = n; i > 1; --i) {
      std::uniform_int_distribution<std::size_t> pick(0, i - 1);
      std::swap(order[i - 1], order[pick(shuffle_rng)]);
    }
    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t stop = std::min(n, start + batch);
      grads.fill(0.0);
      for (std::size_t k = start; k < stop; ++k) {
        const std::size_t s = order[k];
        forward_into(params, train_set.row(s), cache);
        accumulate_gradient(params, cache, train_set.y[s], grads, scratch);
      }
      const double count = static_cast<double>(stop - start);
      for (double& g : grads.flat()) g /= count;
      adam_step(params, grads, state, config.adam);
      ++report.iterations;
    }

    report.train_loss.push_back(evaluate_loss(params, train_set));
    if (have_val) report.val_loss.push_back(evaluate_loss(params, *val_set));
    const double monitored = have_val ? report.val_loss.back() : report.train_loss.back();
    if (epoch == 0 || monitored < best_loss) {
      best_loss = monitored;
      report.best_epoch = epoch;
      if (config.early_stopping && config.early_stopping->restore_best) best_params = params;
    }
    if (config.early_stopping && epoch - report.best_epoch >= config.early_stopping->patience) {
      report.stopped_early = epoch + 1 < config.epochs;
      break;
    }
  }
  if (best_params) params = std::move(*best_params);
  return result;
}

// --- Inference --------------------------------------------------------------

Prediction predict(const ModelArtifact& artifact, const HeatRecord& record) {
  const NormalizedRecord n = normalize(record, artifact.norm);
  Prediction out;
  out.p_wtpct = artifact.norm.denormalize_target(predict_normalized(artifact.params, n.z));
  out.out_of_range = n.out_of_range;
  return out;
}

}  // namespace phosforge::nn
