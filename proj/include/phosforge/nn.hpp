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

// Fully connected sigmoid regression network trained with mini-batch Adam on
// a mean-squared-error loss.
//
// Every layer, including the output layer, computes
//
//     a_l = sigmoid(W_l a_{l-1} + b_l),   a_0 = x,
//
// so predictions live in (0, 1), the range of min-max normalised targets.
// Inner products and rank-one updates go through phosforge::simd, so results
// are bitwise reproducible for a fixed kernel level, seed and data order.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "phosforge/domain.hpp"
#include "phosforge/preprocess.hpp"
#include "phosforge/samples.hpp"

namespace phosforge::nn {

struct Architecture {
  std::size_t input_dim = kFeatureCount;
  std::vector<std::size_t> hidden;
  std::size_t output_dim = 1;

  /// Throws DataError when a width is zero or there is no hidden layer.
  void validate() const;
  /// [input, hidden..., output]
  std::vector<std::size_t> widths() const;
  std::size_t layer_count() const { return hidden.size() + 1; }
  std::size_t hidden_units() const;
  std::size_t parameter_count() const;
  /// "12-128-128-128-64-1"
  std::string to_string() const;

  bool operator==(const Architecture&) const = default;

  static Architecture ann1();  // 12-16-8-1
  static Architecture ann2();  // 12-144-256-64-1
  static Architecture ann3();  // 12-128-128-128-64-1
};

template <typename T>
struct LayerSpan {
  std::size_t fan_in = 0;
  std::size_t fan_out = 0;
  std::span<T> weights;  // fan_out rows x fan_in columns, row-major
  std::span<T> bias;     // fan_out

  std::span<T> row(std::size_t j) const { return weights.subspan(j * fan_in, fan_in); }
};

/// Weights and biases of every layer in one contiguous buffer laid out layer by
/// layer as [W row-major, b]. Gradients and Adam moments share the layout.
class Parameters {
 public:
  /// Zero-filled parameters for `arch`.
  explicit Parameters(Architecture arch);

  const Architecture& architecture() const { return arch_; }
  std::size_t layer_count() const { return offsets_.size(); }
  LayerSpan<double> layer(std::size_t l);
  LayerSpan<const double> layer(std::size_t l) const;
  std::span<double> flat() { return data_; }
  std::span<const double> flat() const { return data_; }
  std::size_t size() const { return data_.size(); }

  void fill(double value);
  bool all_finite() const;

  bool operator==(const Parameters&) const = default;

 private:
  Architecture arch_;
  std::vector<std::size_t> offsets_;  // start of each layer in data_
  std::vector<double> data_;
};

using Gradients = Parameters;

double sigmoid(double z);

/// Glorot-uniform weights in +/- sqrt(6 / (fan_in + fan_out)), zero biases.
Parameters init_params(const Architecture& arch, std::uint64_t seed);

/// Pre-activations and activations of every layer; act[0] is the input.
struct ForwardCache {
  std::vector<std::vector<double>> pre;  // one per layer
  std::vector<std::vector<double>> act;  // layer_count + 1 entries

  double output() const { return act.back().front(); }
};

ForwardCache forward(const Parameters& params, std::span<const double> x);
/// Same as forward() but reuses the cache's buffers.
void forward_into(const Parameters& params, std::span<const double> x, ForwardCache& cache);

/// Mean of squared residuals. Throws DataError on length mismatch or empty input.
double loss(std::span<const double> y_hat, std::span<const double> y);

/// Exact gradient of the single-sample squared error (y_hat - y)^2.
Gradients backward(const Parameters& params, const ForwardCache& cache, double y);

/// Adds the single-sample gradient to `acc`; `scratch` is reused between calls.
void accumulate_gradient(const Parameters& params, const ForwardCache& cache, double y,
                         Gradients& acc, std::vector<double>& scratch);

/// Central differences (L(theta + h) - L(theta - h)) / 2h of the single-sample
/// squared error, one parameter at a time. Test oracle for backward().
Gradients numeric_gradient(const Parameters& params, std::span<const double> x, double y,
                           double h);

struct AdamConfig {
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  void validate() const;
};

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::uint64_t t = 0;

  static AdamState zeros(const Parameters& params);
};

/// One bias-corrected Adam update of `params` in place.
void adam_step(Parameters& params, const Gradients& grads, AdamState& state,
               const AdamConfig& config);

struct EarlyStopping {
  std::size_t patience = 50;
  bool restore_best = true;
};

struct TrainConfig {
  std::size_t epochs = 500;
  std::size_t batch_size = 50;
  AdamConfig adam;
  std::optional<EarlyStopping> early_stopping;
  std::uint64_t seed = 1;

  void validate() const;
};

struct TrainReport {
  std::vector<double> train_loss;  // full-pass MSE after each epoch
  std::vector<double> val_loss;    // empty without a validation set
  std::size_t best_epoch = 0;      // index into the loss vectors
  std::size_t iterations = 0;      // Adam steps taken
  std::size_t iterations_per_epoch = 0;
  bool stopped_early = false;
};

struct TrainResult {
  Parameters params;
  TrainReport report;
};

/// Mini-batch training on normalised samples. `val` may be null unless early
/// stopping is configured. The best epoch is chosen on validation loss when a
/// validation set is given, else on training loss.
TrainResult train(const Samples& train_set, const Samples* val_set, const Architecture& arch,
                  const TrainConfig& config);

/// Full-pass MSE of the network on `samples`.
double evaluate_loss(const Parameters& params, const Samples& samples);

/// Network output for one normalised feature vector.
double predict_normalized(const Parameters& params, std::span<const double> x);

inline constexpr std::string_view kModelFormat = "phosforge-model/1";

struct ModelMetadata {
  TrainConfig train_config;
  std::string data_fingerprint;
  std::string created;       // empty unless the caller stamps it
  std::string kernel_level;  // simd level used for training
  /// A held-out heat recorded at training time, handy for smoke checks.
  std::optional<HeatRecord> example;
};

/// A trained network plus everything needed to serve it.
struct ModelArtifact {
  Parameters params;
  NormParams norm;
  ModelMetadata metadata;
};

struct Prediction {
  double p_wtpct = 0.0;
  std::vector<FeatureId> out_of_range;  // features outside the fitted range

  bool out_of_range_warning() const { return !out_of_range.empty(); }
};

/// Normalise, run the network, map the output back to wt%.
Prediction predict(const ModelArtifact& artifact, const HeatRecord& record);

}  // namespace phosforge::nn
