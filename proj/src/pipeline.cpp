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


#include "phosforge/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <ostream>

#include "phosforge/error.hpp"
#include "phosforge/preprocess.hpp"
#include "phosforge/simd/kernels.hpp"

namespace phosforge::pipeline {
namespace {

std::string shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

ModelFamily parse_family(std::string_view name) {
  if (name == "ann") return ModelFamily::kNetwork;
  if (name == "rf") return ModelFamily::kForest;
  if (name == "svr") return ModelFamily::kSvr;
  throw DataError("unknown model family '" + std::string(name) + "' (expected ann, rf or svr)");
}

std::string_view to_string(ModelFamily family) {
  switch (family) {
    case ModelFamily::kNetwork:
      return "ann";
    case ModelFamily::kForest:
      return "rf";
    case ModelFamily::kSvr:
      return "svr";
  }
  return "?";
}

TrainOutcome train_model(const Dataset& train, const Dataset& val, const TrainOptions& options,
                         std::optional<HeatRecord> example) {
  const NormParams norm = fit_minmax(train);
  const NormalizedDataset train_n = normalize(train, norm);
  const std::string data_fingerprint = norm.fitted_on;

  switch (options.family) {
    case ModelFamily::kNetwork: {
      std::optional<NormalizedDataset> val_n;
      if (val.size() > 0) val_n = normalize(val, norm);
      nn::TrainResult r = nn::train(train_n.samples, val_n ? &val_n->samples : nullptr,
                                    options.architecture, options.network);
      nn::ModelMetadata meta{options.network, data_fingerprint, options.created,
                             std::string(simd::to_string(simd::active_level())),
                             std::move(example)};
      return {nn::ModelArtifact{std::move(r.params), norm, std::move(meta)}, std::move(r.report),
              std::nullopt};
    }
    case ModelFamily::kForest: {
      baselines::Forest forest = baselines::rf_train(train_n.samples, options.forest);
      return {ForestArtifact{std::move(forest), options.forest, norm, data_fingerprint},
              std::nullopt, std::nullopt};
    }
    case ModelFamily::kSvr: {
      baselines::SvrResult r = baselines::svr_train(train_n.samples, options.svr);
      return {SvrArtifact{std::move(r.model), options.svr, norm, data_fingerprint}, std::nullopt,
              std::move(r.report)};
    }
  }
  throw Error("unreachable model family");
}

void write_train_report_csv(const TrainOutcome& outcome, std::ostream& out) {
  if (outcome.network_report) {
    const nn::TrainReport& r = *outcome.network_report;
    out << "epoch,train_loss,val_loss,best\n";
    for (std::size_t e = 0; e < r.train_loss.size(); ++e) {
      out << e + 1 << ',' << shortest(r.train_loss[e]) << ','
          << (e < r.val_loss.size() ? shortest(r.val_loss[e]) : std::string()) << ','
          << (e == r.best_epoch ? 1 : 0) << '\n';
    }
  } else if (outcome.svr_report) {
    const baselines::SvrTrainReport& r = *outcome.svr_report;
    out << "converged,final_violation,iterations,support_vectors,final_objective\n";
    out << (r.converged ? 1 : 0) << ',' << shortest(r.final_violation) << ',' << r.iterations
        << ',' << std::get<SvrArtifact>(outcome.model).model.support_count() << ','
        << (r.objective_trace.empty() ? std::string() : shortest(r.objective_trace.back()))
        << '\n';
  } else {
    const auto& f = std::get<ForestArtifact>(outcome.model).forest;
    std::size_t nodes = 0;
    std::size_t depth = 0;
    for (const auto& t : f.trees) {
      nodes += t.nodes.size();
      depth = std::max(depth, t.depth());
    }
    out << "trees,total_nodes,max_depth\n" << f.trees.size() << ',' << nodes << ',' << depth
        << '\n';
  }
  if (!out) throw Error("failed writing training report");
}

std::vector<FoldResult> cross_validate(const Dataset& dataset, TrainOptions options,
                                       std::size_t folds, std::uint64_t seed,
                                       std::span<const double> thresholds) {
  const std::size_t n = dataset.size();
  if (folds < 2) throw DataError("cross-validation needs at least 2 folds");
  if (n < 2 * folds) throw DataError("too few records for " + std::to_string(folds) + " folds");
  options.network.early_stopping.reset();

  const std::vector<std::size_t> order = shuffled_indices(n, seed);
  std::vector<FoldResult> out;
  for (std::size_t k = 0; k < folds; ++k) {
    const std::size_t begin = k * n / folds;
    const std::size_t end = (k + 1) * n / folds;
    Dataset train;
    Dataset test;
    for (std::size_t pos = 0; pos < n; ++pos) {
      const std::size_t i = order[pos];
      (pos >= begin && pos < end ? test : train).add(dataset[i], dataset.provenance(i));
    }
    const TrainOutcome outcome = train_model(train, Dataset{}, options);
    out.push_back({k, train.size(), metrics::evaluate(outcome.model, test, thresholds)});
  }
  return out;
}

}  // namespace phosforge::pipeline
