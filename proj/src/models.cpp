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

#include "phosforge/models.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "phosforge/error.hpp"

namespace phosforge {

using nlohmann::json;

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

template <typename T>
T field(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw FormatError(std::string("model document lacks '") + key + "'");
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("model field '") + key + "': " + e.what());
  }
}

json record_to_json(const HeatRecord& r) {
  json features = json::object();
  for (const auto& f : feature_table()) {
    if (const auto v = r.get(f.id)) features[std::string(f.name)] = *v;
  }
  json out{{"heat_id", r.heat_id}, {"features", features}};
  out["endpoint_p"] = r.endpoint_p ? json(*r.endpoint_p) : json(nullptr);
  return out;
}

HeatRecord record_from_json(const json& j) {
  HeatRecord r;
  r.heat_id = field<std::string>(j, "heat_id");
  const json features = field<json>(j, "features");
  for (const auto& [name, value] : features.items()) {
    const auto id = feature_by_name(name);
    if (!id) throw FormatError("unknown feature '" + name + "' in model document");
    r.set(*id, value.get<double>());
  }
  if (j.contains("endpoint_p") && !j["endpoint_p"].is_null()) {
    r.endpoint_p = j["endpoint_p"].get<double>();
  }
  return r;
}

json train_config_to_json(const nn::TrainConfig& c) {
  json out{
      {"epochs", c.epochs},
      {"batch_size", c.batch_size},
      {"learning_rate", c.adam.learning_rate},
      {"beta1", c.adam.beta1},
      {"beta2", c.adam.beta2},
      {"epsilon", c.adam.epsilon},
      {"seed", c.seed},
  };
  if (c.early_stopping) {
    out["early_stopping"] = {{"patience", c.early_stopping->patience},
                             {"restore_best", c.early_stopping->restore_best}};
  } else {
    out["early_stopping"] = nullptr;
  }
  return out;
}

nn::TrainConfig train_config_from_json(const json& j) {
  nn::TrainConfig c;
  c.epochs = field<std::size_t>(j, "epochs");
  c.batch_size = field<std::size_t>(j, "batch_size");
  c.adam.learning_rate = field<double>(j, "learning_rate");
  c.adam.beta1 = field<double>(j, "beta1");
  c.adam.beta2 = field<double>(j, "beta2");
  c.adam.epsilon = field<double>(j, "epsilon");
  c.seed = field<std::uint64_t>(j, "seed");
  if (j.contains("early_stopping") && !j["early_stopping"].is_null()) {
    const json& es = j["early_stopping"];
    c.early_stopping = nn::EarlyStopping{field<std::size_t>(es, "patience"),
                                         field<bool>(es, "restore_best")};
  }
  return c;
}

json network_to_json(const nn::ModelArtifact& a) {
  const auto& arch = a.params.architecture();
  json layers = json::array();
  for (std::size_t l = 0; l < a.params.layer_count(); ++l) {
    const auto layer = a.params.layer(l);
    layers.push_back({
        {"fan_in", layer.fan_in},
        {"fan_out", layer.fan_out},
        {"weights", std::vector<double>(layer.weights.begin(), layer.weights.end())},
        {"bias", std::vector<double>(layer.bias.begin(), layer.bias.end())},
    });
  }
  json meta{
      {"train_config", train_config_to_json(a.metadata.train_config)},
      {"data_fingerprint", a.metadata.data_fingerprint},
      {"kernel_level", a.metadata.kernel_level},
  };
  if (!a.metadata.created.empty()) meta["created"] = a.metadata.created;
  meta["example"] = a.metadata.example ? record_to_json(*a.metadata.example) : json(nullptr);
  return {
      {"format", nn::kModelFormat},
      {"architecture", {{"widths", arch.widths()}, {"activation", "sigmoid"}}},
      {"layers", layers},
      {"normalization", norm_to_json(a.norm)},
      {"metadata", meta},
  };
}

nn::ModelArtifact network_from_json(const json& j) {
  const json arch_j = field<json>(j, "architecture");
  const auto widths = field<std::vector<std::size_t>>(arch_j, "widths");
  if (field<std::string>(arch_j, "activation") != "sigmoid") {
    throw FormatError("unsupported activation in model document");
  }
  if (widths.size() < 3) throw FormatError("architecture needs input, hidden and output widths");
  nn::Architecture arch{widths.front(),
                        std::vector<std::size_t>(widths.begin() + 1, widths.end() - 1),
                        widths.back()};
  try {
    arch.validate();
  } catch (const DataError& e) {
    throw FormatError(std::string("invalid architecture: ") + e.what());
  }
  if (arch.input_dim != kFeatureCount || arch.output_dim != 1) {
    throw FormatError("network must map 12 features to one output, got " + arch.to_string());
  }

  nn::ModelArtifact a{nn::Parameters(arch), norm_from_json(field<json>(j, "normalization")), {}};
  const json layers = field<json>(j, "layers");
  if (!layers.is_array() || layers.size() != a.params.layer_count()) {
    throw FormatError("layer count does not match architecture");
  }
  for (std::size_t l = 0; l < a.params.layer_count(); ++l) {
    auto layer = a.params.layer(l);
    const auto weights = field<std::vector<double>>(layers[l], "weights");
    const auto bias = field<std::vector<double>>(layers[l], "bias");
    if (field<std::size_t>(layers[l], "fan_in") != layer.fan_in ||
        field<std::size_t>(layers[l], "fan_out") != layer.fan_out ||
        weights.size() != layer.weights.size() || bias.size() != layer.bias.size()) {
      throw FormatError("layer " + std::to_string(l) + " shape does not match architecture");
    }
    std::copy(weights.begin(), weights.end(), layer.weights.begin());
    std::copy(bias.begin(), bias.end(), layer.bias.begin());
  }
  if (!a.params.all_finite()) throw FormatError("model parameters contain non-finite values");

  const json meta = field<json>(j, "metadata");
  a.metadata.train_config = train_config_from_json(field<json>(meta, "train_config"));
  a.metadata.data_fingerprint = field<std::string>(meta, "data_fingerprint");
  a.metadata.kernel_level = field<std::string>(meta, "kernel_level");
  if (meta.contains("created")) a.metadata.created = field<std::string>(meta, "created");
  if (meta.contains("example") && !meta["example"].is_null()) {
    a.metadata.example = record_from_json(meta["example"]);
  }
  return a;
}

json forest_config_to_json(const baselines::ForestConfig& c) {
  return {
      {"n_trees", c.n_trees},
      {"max_depth", c.max_depth ? json(*c.max_depth) : json(nullptr)},
      {"min_samples_leaf", c.min_samples_leaf},
      {"min_samples_split", c.min_samples_split},
      {"feature_fraction", c.feature_fraction},
      {"bootstrap", c.bootstrap},
      {"seed", c.seed},
  };
}

baselines::ForestConfig forest_config_from_json(const json& j) {
  baselines::ForestConfig c;
  c.n_trees = field<std::size_t>(j, "n_trees");
  if (!j.at("max_depth").is_null()) c.max_depth = field<std::size_t>(j, "max_depth");
  c.min_samples_leaf = field<std::size_t>(j, "min_samples_leaf");
  c.min_samples_split = field<std::size_t>(j, "min_samples_split");
  c.feature_fraction = field<double>(j, "feature_fraction");
  c.bootstrap = field<bool>(j, "bootstrap");
  c.seed = field<std::uint64_t>(j, "seed");
  return c;
}

json forest_to_json(const ForestArtifact& a) {
  json trees = json::array();
  for (const auto& t : a.forest.trees) {
    json nodes = json::array();
    for (const auto& n : t.nodes) {
      if (n.is_leaf()) {
        nodes.push_back(json::array({n.value}));
      } else {
        nodes.push_back(json::array({n.feature, n.threshold, n.left, n.right}));
      }
    }
    trees.push_back(std::move(nodes));
  }
  return {
      {"format", kForestFormat},
      {"dim", a.forest.dim},
      {"config", forest_config_to_json(a.config)},
      {"trees", trees},
      {"normalization", norm_to_json(a.norm)},
      {"data_fingerprint", a.data_fingerprint},
  };
}

ForestArtifact forest_from_json(const json& j) {
  ForestArtifact a;
  a.forest.dim = field<std::size_t>(j, "dim");
  a.config = forest_config_from_json(field<json>(j, "config"));
  a.norm = norm_from_json(field<json>(j, "normalization"));
  a.data_fingerprint = field<std::string>(j, "data_fingerprint");
  for (const auto& tj : field<json>(j, "trees")) {
    baselines::Tree t;
    for (const auto& nj : tj) {
      baselines::TreeNode n;
      if (nj.size() == 1) {
        n.value = nj[0].get<double>();
      } else if (nj.size() == 4) {
        n.feature = nj[0].get<std::uint32_t>();
        n.threshold = nj[1].get<double>();
        n.left = nj[2].get<std::uint32_t>();
        n.right = nj[3].get<std::uint32_t>();
      } else {
        throw FormatError("malformed tree node");
      }
      t.nodes.push_back(n);
    }
    // Children always follow their parent, which also rules out cycles.
    for (std::size_t i = 0; i < t.nodes.size(); ++i) {
      const auto& n = t.nodes[i];
      if (!n.is_leaf() && (n.feature >= a.forest.dim || n.left <= i || n.right <= i ||
                           n.left >= t.nodes.size() || n.right >= t.nodes.size())) {
        throw FormatError("tree node references out of range");
      }
    }
    if (t.nodes.empty()) throw FormatError("empty tree in forest document");
    a.forest.trees.push_back(std::move(t));
  }
  if (a.forest.trees.empty()) throw FormatError("forest document has no trees");
  return a;
}

json svr_to_json(const SvrArtifact& a) {
  return {
      {"format", kSvrFormat},
      {"dim", a.model.dim},
      {"config",
       {{"C", a.config.C},
        {"gamma", a.config.gamma},
        {"epsilon_tube", a.config.epsilon_tube},
        {"tol", a.config.tol},
        {"max_passes", a.config.max_passes}}},
      {"support_vectors", a.model.support_vectors},
      {"coefficients", a.model.coefficients},
      {"bias", a.model.bias},
      {"gamma", a.model.gamma},
      {"normalization", norm_to_json(a.norm)},
      {"data_fingerprint", a.data_fingerprint},
  };
}

SvrArtifact svr_from_json(const json& j) {
  SvrArtifact a;
  const json c = field<json>(j, "config");
  a.config.C = field<double>(c, "C");
  a.config.gamma = field<double>(c, "gamma");
  a.config.epsilon_tube = field<double>(c, "epsilon_tube");
  a.config.tol = field<double>(c, "tol");
  a.config.max_passes = field<std::size_t>(c, "max_passes");
  a.model.dim = field<std::size_t>(j, "dim");
  a.model.support_vectors = field<std::vector<double>>(j, "support_vectors");
  a.model.coefficients = field<std::vector<double>>(j, "coefficients");
  a.model.bias = field<double>(j, "bias");
  a.model.gamma = field<double>(j, "gamma");
  a.norm = norm_from_json(field<json>(j, "normalization"));
  a.data_fingerprint = field<std::string>(j, "data_fingerprint");
  if (a.model.support_vectors.size() != a.model.coefficients.size() * a.model.dim) {
    throw FormatError("support vector block does not match coefficient count");
  }
  return a;
}

}  // namespace

std::string_view model_kind(const AnyModel& model) {
  return std::visit(Overloaded{
                        [](const nn::ModelArtifact&) { return std::string_view("network"); },
                        [](const ForestArtifact&) { return std::string_view("forest"); },
                        [](const SvrArtifact&) { return std::string_view("svr"); },
                    },
                    model);
}

const NormParams& norm_params(const AnyModel& model) {
  return std::visit([](const auto& m) -> const NormParams& { return m.norm; }, model);
}

double predict_normalized(const AnyModel& model, std::span<const double> x) {
  return std::visit(
      Overloaded{
          [&](const nn::ModelArtifact& m) { return nn::predict_normalized(m.params, x); },
          [&](const ForestArtifact& m) { return baselines::rf_predict(m.forest, x); },
          [&](const SvrArtifact& m) { return baselines::svr_predict(m.model, x); },
      },
      model);
}

nn::Prediction predict(const AnyModel& model, const HeatRecord& record) {
  if (const auto* net = std::get_if<nn::ModelArtifact>(&model)) return nn::predict(*net, record);
  const NormParams& norm = norm_params(model);
  const NormalizedRecord n = normalize(record, norm);
  nn::Prediction out;
  out.p_wtpct = norm.denormalize_target(predict_normalized(model, n.z));
  out.out_of_range = n.out_of_range;
  return out;
}

json norm_to_json(const NormParams& norm) {
  json features = json::array();
  for (const auto& f : feature_table()) {
    const Range& r = norm.features[index_of(f.id)];
    features.push_back({{"name", f.name}, {"min", r.min}, {"max", r.max}});
  }
  return {
      {"features", features},
      {"target", {{"name", "endpoint_p"}, {"min", norm.target.min}, {"max", norm.target.max}}},
      {"fitted_on", norm.fitted_on},
  };
}

NormParams norm_from_json(const json& j) {
  NormParams norm;
  const json features = field<json>(j, "features");
  if (!features.is_array() || features.size() != kFeatureCount) {
    throw FormatError("normalization must list all 12 features");
  }
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    const auto name = field<std::string>(features[i], "name");
    if (name != feature_table()[i].name) {
      throw FormatError("normalization feature " + std::to_string(i) + " is '" + name +
                        "', expected '" + std::string(feature_table()[i].name) + "'");
    }
    norm.features[i] = {field<double>(features[i], "min"), field<double>(features[i], "max")};
    if (!(norm.features[i].max > norm.features[i].min)) {
      throw FormatError("normalization range for " + name + " is empty");
    }
  }
  const json target = field<json>(j, "target");
  norm.target = {field<double>(target, "min"), field<double>(target, "max")};
  if (!(norm.target.max > norm.target.min)) throw FormatError("target range is empty");
  norm.fitted_on = field<std::string>(j, "fitted_on");
  return norm;
}

json to_json(const AnyModel& model) {
  return std::visit(Overloaded{
                        [](const nn::ModelArtifact& m) { return network_to_json(m); },
                        [](const ForestArtifact& m) { return forest_to_json(m); },
                        [](const SvrArtifact& m) { return svr_to_json(m); },
                    },
                    model);
}

AnyModel model_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("model document must be a JSON object");
  const auto format = field<std::string>(j, "format");
  try {
    if (format == nn::kModelFormat) return network_from_json(j);
    if (format == kForestFormat) return forest_from_json(j);
    if (format == kSvrFormat) return svr_from_json(j);
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed model document: ") + e.what());
  }
  throw FormatError("unsupported model format '" + format + "'");
}

void save_model(const AnyModel& model, std::ostream& out) {
  out << to_json(model).dump(1) << '\n';
  if (!out) throw Error("failed writing model document");
}

AnyModel load_model(std::istream& in) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("model document is not valid JSON: ") + e.what());
  }
  return model_from_json(j);
}

void save_model_file(const AnyModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  save_model(model, out);
}

AnyModel load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open model file '" + path + "'");
  return load_model(in);
}

}  // namespace phosforge
