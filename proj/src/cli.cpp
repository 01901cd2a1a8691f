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


#include "phosforge/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "phosforge/error.hpp"
#include "phosforge/ingest.hpp"
#include "phosforge/metallurgy.hpp"
#include "phosforge/metrics.hpp"
#include "phosforge/models.hpp"
#include "phosforge/pipeline.hpp"
#include "phosforge/preprocess.hpp"
#include "phosforge/service.hpp"
#include "phosforge/stats.hpp"

namespace phosforge::app {
namespace {

namespace fs = std::filesystem;

class UsageError : public Error {
 public:
  using Error::Error;
};

std::string shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

double parse_double(const std::string& text, const std::string& what) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw UsageError(what + ": '" + text + "' is not a number");
  }
  return v;
}

std::vector<double> parse_doubles(const std::string& text, const std::string& what) {
  std::vector<double> out;
  for (const auto& item : split_list(text)) out.push_back(parse_double(item, what));
  if (out.empty()) throw UsageError(what + " is empty");
  return out;
}

std::vector<std::size_t> parse_widths(const std::string& text) {
  std::vector<std::size_t> out;
  for (const auto& item : split_list(text)) {
    std::size_t w = 0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(), w);
    if (res.ec != std::errc() || res.ptr != item.data() + item.size() || w == 0) {
      throw UsageError("--arch: '" + item + "' is not a positive layer width");
    }
    out.push_back(w);
  }
  if (out.empty()) throw UsageError("--arch needs at least one hidden layer width");
  return out;
}

SplitSpec parse_split(const std::string& text, std::uint64_t seed) {
  const auto parts = parse_doubles(text, "--split");
  if (parts.size() != 3) throw UsageError("--split expects train,val,test such as 60,20,20");
  const double total = parts[0] + parts[1] + parts[2];
  if (!(total > 0.0)) throw UsageError("--split parts must be positive");
  return {parts[0] / total, parts[1] / total, parts[2] / total, seed};
}

std::pair<FeatureId, double> parse_assignment(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw UsageError("expected name=value, got '" + text + "'");
  const auto id = feature_by_name(text.substr(0, eq));
  if (!id) throw UsageError("unknown feature '" + text.substr(0, eq) + "'");
  return {*id, parse_double(text.substr(eq + 1), text.substr(0, eq))};
}

Dataset read_dataset(const std::string& path, bool skip_invalid, std::ostream& err) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  IngestResult r = read_csv(in);
  for (const auto& e : r.errors) {
    err << path << ": row " << e.row << (e.column.empty() ? "" : " column " + e.column) << ": "
        << e.reason << '\n';
  }
  if (!r.errors.empty() && !skip_invalid) {
    throw DataError(std::to_string(r.errors.size()) +
                    " invalid rows; fix them or pass --skip-invalid");
  }
  return std::move(r.dataset);
}

void write_dataset(const Dataset& dataset, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  write_csv(dataset, out);
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  return out;
}

std::string default_model_path() {
  const char* env = std::getenv("PHOSFORGE_MODEL");
  return env ? env : "";
}

std::string require_model_path(const std::string& given) {
  if (!given.empty()) return given;
  throw UsageError("no model given; pass --model or set PHOSFORGE_MODEL");
}

struct TrainArgs {
  std::string family = "ann";
  std::string arch = "128,128,128,64";
  std::size_t epochs = 500;
  std::size_t batch = 50;
  double lr = 0.001;
  std::size_t patience = 0;
  std::uint64_t seed = 1;
  std::size_t trees = 100;
  std::size_t max_depth = 0;
  std::size_t min_leaf = 1;
  double feature_fraction = 1.0;
  double svr_c = 1.0;
  double gamma = 1.0 / 12.0;
  double epsilon_tube = 0.01;
  std::string created;

  void add_to(CLI::App* cmd, const std::string& family_flags) {
    cmd->add_option(family_flags, family, "ann, rf or svr")
        ->check(CLI::IsMember({"ann", "rf", "svr"}))
        ->capture_default_str();
    cmd->add_option("--arch", arch, "hidden layer widths, comma separated")->capture_default_str();
    cmd->add_option("--epochs", epochs)->capture_default_str();
    cmd->add_option("--batch", batch)->capture_default_str();
    cmd->add_option("--lr", lr, "Adam learning rate")->capture_default_str();
    cmd->add_option("--patience", patience, "early-stopping patience in epochs; 0 disables");
    cmd->add_option("--seed", seed)->capture_default_str();
    cmd->add_option("--trees", trees, "forest size")->capture_default_str();
    cmd->add_option("--max-depth", max_depth, "forest tree depth limit; 0 is unlimited");
    cmd->add_option("--min-leaf", min_leaf)->capture_default_str();
    cmd->add_option("--feature-fraction", feature_fraction)->capture_default_str();
    cmd->add_option("--svr-c", svr_c)->capture_default_str();
    cmd->add_option("--gamma", gamma, "RBF kernel width")->capture_default_str();
    cmd->add_option("--epsilon-tube", epsilon_tube)->capture_default_str();
    cmd->add_option("--created", created, "timestamp stored in network metadata");
  }

  pipeline::TrainOptions options() const {
    pipeline::TrainOptions o;
    o.family = pipeline::parse_family(family);
    o.architecture.hidden = parse_widths(arch);
    o.network.epochs = epochs;
    o.network.batch_size = batch;
    o.network.adam.learning_rate = lr;
    o.network.seed = seed;
    if (patience > 0) o.network.early_stopping = nn::EarlyStopping{patience, true};
    o.forest.n_trees = trees;
    if (max_depth > 0) o.forest.max_depth = max_depth;
    o.forest.min_samples_leaf = min_leaf;
    o.forest.feature_fraction = feature_fraction;
    o.forest.seed = seed;
    o.svr.C = svr_c;
    o.svr.gamma = gamma;
    o.svr.epsilon_tube = epsilon_tube;
    o.created = created;
    return o;
  }
};

nlohmann::json features_json(const HeatRecord& record) {
  nlohmann::json features = nlohmann::json::object();
  for (const auto& f : feature_table()) {
    if (const auto v = record.get(f.id)) features[std::string(f.name)] = *v;
  }
  return {{"features", features}};
}

// --- subcommands --------------------------------------------------------------

struct GenerateArgs {
  std::string output;
  SynthConfig config;
  std::vector<std::string> coefficients;
};

int run_generate(const GenerateArgs& a, std::ostream& out) {
  SynthConfig config = a.config;
  for (const auto& c : a.coefficients) {
    const auto [id, value] = parse_assignment(c);
    config.coefficient_overrides[id] = value;
  }
  const Dataset data = generate_synthetic(config);
  write_dataset(data, a.output);
  out << "wrote " << data.size() << " synthetic heats to " << a.output << '\n';
  return 0;
}

struct IoArgs {
  std::string input;
  std::string output;
  bool skip_invalid = false;
};

int run_clean(const IoArgs& a, std::ostream& out, std::ostream& err) {
  const Dataset data = read_dataset(a.input, a.skip_invalid, err);
  const CleanResult r = remove_outliers(data);
  write_dataset(r.cleaned, a.output);
  out << "kept " << r.cleaned.size() << " of " << data.size() << " heats (" << r.removed_count
      << " outliers removed)\n";
  return 0;
}

int run_analyze(const IoArgs& a, std::ostream& out, std::ostream& err) {
  const stats::CorrelationReport report =
      stats::correlation_report(read_dataset(a.input, a.skip_invalid, err));
  if (a.output.empty()) {
    stats::write_report_csv(report, out);
  } else {
    auto file = open_output(a.output);
    stats::write_report_csv(report, file);
  }
  return 0;
}

struct TrainCommand {
  IoArgs io;
  TrainArgs train;
  std::string split = "60,20,20";
};

int run_train(const TrainCommand& a, std::ostream& out, std::ostream& err) {
  const pipeline::TrainOptions options = a.train.options();
  const SplitSpec spec = parse_split(a.split, a.train.seed);
  const Dataset data = read_dataset(a.io.input, a.io.skip_invalid, err);
  const SplitResult parts = split(data, spec);

  const fs::path dir(a.io.output);
  fs::create_directories(dir);
  write_dataset(parts.train, dir / "train.csv");
  if (parts.val.size() > 0) write_dataset(parts.val, dir / "val.csv");
  write_dataset(parts.test, dir / "test.csv");

  const pipeline::TrainOutcome outcome =
      pipeline::train_model(parts.train, parts.val, options, parts.test[0]);
  save_model_file(outcome.model, (dir / "model.json").string());
  auto report = open_output(dir / "train_report.csv");
  pipeline::write_train_report_csv(outcome, report);

  out << "trained " << pipeline::to_string(options.family) << " on " << parts.train.size()
      << " heats (val " << parts.val.size() << ", test " << parts.test.size() << "); wrote "
      << (dir / "model.json").string() << '\n';
  if (outcome.svr_report && !outcome.svr_report->converged) {
    err << "warning: SVR stopped before convergence, KKT violation "
        << shortest(outcome.svr_report->final_violation) << '\n';
  }
  return 0;
}

struct EvaluateCommand {
  IoArgs io;
  std::string model = default_model_path();
  std::string thresholds = "0.001,0.002,0.003,0.004";
  std::size_t folds = 0;
  TrainArgs train;
};

void write_reports(const std::vector<metrics::EvaluationReport>& reports, const std::string& dir,
                   std::ostream& out) {
  nlohmann::json doc;
  if (reports.size() == 1) {
    doc = metrics::report_to_json(reports.front());
  } else {
    doc = nlohmann::json::array();
    for (const auto& r : reports) doc.push_back(metrics::report_to_json(r));
  }
  if (dir.empty()) {
    out << doc.dump(1) << '\n';
    return;
  }
  fs::create_directories(dir);
  auto json_file = open_output(fs::path(dir) / "evaluation.json");
  json_file << doc.dump(1) << '\n';
  auto csv_file = open_output(fs::path(dir) / "evaluation.csv");
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (reports.size() > 1) csv_file << "# fold " << i << '\n';
    metrics::write_report_csv(reports[i], csv_file);
  }
  out << "wrote " << (fs::path(dir) / "evaluation.json").string() << " and evaluation.csv\n";
}

int run_evaluate(const EvaluateCommand& a, std::ostream& out, std::ostream& err) {
  const std::vector<double> thresholds = parse_doubles(a.thresholds, "--thresholds");
  const Dataset data = read_dataset(a.io.input, a.io.skip_invalid, err);
  std::vector<metrics::EvaluationReport> reports;
  if (a.folds > 0) {
    for (auto& f : pipeline::cross_validate(data, a.train.options(), a.folds, a.train.seed,
                                            thresholds)) {
      reports.push_back(std::move(f.report));
    }
  } else {
    const AnyModel model = load_model_file(require_model_path(a.model));
    reports.push_back(metrics::evaluate(model, data, thresholds));
  }
  write_reports(reports, a.io.output, out);
  return 0;
}

struct PredictCommand {
  std::string model = default_model_path();
  std::string input;
  bool example = false;
  std::vector<std::string> set;
  bool skip_invalid = false;
};

int run_predict(const PredictCommand& a, std::ostream& out, std::ostream& err) {
  const service::Service svc(load_model_file(require_model_path(a.model)));
  if (!a.input.empty()) {
    if (a.example || !a.set.empty()) throw UsageError("--input excludes --example and --set");
    const Dataset data = read_dataset(a.input, a.skip_invalid, err);
    out << "heat_id,p_wtpct,p_ppm,out_of_range\n";
    for (const auto& record : data) {
      const nn::Prediction p = predict(svc.model(), record);
      std::string names;
      for (FeatureId id : p.out_of_range) {
        names += (names.empty() ? "" : ";") + std::string(feature_name(id));
      }
      out << record.heat_id << ',' << shortest(p.p_wtpct) << ','
          << shortest(p.p_wtpct * kPpmPerWtPct) << ',' << names << '\n';
    }
    return 0;
  }

  HeatRecord record;
  if (a.example) {
    const auto* net = std::get_if<nn::ModelArtifact>(&svc.model());
    if (!net || !net->metadata.example) throw DataError("model carries no example heat");
    record = *net->metadata.example;
  }
  for (const auto& s : a.set) {
    const auto [id, value] = parse_assignment(s);
    record.set(id, value);
  }
  if (!a.example && a.set.empty()) throw UsageError("give --input, --example or --set");
  const service::Response r = svc.predict(features_json(record).dump());
  if (r.status != 200) {
    err << r.body << '\n';
    return 1;
  }
  out << r.body << '\n';
  return 0;
}

struct MetallurgyCommand {
  metallurgy::SlagMetalState state;
  double po4 = -1.0;
  double l_p = 0.0;
  double capacity = 0.0;
};

int run_partition(const MetallurgyCommand& a, std::ostream& out) {
  const auto r = metallurgy::partition_coefficient(a.state);
  out << "L_p " << shortest(r.l_p) << '\n';
  if (r.out_of_band) out << "note: outside the typical band [5, 15]\n";
  return 0;
}

int run_capacity(const MetallurgyCommand& a, std::ostream& out) {
  metallurgy::SlagMetalState s = a.state;
  if (a.po4 >= 0.0) s.pct_po4_slag = a.po4;
  out << "C_PO4 " << shortest(metallurgy::phosphate_capacity_gas(s)) << '\n';
  if (const auto ionic = metallurgy::phosphate_capacity_ionic(s)) {
    out << "C_PO4_ionic " << shortest(*ionic) << '\n';
  }
  return 0;
}

}  // namespace

int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("End-point phosphorus prediction toolkit for scrap-based EAF steelmaking",
               "phosforge");
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* gen_cmd = app.add_subcommand("generate-data", "write a synthetic heat dataset");
  gen_cmd->add_option("-o,--output", gen.output)->required();
  gen_cmd->add_option("--n", gen.config.n_records, "number of heats")->capture_default_str();
  gen_cmd->add_option("--noise-sd", gen.config.noise_sd, "wt% P")->capture_default_str();
  gen_cmd->add_option("--outlier-fraction", gen.config.outlier_fraction)->capture_default_str();
  gen_cmd->add_option("--interaction", gen.config.interaction_strength)->capture_default_str();
  gen_cmd->add_option("--coef", gen.coefficients, "latent coefficient override, name=value");
  gen_cmd->add_option("--seed", gen.config.seed)->capture_default_str();

  IoArgs clean;
  auto* clean_cmd = app.add_subcommand("clean", "remove box-plot outliers");
  clean_cmd->add_option("-i,--input", clean.input)->required();
  clean_cmd->add_option("-o,--output", clean.output)->required();
  clean_cmd->add_flag("--skip-invalid", clean.skip_invalid, "drop unparsable rows");

  IoArgs analyze;
  auto* analyze_cmd = app.add_subcommand("analyze", "Pearson correlations against endpoint P");
  analyze_cmd->add_option("-i,--input", analyze.input)->required();
  analyze_cmd->add_option("-o,--output", analyze.output, "CSV path; stdout when omitted");
  analyze_cmd->add_flag("--skip-invalid", analyze.skip_invalid);

  TrainCommand train;
  auto* train_cmd = app.add_subcommand("train", "split, normalise and train a model");
  train_cmd->add_option("-i,--input", train.io.input)->required();
  train_cmd->add_option("-o,--output", train.io.output, "output directory")->required();
  train_cmd->add_option("--split", train.split, "train,val,test percentages")
      ->capture_default_str();
  train_cmd->add_flag("--skip-invalid", train.io.skip_invalid);
  train.train.add_to(train_cmd, "--model,--model-type");

  EvaluateCommand eval;
  auto* eval_cmd = app.add_subcommand("evaluate", "score a model on a labelled dataset");
  eval_cmd->add_option("-i,--input", eval.io.input)->required();
  eval_cmd->add_option("-m,--model", eval.model, "model file; defaults to $PHOSFORGE_MODEL");
  eval_cmd->add_option("-o,--output", eval.io.output, "report directory; stdout when omitted");
  eval_cmd->add_option("--thresholds", eval.thresholds, "hit-rate thresholds in wt%")
      ->capture_default_str();
  eval_cmd->add_option("--folds", eval.folds, "k-fold cross-validation instead of --model");
  eval_cmd->add_flag("--skip-invalid", eval.io.skip_invalid);
  eval.train.add_to(eval_cmd, "--model-type");

  PredictCommand pred;
  auto* pred_cmd = app.add_subcommand("predict", "predict endpoint P");
  pred_cmd->add_option("-m,--model", pred.model, "model file; defaults to $PHOSFORGE_MODEL");
  pred_cmd->add_option("-i,--input", pred.input, "CSV of heats");
  pred_cmd->add_flag("--example", pred.example, "use the heat recorded in the model file");
  pred_cmd->add_option("--set", pred.set, "feature value, name=value");
  pred_cmd->add_flag("--skip-invalid", pred.skip_invalid);

  MetallurgyCommand met;
  auto* met_cmd = app.add_subcommand("metallurgy", "slag/metal dephosphorisation quantities");
  met_cmd->require_subcommand(1);
  auto* part_cmd = met_cmd->add_subcommand("partition", "L_p = (%P) / [%P]");
  part_cmd->add_option("--slag-p", met.state.pct_p_slag, "wt% P in slag")->required();
  part_cmd->add_option("--metal-p", met.state.pct_p_metal, "wt% P in metal")->required();
  auto* cap_cmd = met_cmd->add_subcommand("capacity", "phosphate capacity from gas pressures");
  cap_cmd->add_option("--po4", met.po4, "wt% PO4 in slag")->required();
  cap_cmd->add_option("--p-p2", met.state.p_p2, "atm")->required();
  cap_cmd->add_option("--p-o2", met.state.p_o2, "atm")->required();
  cap_cmd->add_option("--k2", met.state.K2);
  cap_cmd->add_option("--a-o", met.state.a_o2minus, "oxide-ion activity");
  cap_cmd->add_option("--gamma0", met.state.gamma0_po4);
  auto* c_lp_cmd = met_cmd->add_subcommand("capacity-from-lp", "C = L_p k_p / (f_p P_O2^(5/4))");
  c_lp_cmd->add_option("--lp", met.l_p)->required();
  c_lp_cmd->add_option("--k-p", met.state.k_p)->required();
  c_lp_cmd->add_option("--f-p", met.state.f_p)->capture_default_str();
  c_lp_cmd->add_option("--p-o2", met.state.p_o2, "atm")->required();
  auto* lp_c_cmd = met_cmd->add_subcommand("lp-from-capacity", "inverse of capacity-from-lp");
  lp_c_cmd->add_option("--capacity", met.capacity)->required();
  lp_c_cmd->add_option("--k-p", met.state.k_p)->required();
  lp_c_cmd->add_option("--f-p", met.state.f_p)->capture_default_str();
  lp_c_cmd->add_option("--p-o2", met.state.p_o2, "atm")->required();

  std::string serve_model = default_model_path();
  std::string host = "127.0.0.1";
  int port = 8080;
  auto* serve_cmd = app.add_subcommand("serve", "HTTP prediction service");
  serve_cmd->add_option("-m,--model", serve_model, "model file; defaults to $PHOSFORGE_MODEL");
  serve_cmd->add_option("--host", host)->capture_default_str();
  serve_cmd->add_option("--port", port)->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (gen_cmd->parsed()) return run_generate(gen, out);
    if (clean_cmd->parsed()) return run_clean(clean, out, err);
    if (analyze_cmd->parsed()) return run_analyze(analyze, out, err);
    if (train_cmd->parsed()) return run_train(train, out, err);
    if (eval_cmd->parsed()) return run_evaluate(eval, out, err);
    if (pred_cmd->parsed()) return run_predict(pred, out, err);
    if (part_cmd->parsed()) return run_partition(met, out);
    if (cap_cmd->parsed()) return run_capacity(met, out);
    if (c_lp_cmd->parsed()) {
      out << "C_PO4 "
          << shortest(metallurgy::phosphate_capacity_from_partition(met.state, met.l_p)) << '\n';
      return 0;
    }
    if (lp_c_cmd->parsed()) {
      out << "L_p " << shortest(metallurgy::partition_from_capacity(met.state, met.capacity))
          << '\n';
      return 0;
    }
    if (serve_cmd->parsed()) {
      const std::string path = require_model_path(serve_model);
      err << "serving " << path << " on http://" << host << ':' << port << '\n';
      service::serve(path, host, port);
      return 0;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace phosforge::app
