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

#include "phosforge/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <istream>
#include <optional>
#include <ostream>
#include <random>
#include <string_view>

#include "phosforge/error.hpp"
#include "phosforge/preprocess.hpp"

namespace phosforge {
namespace {

constexpr std::string_view kHeatIdColumn = "heat_id";
constexpr std::string_view kEndpointColumn = "endpoint_p_wtpct";

// What a header cell maps to.
struct ColumnBinding {
  enum class Kind { kHeatId, kFeature, kEndpoint } kind;
  FeatureId feature = FeatureId::kScrapWeight;
  double scale = 1.0;  // multiply raw value to get SI
};

std::optional<ColumnBinding> bind_column(std::string_view name) {
  using K = ColumnBinding::Kind;
  if (name == kHeatIdColumn) return ColumnBinding{K::kHeatId};
  if (name == kEndpointColumn) return ColumnBinding{K::kEndpoint};
  if (name == "o2_ft3") {
    return ColumnBinding{K::kFeature, FeatureId::kInjectedOxygen, kCubicMetresPerCubicFoot};
  }
  if (name == "lime_lb") {
    return ColumnBinding{K::kFeature, FeatureId::kInjectedLime, kKilogramsPerPound};
  }
  for (const auto& f : feature_table()) {
    if (f.csv_column == name) return ColumnBinding{K::kFeature, f.id, 1.0};
  }
  return std::nullopt;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// Comma split with RFC 4180 double-quote escaping.
std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(std::move(cur));
  return out;
}

std::optional<double> parse_number(std::string_view cell) {
  cell = trim(cell);
  if (cell.empty()) return std::nullopt;
  if (cell.front() == '+') cell.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) return std::nullopt;
  return v;
}

std::string format_number(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string quote_if_needed(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

IngestResult read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line).empty()) {
    throw FormatError("CSV header missing");
  }
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

  const std::vector<std::string> header = split_fields(line);
  std::vector<ColumnBinding> bindings;
  std::array<bool, kFeatureCount> seen_feature{};
  bool seen_id = false;
  bool seen_endpoint = false;
  for (const auto& raw : header) {
    const std::string_view name = trim(raw);
    const auto b = bind_column(name);
    if (!b) throw FormatError("unknown CSV column '" + std::string(name) + "'");
    bool* seen = nullptr;
    switch (b->kind) {
      case ColumnBinding::Kind::kHeatId:
        seen = &seen_id;
        break;
      case ColumnBinding::Kind::kEndpoint:
        seen = &seen_endpoint;
        break;
      case ColumnBinding::Kind::kFeature:
        seen = &seen_feature[index_of(b->feature)];
        break;
    }
    if (*seen) throw FormatError("CSV column for '" + std::string(name) + "' given twice");
    *seen = true;
    bindings.push_back(*b);
  }
  if (!seen_id) throw FormatError("CSV header lacks heat_id");
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    if (!seen_feature[i]) {
      throw FormatError("CSV header lacks a column for " +
                        std::string(feature_table()[i].csv_column));
    }
  }

  IngestResult result;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const std::vector<std::string> cells = split_fields(line);
    if (cells.size() != bindings.size()) {
      result.errors.push_back({row, "*",
                               "expected " + std::to_string(bindings.size()) + " fields, got " +
                                   std::to_string(cells.size())});
      continue;
    }

    HeatRecord rec;
    bool ok = true;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const ColumnBinding& b = bindings[c];
      const std::string column = std::string(trim(header[c]));
      if (b.kind == ColumnBinding::Kind::kHeatId) {
        rec.heat_id = std::string(trim(cells[c]));
        if (rec.heat_id.empty()) {
          result.errors.push_back({row, column, "empty heat id"});
          ok = false;
        }
        continue;
      }
      const std::string_view cell = trim(cells[c]);
      if (cell.empty()) {
        if (b.kind == ColumnBinding::Kind::kFeature) {
          result.errors.push_back({row, std::string(feature_name(b.feature)), "empty value"});
          ok = false;
        }
        continue;
      }
      const auto v = parse_number(cell);
      if (!v) {
        const std::string field = b.kind == ColumnBinding::Kind::kFeature
                                      ? std::string(feature_name(b.feature))
                                      : column;
        result.errors.push_back({row, field, "not a number: '" + std::string(cell) + "'"});
        ok = false;
        continue;
      }
      if (b.kind == ColumnBinding::Kind::kEndpoint) {
        rec.endpoint_p = *v;
      } else {
        rec.set(b.feature, *v * b.scale);
      }
    }
    if (!ok) continue;

    const auto violations = validate_record(rec);
    if (!violations.empty()) {
      for (const auto& v : violations) result.errors.push_back({row, v.field, v.rule});
      continue;
    }
    if (result.dataset.contains(rec.heat_id)) {
      result.errors.push_back({row, std::string(kHeatIdColumn),
                               "duplicate heat id '" + rec.heat_id + "'"});
      continue;
    }
    result.dataset.add(std::move(rec), Provenance::kRaw);
  }
  return result;
}

void write_csv(const Dataset& dataset, std::ostream& out) {
  if (dataset.empty()) throw DataError("refusing to write an empty dataset");
  out << kHeatIdColumn;
  for (const auto& f : feature_table()) out << ',' << f.csv_column;
  out << ',' << kEndpointColumn << '\n';
  for (const auto& r : dataset) {
    out << quote_if_needed(r.heat_id);
    for (const auto& v : r.features) {
      out << ',';
      if (v) out << format_number(*v);
    }
    out << ',';
    if (r.endpoint_p) out << format_number(*r.endpoint_p);
    out << '\n';
  }
  out.flush();
  if (!out) throw Error("failed writing CSV output");
}

// --- synthetic data ---------------------------------------------------------

const std::array<VariableStats, kFeatureCount>& plant_feature_stats() {
  static const std::array<VariableStats, kFeatureCount> kStats = {{
      {41340.0, 43708.0, 42673.0, 783.0},            // scrap weight, kg
      {0.058, 0.345, 0.2747, 0.0489},                // C, wt%
      {0.577, 3.58, 0.7980, 0.0992},                 // Mn, wt%
      {0.112, 1.878, 0.7456, 0.2646},                // Cr, wt%
      {0.128, 0.79, 0.2345, 0.0362},                 // Si, wt%
      {0.004, 0.08, 0.0127, 0.0033},                 // S, wt%
      {77.87175, 289.96608, 179.0483, 29.95939},     // oxygen, m3
      {975.224, 1950.447, 1047.79838, 256.279689},   // lime, kg
      {18008.0, 23398.0, 20702.0, 941.0},            // energy, kWh
      {1518.0, 1682.0, 1600.0, 55.0},                // deslagging T, degC
      {1609.0, 1696.0, 1652.0, 27.0},                // tapping T, degC
      {98.0, 1355.0, 147.0, 53.0},                   // duration, min
  }};
  return kStats;
}

const VariableStats& plant_endpoint_stats() {
  static const VariableStats kStats{0.003, 0.018, 0.0098, 0.0028};
  return kStats;
}

const std::array<double, kFeatureCount>& plant_correlations() {
  static const std::array<double, kFeatureCount> kR = {
      0.07, -0.03, -0.07, 0.17, -0.03, -0.11, -0.18, -0.06, -0.05, -0.05, 0.005, 0.255,
  };
  return kR;
}

void SynthConfig::validate() const {
  if (n_records < 10) throw DataError("synthetic n_records must be >= 10");
  if (!(noise_sd >= 0.0) || !std::isfinite(noise_sd)) throw DataError("noise_sd must be >= 0");
  if (!(outlier_fraction >= 0.0 && outlier_fraction < 0.5)) {
    throw DataError("outlier_fraction must lie in [0, 0.5)");
  }
  if (!std::isfinite(interaction_strength)) throw DataError("interaction_strength not finite");
  for (const auto& [id, c] : coefficient_overrides) {
    if (!std::isfinite(c)) {
      throw DataError("coefficient override for " + std::string(feature_name(id)) +
                      " not finite");
    }
  }
}

std::array<double, kFeatureCount> default_coefficients() {
  const auto& r = plant_correlations();
  double ss = 0.0;
  for (double v : r) ss += v * v;
  const double scale = plant_endpoint_stats().sd / std::sqrt(ss);
  std::array<double, kFeatureCount> c{};
  for (std::size_t i = 0; i < kFeatureCount; ++i) c[i] = r[i] * scale;
  return c;
}

std::array<double, kFeatureCount> effective_coefficients(const SynthConfig& config) {
  auto c = default_coefficients();
  for (const auto& [id, v] : config.coefficient_overrides) c[index_of(id)] = v;
  return c;
}

const std::array<VariableStats, kFeatureCount>& synthetic_feature_stats() {
  static const auto table = [] {
    std::array<VariableStats, kFeatureCount> out{};
    const auto pdf = [](double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); };
    const auto cdf = [](double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); };
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
      const VariableStats& s = plant_feature_stats()[i];
      const double lo = std::max(s.min, s.mean - kSyntheticTailSd * s.sd);
      const double hi = std::min(s.max, s.mean + kSyntheticTailSd * s.sd);
      const double a = (lo - s.mean) / s.sd;
      const double b = (hi - s.mean) / s.sd;
      const double mass = cdf(b) - cdf(a);
      const double shift = (pdf(a) - pdf(b)) / mass;
      const double var = 1.0 + (a * pdf(a) - b * pdf(b)) / mass - shift * shift;
      out[i] = {lo, hi, s.mean + s.sd * shift, s.sd * std::sqrt(var)};
    }
    return out;
  }();
  return table;
}

double latent_endpoint(const FeatureVector& x, const std::array<double, kFeatureCount>& coef,
                       double interaction_strength) {
  const auto& stats = synthetic_feature_stats();
  std::array<double, kFeatureCount> z{};
  for (std::size_t i = 0; i < kFeatureCount; ++i) z[i] = (x[i] - stats[i].mean) / stats[i].sd;
  double p = plant_endpoint_stats().mean;
  for (std::size_t i = 0; i < kFeatureCount; ++i) p += coef[i] * z[i];
  if (interaction_strength != 0.0) {
    const double duration_oxygen =
        z[index_of(FeatureId::kDuration)] * z[index_of(FeatureId::kInjectedOxygen)];
    const double chromium_sulfur =
        z[index_of(FeatureId::kChromiumScrap)] * z[index_of(FeatureId::kSulfurScrap)];
    p += interaction_strength * (duration_oxygen + chromium_sulfur);
  }
  return p;
}

Dataset generate_synthetic(const SynthConfig& config) {
  config.validate();
  const auto& stats = synthetic_feature_stats();
  const auto coef = effective_coefficients(config);
  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> unit_normal(0.0, 1.0);

  auto truncated = [&](std::size_t i) {
    const VariableStats& plant = plant_feature_stats()[i];
    for (;;) {
      const double v = plant.mean + plant.sd * unit_normal(rng);
      if (v >= stats[i].min && v <= stats[i].max) return v;
    }
  };

  const std::size_t n = config.n_records;
  std::vector<FeatureVector> rows(n);
  std::vector<double> targets(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t i = 0; i < kFeatureCount; ++i) rows[r][i] = truncated(i);
    const double noise = config.noise_sd > 0.0 ? config.noise_sd * unit_normal(rng) : 0.0;
    const double p = latent_endpoint(rows[r], coef, config.interaction_strength) + noise;
    targets[r] = std::clamp(p, kSyntheticPMin, kSyntheticPMax);
  }

  const auto n_outliers =
      static_cast<std::size_t>(std::llround(config.outlier_fraction * static_cast<double>(n)));
  if (n_outliers > 0) {
    std::array<Quartiles, kFeatureCount> nominal{};
    std::vector<double> col(n);
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
      for (std::size_t r = 0; r < n; ++r) col[r] = rows[r][i];
      nominal[i] = quartiles(col);
    }
    // Partial Fisher-Yates picks the corrupted records.
    std::vector<std::size_t> idx(n);
    for (std::size_t r = 0; r < n; ++r) idx[r] = r;
    std::uniform_int_distribution<std::size_t> pick_feature(0, kFeatureCount - 1);
    std::bernoulli_distribution pick_factor(0.5);
    for (std::size_t k = 0; k < n_outliers; ++k) {
      std::uniform_int_distribution<std::size_t> pick(k, n - 1);
      std::swap(idx[k], idx[pick(rng)]);
      const std::size_t f = pick_feature(rng);
      const double factor = pick_factor(rng) ? 5.0 : 3.0;
      rows[idx[k]][f] = nominal[f].q3 + factor * nominal[f].iqr;
    }
  }

  Dataset out;
  char id[32];
  for (std::size_t r = 0; r < n; ++r) {
    std::snprintf(id, sizeof id, "SYN-%06zu", r + 1);
    out.add(record_from_vector(id, rows[r], targets[r]), Provenance::kSynthetic);
  }
  return out;
}

}  // namespace phosforge
