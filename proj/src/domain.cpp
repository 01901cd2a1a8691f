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

#include "phosforge/domain.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>

#include "phosforge/error.hpp"

namespace phosforge {
namespace {

constexpr std::array<FeatureInfo, kFeatureCount> kFeatures = {{
    {FeatureId::kScrapWeight, "scrap_weight", "scrap_weight_kg", "kg", "Scrap weight"},
    {FeatureId::kCarbonScrap, "c_scrap", "c_scrap_wtpct", "wt%", "C content in scrap"},
    {FeatureId::kManganeseScrap, "mn_scrap", "mn_scrap_wtpct", "wt%", "Mn content in scrap"},
    {FeatureId::kChromiumScrap, "cr_scrap", "cr_scrap_wtpct", "wt%", "Cr content in scrap"},
    {FeatureId::kSiliconScrap, "si_scrap", "si_scrap_wtpct", "wt%", "Si content in scrap"},
    {FeatureId::kSulfurScrap, "s_scrap", "s_scrap_wtpct", "wt%", "S content in scrap"},
    {FeatureId::kInjectedOxygen, "injected_oxygen", "o2_m3", "m3", "Injected oxygen"},
    {FeatureId::kInjectedLime, "injected_lime", "lime_kg", "kg", "Injected lime"},
    {FeatureId::kEnergy, "energy", "energy_kwh", "kWh", "Energy consumption"},
    {FeatureId::kDeslagTemp, "deslag_temp", "deslag_temp_c", "degC", "Deslagging temperature"},
    {FeatureId::kTapTemp, "tap_temp", "tap_temp_c", "degC", "Tapping temperature"},
    {FeatureId::kDuration, "duration", "duration_min", "min", "Process duration"},
}};

bool is_temperature(FeatureId id) {
  return id == FeatureId::kDeslagTemp || id == FeatureId::kTapTemp;
}

}  // namespace

const std::array<FeatureInfo, kFeatureCount>& feature_table() { return kFeatures; }

const FeatureInfo& feature_info(FeatureId id) { return kFeatures[index_of(id)]; }

FeatureId feature_at(std::size_t index) {
  if (index >= kFeatureCount) throw Error("feature index out of range: " + std::to_string(index));
  return kFeatures[index].id;
}

std::optional<FeatureId> feature_by_name(std::string_view name) {
  for (const auto& f : kFeatures) {
    if (f.name == name) return f.id;
  }
  return std::nullopt;
}

std::string_view feature_name(FeatureId id) { return feature_info(id).name; }

std::vector<Violation> validate_record(const HeatRecord& record) {
  std::vector<Violation> out;
  for (const auto& info : kFeatures) {
    const std::string field(info.name);
    const auto value = record.get(info.id);
    if (!value) {
      out.push_back({field, std::nullopt, "missing"});
      continue;
    }
    const double v = *value;
    if (!std::isfinite(v)) {
      out.push_back({field, v, "not finite"});
    } else if (v < 0.0) {
      out.push_back({field, v, "must be >= 0"});
    } else if (is_temperature(info.id) && !(v > kMinTemperatureC && v < kMaxTemperatureC)) {
      out.push_back({field, v, "temperature outside (1000, 2000) degC"});
    }
  }
  if (record.endpoint_p) {
    const double p = *record.endpoint_p;
    if (!std::isfinite(p) || p < 0.0 || p > kMaxEndpointP) {
      out.push_back({"endpoint_p", p, "endpoint P outside [0, 0.1] wt%"});
    }
  }
  return out;
}

FeatureVector feature_vector(const HeatRecord& record) {
  FeatureVector v{};
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    if (!record.features[i]) {
      throw DataError("heat '" + record.heat_id + "' is missing feature " +
                      std::string(kFeatures[i].name));
    }
    v[i] = *record.features[i];
  }
  return v;
}

HeatRecord record_from_vector(std::string heat_id, const FeatureVector& values,
                              std::optional<double> endpoint_p) {
  HeatRecord r;
  r.heat_id = std::move(heat_id);
  for (std::size_t i = 0; i < kFeatureCount; ++i) r.features[i] = values[i];
  r.endpoint_p = endpoint_p;
  return r;
}

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::kRaw:
      return "raw";
    case Provenance::kCleaned:
      return "cleaned";
    case Provenance::kSynthetic:
      return "synthetic";
  }
  return "unknown";
}

void Dataset::add(HeatRecord record, Provenance provenance) {
  if (ids_.contains(record.heat_id)) {
    throw DataError("duplicate heat id '" + record.heat_id + "'");
  }
  ids_.insert(record.heat_id);
  records_.push_back(std::move(record));
  provenance_.push_back(provenance);
}

std::vector<double> Dataset::column(FeatureId id) const {
  std::vector<double> out;
  out.reserve(records_.size());
  for (const auto& r : records_) {
    const auto v = r.get(id);
    if (!v) {
      throw DataError("heat '" + r.heat_id + "' is missing feature " +
                      std::string(feature_name(id)));
    }
    out.push_back(*v);
  }
  return out;
}

std::vector<double> Dataset::target_column() const {
  std::vector<double> out;
  out.reserve(records_.size());
  for (const auto& r : records_) {
    if (!r.endpoint_p) {
      throw DataError("heat '" + r.heat_id + "' has no measured endpoint P");
    }
    out.push_back(*r.endpoint_p);
  }
  return out;
}

namespace {

class Fnv1a {
 public:
  void update(std::string_view bytes) {
    for (unsigned char c : bytes) {
      hash_ ^= c;
      hash_ *= 0x100000001b3ULL;
    }
  }
  void update(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    update(std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)));
  }
  std::uint64_t value() const { return hash_; }

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

}  // namespace

std::string fingerprint(const Dataset& dataset) {
  Fnv1a h;
  for (const auto& r : dataset) {
    h.update(r.heat_id);
    h.update(",");
    for (const auto& f : r.features) {
      if (f) h.update(*f);
      h.update(",");
    }
    if (r.endpoint_p) h.update(*r.endpoint_p);
    h.update("\n");
  }
  char out[17];
  std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h.value()));
  return out;
}

}  // namespace phosforge
