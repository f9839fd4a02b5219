#include <json.hpp>

#include "vbpbb/analysis.hpp"
#include "vbpbb/error.hpp"

namespace vbpbb {
namespace {

using nlohmann::json;

void reject_unknown(const json& obj, std::initializer_list<const char*> known, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    bool found = false;
    for (const char* k : known) found = found || key == k;
    if (!found) throw Error(ErrorCode::InvalidArgument, "unknown key '" + key + "' in " + where);
  }
}

template <class T>
void read(const json& obj, const char* key, T& out) {
  if (!obj.contains(key) || obj[key].is_null()) return;
  try {
    out = obj[key].get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("config key '") + key + "': " + e.what());
  }
}

json parse_object(const std::string& text, const std::string& what) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidArgument, what + " is not valid JSON: " + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::InvalidArgument, what + " must be a JSON object");
  return doc;
}

SyntheticSpec synthetic_from_json(const json& obj) {
  reject_unknown(obj,
                 {"length_samples", "components", "noise_sd", "trend_slope", "seed", "start_time",
                  "step_hours", "name"},
                 "synthetic spec");
  SyntheticSpec spec;
  read(obj, "length_samples", spec.length_samples);
  read(obj, "noise_sd", spec.noise_sd);
  read(obj, "trend_slope", spec.trend_slope);
  read(obj, "seed", spec.seed);
  read(obj, "step_hours", spec.step_hours);
  read(obj, "name", spec.name);
  if (obj.contains("start_time")) {
    const auto text = obj["start_time"].get<std::string>();
    const auto ts = parse_timestamp(text);
    if (!ts) throw Error(ErrorCode::InvalidArgument, "bad synthetic start_time '" + text + "'");
    spec.start_time = *ts;
  }
  if (obj.contains("components")) {
    for (const auto& c : obj["components"]) {
      reject_unknown(c, {"period_samples", "waveform", "amplitude", "square_terms"},
                     "synthetic component");
      SyntheticComponent comp;
      read(c, "period_samples", comp.period_samples);
      read(c, "amplitude", comp.amplitude);
      read(c, "square_terms", comp.square_terms);
      std::string waveform = "cosine";
      read(c, "waveform", waveform);
      if (waveform == "cosine")
        comp.waveform = Waveform::Cosine;
      else if (waveform == "square")
        comp.waveform = Waveform::Square;
      else
        throw Error(ErrorCode::InvalidArgument, "waveform must be cosine or square");
      spec.components.push_back(comp);
    }
  }
  spec.validate();
  return spec;
}

} // namespace

SyntheticSpec parse_synthetic_spec(const std::string& json_text) {
  try {
    return synthetic_from_json(parse_object(json_text, "synthetic spec"));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("synthetic spec: ") + e.what());
  }
}

namespace {

AnalysisConfig config_from_text(const std::string& json_text) {
  const json doc = parse_object(json_text, "analysis config");
  reject_unknown(doc,
                 {"input", "synthetic", "timestamp_column", "value_column", "step_hours",
                  "decimal_comma", "delimiter", "components", "B", "seed", "alpha", "override_m",
                  "pbb_mode", "out_dir", "plots", "periodogram", "threads"},
                 "analysis config");
  AnalysisConfig cfg;
  if (doc.contains("input") && !doc["input"].is_null())
    cfg.input = std::filesystem::path(doc["input"].get<std::string>());
  if (doc.contains("synthetic") && !doc["synthetic"].is_null())
    cfg.synthetic = synthetic_from_json(doc["synthetic"]);
  read(doc, "timestamp_column", cfg.csv.timestamp_column);
  read(doc, "value_column", cfg.csv.value_column);
  read(doc, "step_hours", cfg.csv.step_hours);
  read(doc, "decimal_comma", cfg.csv.decimal_comma);
  if (doc.contains("delimiter")) {
    const auto d = doc["delimiter"].get<std::string>();
    if (d.size() != 1) throw Error(ErrorCode::InvalidArgument, "delimiter must be one character");
    cfg.csv.delimiter = d[0];
  }
  if (doc.contains("components")) {
    for (const auto& c : doc["components"]) {
      reject_unknown(c, {"label", "period_hours", "n_harmonics"}, "component");
      ComponentFamily family;
      read(c, "label", family.label);
      read(c, "period_hours", family.period_hours);
      read(c, "n_harmonics", family.n_harmonics);
      cfg.components.push_back(family);
    }
  }
  read(doc, "B", cfg.replicates);
  read(doc, "seed", cfg.seed);
  read(doc, "alpha", cfg.alpha);
  if (doc.contains("override_m") && !doc["override_m"].is_null())
    cfg.override_m = doc["override_m"].get<std::size_t>();
  if (doc.contains("pbb_mode")) cfg.pbb_mode = parse_pbb_mode(doc["pbb_mode"].get<std::string>());
  std::string out_dir = cfg.out_dir.string();
  read(doc, "out_dir", out_dir);
  cfg.out_dir = out_dir;
  read(doc, "plots", cfg.plots);
  read(doc, "periodogram", cfg.write_periodogram);
  read(doc, "threads", cfg.threads);
  cfg.validate();
  return cfg;
}

} // namespace

AnalysisConfig parse_analysis_config(const std::string& json_text) {
  try {
    return config_from_text(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("analysis config: ") + e.what());
  }
}

} // namespace vbpbb
