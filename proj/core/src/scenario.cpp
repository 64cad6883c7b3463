#include "dnnscaler/scenario.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace dnnscaler {

namespace {

using nlohmann::json;

void reject_unknown_fields(const json& obj, const std::set<std::string>& known,
                           const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    if (!known.count(key))
      throw std::invalid_argument(where + ": unknown field \"" + key + "\"");
  }
}

Knob parse_knob(const json& obj) {
  if (!obj.is_object()) throw std::invalid_argument("static_knob must be an object");
  reject_unknown_fields(obj, {"kind", "value"}, "static_knob");
  if (!obj.contains("kind") || !obj.contains("value"))
    throw std::invalid_argument("static_knob needs kind and value");
  Knob knob;
  const std::string kind = obj["kind"].get<std::string>();
  if (kind == "batching") {
    knob.kind = KnobKind::kBatching;
  } else if (kind == "multi-tenancy") {
    knob.kind = KnobKind::kMultiTenancy;
  } else {
    throw std::invalid_argument("static_knob kind must be batching or multi-tenancy");
  }
  knob.value = obj["value"].get<int>();
  if (knob.value < 1) throw std::invalid_argument("static_knob value must be >= 1");
  return knob;
}

JobSpec parse_job(const json& obj) {
  if (!obj.is_object()) throw std::invalid_argument("job must be an object");
  static const std::set<std::string> known = {"job_id",      "dnn_id",     "dataset_tag",
                                              "slo_ms",      "duration_s", "slo_schedule"};
  const std::string where =
      obj.contains("job_id") && obj["job_id"].is_number_integer()
          ? "job " + std::to_string(obj["job_id"].get<int>())
          : "job";
  reject_unknown_fields(obj, known, where);
  for (const char* req : {"job_id", "dnn_id", "slo_ms", "duration_s"}) {
    if (!obj.contains(req))
      throw std::invalid_argument(where + ": missing field \"" + std::string(req) + "\"");
  }

  JobSpec spec;
  spec.job_id = obj["job_id"].get<int>();
  spec.dnn_id = obj["dnn_id"].get<std::string>();
  if (spec.dnn_id.empty()) throw std::invalid_argument(where + ": empty dnn_id");
  if (obj.contains("dataset_tag")) spec.dataset_tag = obj["dataset_tag"].get<std::string>();
  spec.slo_ms = obj["slo_ms"].get<double>();
  if (!(spec.slo_ms > 0.0)) throw std::invalid_argument(where + ": slo_ms must be positive");
  spec.duration_s = obj["duration_s"].get<double>();
  if (spec.duration_s < 0.0) throw std::invalid_argument(where + ": negative duration_s");

  if (obj.contains("slo_schedule")) {
    if (!obj["slo_schedule"].is_array())
      throw std::invalid_argument(where + ": slo_schedule must be an array");
    double prev = -1.0;
    for (const auto& step : obj["slo_schedule"]) {
      if (!step.is_array() || step.size() != 2 || !step[0].is_number() || !step[1].is_number())
        throw std::invalid_argument(where + ": schedule steps must be [time_s, slo_ms] pairs");
      SloStep s{step[0].get<double>(), step[1].get<double>()};
      if (!(s.slo_ms > 0.0)) throw std::invalid_argument(where + ": scheduled slo must be positive");
      if (s.at_s < 0.0 || s.at_s <= prev)
        throw std::invalid_argument(where + ": schedule times must be strictly increasing");
      if (s.at_s >= spec.duration_s)
        throw std::invalid_argument(where + ": schedule step at or past duration");
      prev = s.at_s;
      spec.slo_schedule.push_back(s);
    }
  }
  return spec;
}

}  // namespace

const char* controller_name(ControllerKind kind) {
  switch (kind) {
    case ControllerKind::kDnnScaler:
      return "dnnscaler";
    case ControllerKind::kClipper:
      return "clipper";
    case ControllerKind::kStaticKnob:
      return "static";
  }
  return "unknown";
}

ControllerKind parse_controller(const std::string& name) {
  if (name == "dnnscaler") return ControllerKind::kDnnScaler;
  if (name == "clipper") return ControllerKind::kClipper;
  if (name == "static") return ControllerKind::kStaticKnob;
  throw std::invalid_argument("unknown controller: " + name);
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open scenario: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw std::invalid_argument("scenario " + path + ": " + e.what());
  }
  if (!doc.is_object()) throw std::invalid_argument("scenario must be a JSON object");
  static const std::set<std::string> known = {
      "jobs", "controller", "static_knob", "seed",   "catalog_path", "alpha",
      "m",    "n",          "abs_max_bs",  "max_mtl", "window",      "sigma"};
  reject_unknown_fields(doc, known, "scenario");
  if (!doc.contains("catalog_path")) throw std::invalid_argument("scenario: missing catalog_path");
  if (!doc.contains("jobs")) throw std::invalid_argument("scenario: missing jobs");

  Scenario s;
  s.catalog_path = doc["catalog_path"].get<std::string>();
  if (doc.contains("controller")) s.controller = parse_controller(doc["controller"].get<std::string>());
  if (doc.contains("static_knob")) s.static_knob = parse_knob(doc["static_knob"]);
  if (s.controller == ControllerKind::kStaticKnob && !doc.contains("static_knob"))
    throw std::invalid_argument("scenario: static controller needs static_knob");
  if (doc.contains("seed")) s.seed = doc["seed"].get<uint64_t>();
  if (doc.contains("alpha")) s.alpha = doc["alpha"].get<double>();
  if (doc.contains("m")) s.m = doc["m"].get<int>();
  if (doc.contains("n")) s.n = doc["n"].get<int>();
  if (doc.contains("abs_max_bs")) s.abs_max_bs = doc["abs_max_bs"].get<int>();
  if (doc.contains("max_mtl")) s.max_mtl = doc["max_mtl"].get<int>();
  if (doc.contains("window")) {
    const int w = doc["window"].get<int>();
    if (w < 1) throw std::invalid_argument("scenario: window must be positive");
    s.window = static_cast<size_t>(w);
  }
  if (doc.contains("sigma")) s.sigma = doc["sigma"].get<double>();

  if (!doc["jobs"].is_array()) throw std::invalid_argument("scenario: jobs must be an array");
  for (const auto& job : doc["jobs"]) s.jobs.push_back(parse_job(job));

  const auto dir = std::filesystem::path(path).parent_path();
  if (!s.catalog_path.empty() && std::filesystem::path(s.catalog_path).is_relative())
    s.catalog_path = (dir / s.catalog_path).string();

  validate_scenario(s);
  return s;
}

void validate_scenario(const Scenario& s) {
  if (s.jobs.empty()) throw std::invalid_argument("scenario has no jobs");
  if (s.catalog_path.empty()) throw std::invalid_argument("scenario: missing catalog_path");
  if (!(s.alpha > 0.0) || s.alpha > 1.0) throw std::invalid_argument("scenario: alpha out of range");
  if (s.m < 2) throw std::invalid_argument("scenario: m must exceed 1");
  if (s.n < 2) throw std::invalid_argument("scenario: n must exceed 1");
  if (s.abs_max_bs < 1) throw std::invalid_argument("scenario: abs_max_bs must be positive");
  if (s.max_mtl < 1) throw std::invalid_argument("scenario: max_mtl must be positive");
  if (s.sigma < 0.0) throw std::invalid_argument("scenario: sigma must be non-negative");
  if (s.controller == ControllerKind::kStaticKnob && s.static_knob.value < 1)
    throw std::invalid_argument("scenario: static controller needs static_knob");
  std::set<int> job_ids;
  for (const auto& job : s.jobs) {
    if (!job_ids.insert(job.job_id).second)
      throw std::invalid_argument("duplicate job_id: " + std::to_string(job.job_id));
  }
}

}  // namespace dnnscaler
