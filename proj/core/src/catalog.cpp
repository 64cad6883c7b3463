#include "dnnscaler/catalog.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "dnnscaler/perf_model.hpp"

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

std::vector<std::pair<int, double>> parse_points(const json& arr, const std::string& where) {
  if (!arr.is_array() || arr.size() < 2)
    throw std::invalid_argument(where + ": need at least two points");
  std::vector<std::pair<int, double>> points;
  std::set<int> seen;
  for (const auto& p : arr) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() || !p[1].is_number())
      throw std::invalid_argument(where + ": points must be [int, number] pairs");
    const int x = p[0].get<int>();
    const double tput = p[1].get<double>();
    if (x < 1) throw std::invalid_argument(where + ": point abscissa must be >= 1");
    if (!(tput > 0.0)) throw std::invalid_argument(where + ": throughput must be positive");
    if (!seen.insert(x).second)
      throw std::invalid_argument(where + ": duplicate abscissa " + std::to_string(x));
    points.emplace_back(x, tput);
  }
  return points;
}

double point_at(const std::vector<std::pair<int, double>>& points, int x) {
  for (const auto& p : points)
    if (p.first == x) return p.second;
  return 0.0;
}

DnnProfile parse_profile(const json& obj) {
  if (!obj.is_object()) throw std::invalid_argument("catalog entry must be an object");
  static const std::set<std::string> known = {
      "id", "params_millions", "mflops", "batching_points", "mt_points", "sigma", "u1"};
  const std::string where =
      obj.contains("id") && obj["id"].is_string() ? "dnn " + obj["id"].get<std::string>()
                                                  : "catalog entry";
  reject_unknown_fields(obj, known, where);
  for (const char* req : {"id", "params_millions", "mflops", "batching_points", "mt_points"}) {
    if (!obj.contains(req))
      throw std::invalid_argument(where + ": missing field \"" + std::string(req) + "\"");
  }

  DnnProfile p;
  p.id = obj["id"].get<std::string>();
  if (p.id.empty()) throw std::invalid_argument("catalog entry with empty id");
  p.params_millions = obj["params_millions"].get<double>();
  p.mflops = obj["mflops"].get<double>();
  if (!(p.params_millions > 0.0)) throw std::invalid_argument(where + ": params_millions must be positive");
  if (!(p.mflops > 0.0)) throw std::invalid_argument(where + ": mflops must be positive");
  p.batching_points = parse_points(obj["batching_points"], where + " batching_points");
  p.mt_points = parse_points(obj["mt_points"], where + " mt_points");
  if (obj.contains("sigma")) {
    p.sigma = obj["sigma"].get<double>();
    if (*p.sigma < 0.0) throw std::invalid_argument(where + ": sigma must be non-negative");
  }
  if (obj.contains("u1")) {
    p.u1 = obj["u1"].get<double>();
    if (!(*p.u1 > 0.0) || *p.u1 > 1.0)
      throw std::invalid_argument(where + ": u1 must be in (0, 1]");
  }

  const double tput_bs1 = point_at(p.batching_points, 1);
  const double tput_mtl1 = point_at(p.mt_points, 1);
  if (tput_bs1 <= 0.0) throw std::invalid_argument(where + ": batching_points must include batch size 1");
  if (tput_mtl1 <= 0.0) throw std::invalid_argument(where + ": mt_points must include a single-instance point");
  if (std::abs(tput_bs1 - tput_mtl1) > 1e-9 * tput_bs1)
    throw std::invalid_argument(where + ": batch size 1 and single-instance throughputs disagree");

  // Both fits must succeed; a catalog that cannot calibrate is unusable.
  calibrate_batching(p.batching_points, 0.0);
  calibrate_mt(p.mt_points, 0.0);
  return p;
}

}  // namespace

std::vector<DnnProfile> load_catalog(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open catalog: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw std::invalid_argument("catalog " + path + ": " + e.what());
  }
  if (!doc.is_array() || doc.empty())
    throw std::invalid_argument("catalog must be a non-empty JSON array");

  std::vector<DnnProfile> catalog;
  std::set<std::string> ids;
  for (const auto& entry : doc) {
    DnnProfile p = parse_profile(entry);
    if (!ids.insert(p.id).second)
      throw std::invalid_argument("duplicate dnn id: " + p.id);
    catalog.push_back(std::move(p));
  }
  return catalog;
}

const DnnProfile& find_dnn(const std::vector<DnnProfile>& catalog, const std::string& id) {
  for (const auto& p : catalog)
    if (p.id == id) return p;
  throw std::invalid_argument("unknown dnn: " + id);
}

}  // namespace dnnscaler
