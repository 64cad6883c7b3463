#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dnnscaler/domain.hpp"

namespace dnnscaler {

enum class ControllerKind { kDnnScaler, kClipper, kStaticKnob };

const char* controller_name(ControllerKind kind);
ControllerKind parse_controller(const std::string& name);

struct Scenario {
  std::vector<JobSpec> jobs;
  ControllerKind controller = ControllerKind::kDnnScaler;
  Knob static_knob;  // only meaningful under kStaticKnob
  uint64_t seed = 42;
  std::string catalog_path;
  double alpha = 0.85;
  int m = 32;
  int n = 8;
  int abs_max_bs = 128;
  int max_mtl = 10;
  size_t window = 100;
  double sigma = 0.05;
};

// Reads a strict-schema scenario file; unknown fields are rejected. A
// relative catalog_path resolves against the scenario file's directory.
Scenario load_scenario(const std::string& path);

void validate_scenario(const Scenario& s);

}  // namespace dnnscaler
