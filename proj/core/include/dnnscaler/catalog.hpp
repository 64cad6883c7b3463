#pragma once

#include <string>
#include <vector>

#include "dnnscaler/domain.hpp"

namespace dnnscaler {

// Reads a JSON array of network profiles. The schema is strict: unknown
// fields are rejected, every profile must be calibratable, and the batch
// size 1 and single instance throughputs must agree (same measurement).
std::vector<DnnProfile> load_catalog(const std::string& path);

const DnnProfile& find_dnn(const std::vector<DnnProfile>& catalog, const std::string& id);

}  // namespace dnnscaler
