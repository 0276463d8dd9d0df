#include "espm/config.hpp"

#include "espm/errors.hpp"

namespace espm {

void MiningConfig::validate() const {
  if (!(lambda > 0.0)) throw ConfigError("lambda must be > 0");
  if (max_len < 1) throw ConfigError("max-len must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must be in (0,1)");
  if (!(relevance_p > 0.0 && relevance_p <= 1.0)) {
    throw ConfigError("relevance-p must be in (0,1]");
  }
  if (!(theta_p0 > 0.0 && theta_p0 <= 1.0)) throw ConfigError("theta-p0 must be in (0,1]");
  if (min_posterior && !(*min_posterior >= 0.0 && *min_posterior <= 1.0)) {
    throw ConfigError("min-posterior must be in [0,1]");
  }
  if (threads < 1) throw ConfigError("threads must be >= 1");
}

std::vector<LabelId> MiningConfig::resolve_targets(const Dataset& ds) const {
  std::vector<LabelId> out;
  if (targets.empty()) {
    for (std::size_t i = 0; i < ds.labels.size(); ++i) out.push_back(static_cast<LabelId>(i));
    return out;
  }
  for (const std::string& name : targets) {
    LabelId id = ds.label_id(name);
    if (id < 0) throw ConfigError("unknown target label: " + name);
    out.push_back(id);
  }
  return out;
}

}  // namespace espm
