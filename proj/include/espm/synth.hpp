#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

namespace espm {

/// Synthetic tabular data with a planted conjunction. With probability
/// `planted_rate` a row gets the planted values (attribute 0..planted_len-1
/// set to value v0) and its label is the target with probability
/// `planted_posterior`; all other rows draw values from a skewed categorical
/// and the target label with probability `base_rate`.
struct SynthConfig {
  std::uint64_t samples = 1000;
  int attributes = 10;
  int values_per_attribute = 4;
  int labels = 2;
  int planted_len = 3;
  double planted_posterior = 0.9;
  double planted_rate = 0.2;
  double base_rate = 0.5;
  double skew = 0.55;  // probability of value v0 for unplanted cells
  std::uint64_t seed = 0;

  void validate() const;  // throws ConfigError
};

/// Writes a CSV with header a0..aN-1,class. Deterministic for a fixed seed.
void generate_synthetic_csv(std::ostream& out, const SynthConfig& cfg);
void generate_synthetic_csv(const std::string& path, const SynthConfig& cfg);

}  // namespace espm
