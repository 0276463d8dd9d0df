#pragma once

#include <optional>
#include <string>
#include <vector>

#include "espm/dataset.hpp"

namespace espm {

enum class RelevanceBackend { g2, fisher };
enum class RelevanceTable { full, one_vs_rest };
enum class TestCountMode { prose, pseudocode };

struct MiningConfig {
  // Support threshold: 0 < lambda < 1 selects the relative (per-label ratio)
  // frequency rule, lambda >= 1 the absolute-count rule.
  double lambda = 0.1;
  int max_len = 3;  // maximum pattern length, >= 1

  double alpha = 0.01;        // novelty significance level
  double relevance_p = 0.01;  // lenient relevance threshold used while mining
  double theta_p0 = 0.05;     // base p-value for the corrected schedule

  // Labels the frequency rule and the output quantify over; empty = all.
  std::vector<std::string> targets;

  std::optional<double> min_posterior;  // survivors need posterior > floor

  RelevanceBackend backend = RelevanceBackend::g2;
  RelevanceTable table_shape = RelevanceTable::full;

  // testCount(l) bookkeeping: `prose` counts every relevance evaluation,
  // `pseudocode` only evaluations that passed.
  TestCountMode testcount_mode = TestCountMode::prose;

  int threads = 1;

  void validate() const;  // throws ConfigError

  bool absolute_mode() const { return lambda >= 1.0; }

  /// Resolves target names against the dataset's labels (empty = all labels).
  /// Throws ConfigError on unknown names.
  std::vector<LabelId> resolve_targets(const Dataset& ds) const;
};

}  // namespace espm
