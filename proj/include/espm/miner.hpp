#pragma once

#include <cstdint>
#include <vector>

#include "espm/config.hpp"
#include "espm/dataset.hpp"
#include "espm/fptree.hpp"

namespace espm {

/// A frequent, leniently-relevant pattern recorded during mining.
struct CandidateRecord {
  Pattern pattern;  // ascending by global order position
  std::vector<std::uint64_t> supports;
  double p_value = 1.0;
  std::vector<bool> novelty1_pass;  // parallel to the resolved target list
  std::vector<double> posteriors;   // Pr(label | covered), per label

  std::uint64_t coverage() const;
};

struct MineResult {
  std::vector<CandidateRecord> candidates;  // depth-first search order
  std::vector<std::uint64_t> test_count;    // index l-1 = G2 tests on length-l patterns
  std::vector<FrequentItem> frequent_items;
  // Pr(label | item covered), per frequent item (parallel to frequent_items).
  std::vector<std::vector<double>> item_posteriors;
  // Denominators used by the frequency rule and contingency tables
  // (plain label counts; group-deduplicated counts in group mode).
  std::vector<std::uint64_t> label_counts_used;
  std::vector<LabelId> targets;  // resolved target label ids
  std::size_t label_count = 0;
  double mining_seconds = 0.0;
};

/// Frequency rule over the configured target labels: relative mode needs
/// supports[c]/label_counts[c] >= lambda for some target c, absolute mode
/// supports[c] >= lambda.
bool frequent(const std::vector<std::uint64_t>& supports,
              const std::vector<std::uint64_t>& label_counts, const MiningConfig& cfg,
              const std::vector<LabelId>& targets);

struct RelevanceResult {
  bool pass = false;
  double p_value = 1.0;
  bool low_expected = false;
};

/// Association test between pattern coverage and the label. G2 backend uses
/// the full 2x|C| table by default (one-vs-rest collapsing by config);
/// the Fisher backend needs exactly two labels.
RelevanceResult relevant(const std::vector<std::uint64_t>& supports,
                         const std::vector<std::uint64_t>& label_counts, const MiningConfig& cfg,
                         const std::vector<LabelId>& targets);

/// Novelty condition against the pattern's own items: the binomial tail of
/// the target count under the best item posterior must fall below alpha.
/// Vacuously true for singletons (a singleton has no proper parts).
bool novel_vs_items(const Pattern& pattern, const std::vector<std::uint64_t>& supports,
                    const std::vector<std::vector<double>>& item_posteriors_by_id, LabelId target,
                    double alpha);

/// Depth-first conditional-tree search. Records every frequent pattern that
/// passes lenient relevance, with per-target novelty verdicts, test counts
/// per length, and item posteriors for post-processing.
MineResult mine(const Dataset& ds, const MiningConfig& cfg);

}  // namespace espm
