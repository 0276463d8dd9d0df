#pragma once

#include <cstdint>
#include <vector>

#include "espm/config.hpp"
#include "espm/dataset.hpp"
#include "espm/miner.hpp"

namespace espm {

/// Corrected p-value thresholds per pattern length, non-increasing in l.
struct ThresholdSchedule {
  double theta_p0 = 0.05;
  std::vector<double> theta_p;  // index l-1 = threshold for length l

  double at(std::size_t length) const { return theta_p[length - 1]; }
};

/// theta_p(l) = min(theta_p0 / (2^l * testCount(l)), theta_p(l-1)); lengths
/// with no tests inherit the previous length's threshold.
ThresholdSchedule bonferroni_thresholds(const std::vector<std::uint64_t>& test_count,
                                        double theta_p0, int max_len);

struct MinedPattern {
  Pattern pattern;
  std::vector<std::uint64_t> supports;
  double p_value = 1.0;
  LabelId target = 0;
  double posterior = 0.0;  // Pr(target | covered)

  bool operator==(const MinedPattern&) const = default;
};

struct StageCounts {
  LabelId target = 0;
  std::uint64_t candidates = 0;
  std::uint64_t novelty1_fail = 0;
  std::uint64_t bonferroni_fail = 0;
  std::uint64_t novelty2_fail = 0;
  std::uint64_t posterior_fail = 0;
  std::uint64_t survivors = 0;

  bool operator==(const StageCounts&) const = default;
};

struct InformativePatternSet {
  std::vector<MinedPattern> patterns;     // grouped by target, then search order
  std::vector<ItemId> attribute_values;   // union of surviving items, ascending id
  ThresholdSchedule thresholds;
  std::vector<StageCounts> stages;        // per target
  double postprocess_seconds = 0.0;
};

/// Lookup over all recorded candidates, keyed by pattern.
class CandidateIndex {
 public:
  explicit CandidateIndex(const std::vector<CandidateRecord>& candidates);
  const CandidateRecord* find(const Pattern& p) const;

 private:
  std::map<Pattern, const CandidateRecord*> index_;
};

/// Novelty condition against qualifying sub-patterns: the best posterior over
/// proper sub-patterns present in the candidate index; falls back to the
/// item-level bound when none qualifies (vacuous pass for singletons).
bool novel_vs_subpatterns(const CandidateRecord& record, const CandidateIndex& index,
                          const std::vector<std::vector<double>>& item_posteriors_by_id,
                          LabelId target, double alpha);

/// Applies the stringent gates per target label: novelty vs items, corrected
/// relevance threshold, novelty vs sub-patterns, optional posterior floor.
InformativePatternSet finalize(const MineResult& result, const MiningConfig& cfg);

/// Sorted, de-duplicated decoded attribute-value pairs of the surviving set.
std::vector<AttributeValue> extract_attribute_values(const InformativePatternSet& set,
                                                     const ItemCatalog& catalog);

}  // namespace espm
