#include "espm/postprocess.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>

#include "espm/stats.hpp"

namespace espm {

ThresholdSchedule bonferroni_thresholds(const std::vector<std::uint64_t>& test_count,
                                        double theta_p0, int max_len) {
  ThresholdSchedule sched;
  sched.theta_p0 = theta_p0;
  double prev = theta_p0;
  for (int l = 1; l <= max_len; ++l) {
    std::uint64_t tc = static_cast<std::size_t>(l - 1) < test_count.size()
                           ? test_count[static_cast<std::size_t>(l - 1)]
                           : 0;
    double cur = prev;  // lengths with no tests inherit the previous threshold
    if (tc > 0) {
      cur = std::min(theta_p0 / (std::ldexp(1.0, l) * static_cast<double>(tc)), prev);
    }
    sched.theta_p.push_back(cur);
    prev = cur;
  }
  return sched;
}

CandidateIndex::CandidateIndex(const std::vector<CandidateRecord>& candidates) {
  for (const CandidateRecord& rec : candidates) index_.emplace(rec.pattern, &rec);
}

const CandidateRecord* CandidateIndex::find(const Pattern& p) const {
  auto it = index_.find(p);
  return it == index_.end() ? nullptr : it->second;
}

bool novel_vs_subpatterns(const CandidateRecord& record, const CandidateIndex& index,
                          const std::vector<std::vector<double>>& item_posteriors_by_id,
                          LabelId target, double alpha) {
  std::size_t k = record.pattern.size();
  if (k <= 1) return true;  // no proper sub-patterns; same convention as condition 1

  auto ti = static_cast<std::size_t>(target);
  double p_c = -1.0;
  Pattern sub;
  for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << k); ++mask) {
    sub.clear();
    for (std::size_t i = 0; i < k; ++i) {
      if (mask & (std::uint64_t{1} << i)) sub.push_back(record.pattern[i]);
    }
    const CandidateRecord* hit = index.find(sub);
    if (hit) p_c = std::max(p_c, hit->posteriors[ti]);
  }
  if (p_c < 0.0) {
    // No frequent-and-relevant sub-pattern: fall back to the item-level bound.
    for (ItemId it : record.pattern) {
      p_c = std::max(p_c, item_posteriors_by_id[static_cast<std::size_t>(it)][ti]);
    }
  }
  std::uint64_t n = record.coverage();
  if (n == 0) return false;
  return stats::binomial_tail(n, record.supports[ti], p_c) < alpha;
}

InformativePatternSet finalize(const MineResult& result, const MiningConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();

  InformativePatternSet out;
  out.thresholds = bonferroni_thresholds(result.test_count, cfg.theta_p0, cfg.max_len);

  std::size_t catalog_size = 0;
  for (const CandidateRecord& rec : result.candidates) {
    for (ItemId it : rec.pattern) {
      catalog_size = std::max(catalog_size, static_cast<std::size_t>(it) + 1);
    }
  }
  std::vector<std::vector<double>> posteriors_by_id(catalog_size);
  for (std::size_t i = 0; i < result.frequent_items.size(); ++i) {
    auto id = static_cast<std::size_t>(result.frequent_items[i].item);
    if (id < catalog_size) posteriors_by_id[id] = result.item_posteriors[i];
  }

  CandidateIndex index(result.candidates);
  std::set<ItemId> items;
  for (std::size_t t = 0; t < result.targets.size(); ++t) {
    LabelId target = result.targets[t];
    StageCounts counts;
    counts.target = target;
    counts.candidates = result.candidates.size();
    for (const CandidateRecord& rec : result.candidates) {
      if (!rec.novelty1_pass[t]) {
        counts.novelty1_fail += 1;
        continue;
      }
      if (!(rec.p_value < out.thresholds.at(rec.pattern.size()))) {
        counts.bonferroni_fail += 1;
        continue;
      }
      if (!novel_vs_subpatterns(rec, index, posteriors_by_id, target, cfg.alpha)) {
        counts.novelty2_fail += 1;
        continue;
      }
      double posterior = rec.posteriors[static_cast<std::size_t>(target)];
      if (cfg.min_posterior && !(posterior > *cfg.min_posterior)) {
        counts.posterior_fail += 1;
        continue;
      }
      counts.survivors += 1;
      out.patterns.push_back(
          MinedPattern{rec.pattern, rec.supports, rec.p_value, target, posterior});
      for (ItemId it : rec.pattern) items.insert(it);
    }
    out.stages.push_back(counts);
  }
  out.attribute_values.assign(items.begin(), items.end());

  auto t1 = std::chrono::steady_clock::now();
  out.postprocess_seconds = std::chrono::duration<double>(t1 - t0).count();
  return out;
}

std::vector<AttributeValue> extract_attribute_values(const InformativePatternSet& set,
                                                     const ItemCatalog& catalog) {
  std::vector<AttributeValue> out;
  out.reserve(set.attribute_values.size());
  for (ItemId it : set.attribute_values) out.push_back(catalog.decode(it));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace espm
