#include "espm/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

#include "espm/errors.hpp"
#include "espm/stats.hpp"

// Reference implementation of the whole pipeline by direct enumeration.
// Deliberately shares nothing with the tree-based miner beyond the
// statistical kernels and the public result types, so a structural bug in
// one side cannot be masked by the other.

namespace espm {

namespace {

struct FlatSample {
  std::uint64_t mask = 0;  // bit i = frequent item at order position i present
  LabelId label = 0;
};

bool oracle_frequent(const std::vector<std::uint64_t>& supports,
                     const std::vector<std::uint64_t>& denominators, const MiningConfig& cfg,
                     const std::vector<LabelId>& targets) {
  for (LabelId c : targets) {
    auto ci = static_cast<std::size_t>(c);
    if (cfg.lambda >= 1.0) {
      if (static_cast<double>(supports[ci]) >= cfg.lambda) return true;
    } else if (denominators[ci] > 0 &&
               static_cast<double>(supports[ci]) / static_cast<double>(denominators[ci]) >=
                   cfg.lambda) {
      return true;
    }
  }
  return false;
}

double oracle_relevance_p(const std::vector<std::uint64_t>& supports,
                          const std::vector<std::uint64_t>& denominators, const MiningConfig& cfg,
                          const std::vector<LabelId>& targets) {
  auto collapse = [&](LabelId t) {
    std::uint64_t a = 0, b = 0, c = 0, d = 0;
    for (std::size_t i = 0; i < supports.size(); ++i) {
      if (static_cast<LabelId>(i) == t) {
        a += supports[i];
        c += denominators[i] - supports[i];
      } else {
        b += supports[i];
        d += denominators[i] - supports[i];
      }
    }
    return std::array<std::uint64_t, 4>{a, b, c, d};
  };

  if (cfg.backend == RelevanceBackend::fisher) {
    auto t = collapse(targets.front());
    return stats::fisher_exact_2x2(t[0], t[1], t[2], t[3]);
  }
  if (cfg.table_shape == RelevanceTable::one_vs_rest && supports.size() > 2) {
    double best = 1.0;
    for (LabelId t : targets) {
      auto v = collapse(t);
      auto g2 = stats::g2_statistic(
          stats::ContingencyTable::from_supports({v[0], v[1]}, {v[0] + v[2], v[1] + v[3]}));
      best = std::min(best, stats::chi_square_sf(g2.statistic, g2.df));
    }
    return best;
  }
  auto g2 = stats::g2_statistic(stats::ContingencyTable::from_supports(supports, denominators));
  return stats::chi_square_sf(g2.statistic, g2.df);
}

struct Enumerator {
  const MiningConfig& cfg;
  const std::vector<LabelId>& targets;
  const std::vector<std::uint64_t>& denominators;
  const std::vector<FlatSample>& samples;
  const std::vector<ItemId>& order;  // position -> item id
  const std::vector<std::vector<double>>& item_posteriors;  // by order position
  std::size_t n_labels;

  std::vector<CandidateRecord> candidates;
  std::vector<std::uint64_t> test_count;

  std::vector<std::uint64_t> count_supports(std::uint64_t mask) const {
    std::vector<std::uint64_t> sup(n_labels, 0);
    for (const FlatSample& s : samples) {
      if ((s.mask & mask) == mask) sup[static_cast<std::size_t>(s.label)] += 1;
    }
    return sup;
  }

  // Visits position `pos` as an extension of `base` (whose positions are all
  // greater), mirroring the canonical search order of the tree miner.
  void visit(std::uint64_t base_mask, const std::vector<std::size_t>& base_positions,
             std::size_t pos) {
    std::uint64_t mask = base_mask | (std::uint64_t{1} << pos);
    std::vector<std::uint64_t> supports = count_supports(mask);
    if (!oracle_frequent(supports, denominators, cfg, targets)) return;

    std::vector<std::size_t> positions;
    positions.push_back(pos);
    positions.insert(positions.end(), base_positions.begin(), base_positions.end());

    double p = oracle_relevance_p(supports, denominators, cfg, targets);
    std::size_t len = positions.size();
    if (cfg.testcount_mode == TestCountMode::prose) test_count[len - 1] += 1;
    if (p < cfg.relevance_p) {
      if (cfg.testcount_mode == TestCountMode::pseudocode) test_count[len - 1] += 1;
      CandidateRecord rec;
      for (std::size_t pp : positions) rec.pattern.push_back(order[pp]);
      rec.supports = supports;
      rec.p_value = p;
      std::uint64_t n = 0;
      for (auto v : supports) n += v;
      rec.posteriors.resize(n_labels, 0.0);
      for (std::size_t c = 0; c < n_labels; ++c) {
        rec.posteriors[c] = static_cast<double>(supports[c]) / static_cast<double>(n);
      }
      for (LabelId t : targets) {
        bool pass = true;
        if (len > 1) {
          double p_c = 0.0;
          for (std::size_t pp : positions) {
            p_c = std::max(p_c, item_posteriors[pp][static_cast<std::size_t>(t)]);
          }
          pass = stats::binomial_tail(n, supports[static_cast<std::size_t>(t)], p_c) < cfg.alpha;
        }
        rec.novelty1_pass.push_back(pass);
      }
      candidates.push_back(std::move(rec));
    }

    if (len >= static_cast<std::size_t>(cfg.max_len)) return;
    for (std::size_t next = 0; next < pos; ++next) visit(mask, positions, next);
  }
};

}  // namespace

OracleResult brute_force_mine(const Dataset& ds, const MiningConfig& cfg, const OracleCaps& caps) {
  cfg.validate();
  if (cfg.max_len > caps.max_pattern_length) {
    throw OracleCapError("oracle refuses: max-len " + std::to_string(cfg.max_len) +
                         " exceeds cap " + std::to_string(caps.max_pattern_length));
  }

  OracleResult out;
  out.mine.label_count = ds.labels.size();
  out.mine.test_count.assign(static_cast<std::size_t>(cfg.max_len), 0);
  out.finalized.thresholds = bonferroni_thresholds(out.mine.test_count, cfg.theta_p0, cfg.max_len);
  if (ds.samples.empty()) return out;

  if (cfg.backend == RelevanceBackend::fisher && ds.labels.size() != 2) {
    throw ConfigError("fisher relevance backend needs exactly two labels");
  }

  std::size_t n_labels = ds.labels.size();
  std::vector<LabelId> targets = cfg.resolve_targets(ds);
  out.mine.targets = targets;

  // Singleton supports counted directly on the dataset (distinct groups per
  // label in group mode), gated by the frequency rule.
  std::vector<std::uint64_t> exact_denominators(n_labels, 0);
  std::map<ItemId, std::vector<std::uint64_t>> singleton;
  if (ds.group_mode) {
    std::vector<std::set<std::int32_t>> label_groups(n_labels);
    std::set<std::tuple<ItemId, LabelId, std::int32_t>> seen;
    for (const Sample& s : ds.samples) {
      label_groups[static_cast<std::size_t>(s.label)].insert(s.group);
      for (ItemId it : s.items) {
        if (seen.emplace(it, s.label, s.group).second) {
          auto& sup = singleton[it];
          sup.resize(n_labels, 0);
          sup[static_cast<std::size_t>(s.label)] += 1;
        }
      }
    }
    for (std::size_t c = 0; c < n_labels; ++c) exact_denominators[c] = label_groups[c].size();
  } else {
    for (const Sample& s : ds.samples) {
      exact_denominators[static_cast<std::size_t>(s.label)] += 1;
      for (ItemId it : s.items) {
        auto& sup = singleton[it];
        sup.resize(n_labels, 0);
        sup[static_cast<std::size_t>(s.label)] += 1;
      }
    }
  }

  for (const auto& [item, sup] : singleton) {
    if (!oracle_frequent(sup, exact_denominators, cfg, targets)) continue;
    FrequentItem fi;
    fi.item = item;
    fi.supports = sup;
    for (auto v : sup) fi.total += v;
    out.mine.frequent_items.push_back(std::move(fi));
  }
  std::stable_sort(out.mine.frequent_items.begin(), out.mine.frequent_items.end(),
                   [](const FrequentItem& a, const FrequentItem& b) {
                     if (a.total != b.total) return a.total > b.total;
                     return a.item < b.item;
                   });

  std::size_t n_items = out.mine.frequent_items.size();
  if (n_items > caps.max_frequent_items || n_items > 63) {
    throw OracleCapError("oracle refuses: " + std::to_string(n_items) +
                         " frequent items exceed cap " +
                         std::to_string(std::min<std::size_t>(caps.max_frequent_items, 63)));
  }

  constexpr std::uint32_t no_pos = 0xffffffffu;
  std::size_t max_id = 0;
  for (const FrequentItem& fi : out.mine.frequent_items) {
    max_id = std::max(max_id, static_cast<std::size_t>(fi.item) + 1);
  }
  std::vector<ItemId> order;
  std::vector<std::uint32_t> position(max_id, no_pos);
  for (std::size_t p = 0; p < n_items; ++p) {
    order.push_back(out.mine.frequent_items[p].item);
    position[static_cast<std::size_t>(out.mine.frequent_items[p].item)] =
        static_cast<std::uint32_t>(p);
  }

  // Effective samples: filtered to frequent items; in group mode, one copy
  // per distinct (group, label, filtered item set).
  std::vector<FlatSample> flat;
  std::vector<std::uint64_t> denominators(n_labels, 0);
  {
    std::set<std::tuple<std::int32_t, LabelId, std::uint64_t>> dedup;
    for (const Sample& s : ds.samples) {
      std::uint64_t mask = 0;
      for (ItemId it : s.items) {
        auto idx = static_cast<std::size_t>(it);
        if (idx < max_id && position[idx] != no_pos) mask |= std::uint64_t{1} << position[idx];
      }
      if (ds.group_mode && !dedup.emplace(s.group, s.label, mask).second) continue;
      flat.push_back(FlatSample{mask, s.label});
      denominators[static_cast<std::size_t>(s.label)] += 1;
    }
  }
  out.mine.label_counts_used = denominators;

  // Item posteriors on the effective samples.
  std::vector<std::vector<double>> item_posteriors(n_items);
  for (std::size_t p = 0; p < n_items; ++p) {
    std::vector<std::uint64_t> sup(n_labels, 0);
    std::uint64_t bit_mask = std::uint64_t{1} << p;
    std::uint64_t total = 0;
    for (const FlatSample& s : flat) {
      if (s.mask & bit_mask) {
        sup[static_cast<std::size_t>(s.label)] += 1;
        ++total;
      }
    }
    item_posteriors[p].resize(n_labels, 0.0);
    for (std::size_t c = 0; c < n_labels; ++c) {
      item_posteriors[p][c] = total ? static_cast<double>(sup[c]) / static_cast<double>(total) : 0.0;
    }
    out.mine.item_posteriors.push_back(item_posteriors[p]);
  }

  Enumerator en{cfg,   targets,         denominators, flat,
                order, item_posteriors, n_labels,     {}, {}};
  en.test_count.assign(static_cast<std::size_t>(cfg.max_len), 0);
  for (std::size_t p = 0; p < n_items; ++p) en.visit(0, {}, p);
  out.mine.candidates = std::move(en.candidates);
  out.mine.test_count = en.test_count;

  // Post-processing gates, reimplemented.
  ThresholdSchedule sched;
  sched.theta_p0 = cfg.theta_p0;
  {
    double prev = cfg.theta_p0;
    for (int l = 1; l <= cfg.max_len; ++l) {
      std::uint64_t tc = out.mine.test_count[static_cast<std::size_t>(l - 1)];
      double cur = prev;
      if (tc > 0) cur = std::min(cfg.theta_p0 / (std::ldexp(1.0, l) * static_cast<double>(tc)), prev);
      sched.theta_p.push_back(cur);
      prev = cur;
    }
  }
  out.finalized.thresholds = sched;

  std::map<Pattern, const CandidateRecord*> by_pattern;
  for (const CandidateRecord& rec : out.mine.candidates) by_pattern.emplace(rec.pattern, &rec);

  std::set<ItemId> items;
  for (std::size_t t = 0; t < targets.size(); ++t) {
    LabelId target = targets[t];
    auto ti = static_cast<std::size_t>(target);
    StageCounts counts;
    counts.target = target;
    counts.candidates = out.mine.candidates.size();
    for (const CandidateRecord& rec : out.mine.candidates) {
      if (!rec.novelty1_pass[t]) {
        counts.novelty1_fail += 1;
        continue;
      }
      if (!(rec.p_value < sched.theta_p[rec.pattern.size() - 1])) {
        counts.bonferroni_fail += 1;
        continue;
      }
      bool novel2 = true;
      std::size_t k = rec.pattern.size();
      if (k > 1) {
        double p_c = -1.0;
        Pattern sub;
        for (std::uint64_t m = 1; m + 1 < (std::uint64_t{1} << k); ++m) {
          sub.clear();
          for (std::size_t i = 0; i < k; ++i) {
            if (m & (std::uint64_t{1} << i)) sub.push_back(rec.pattern[i]);
          }
          auto hit = by_pattern.find(sub);
          if (hit != by_pattern.end()) p_c = std::max(p_c, hit->second->posteriors[ti]);
        }
        if (p_c < 0.0) {
          for (ItemId it : rec.pattern) {
            p_c = std::max(p_c, item_posteriors[position[static_cast<std::size_t>(it)]][ti]);
          }
        }
        std::uint64_t n = rec.coverage();
        novel2 = stats::binomial_tail(n, rec.supports[ti], p_c) < cfg.alpha;
      }
      if (!novel2) {
        counts.novelty2_fail += 1;
        continue;
      }
      double posterior = rec.posteriors[ti];
      if (cfg.min_posterior && !(posterior > *cfg.min_posterior)) {
        counts.posterior_fail += 1;
        continue;
      }
      counts.survivors += 1;
      out.finalized.patterns.push_back(
          MinedPattern{rec.pattern, rec.supports, rec.p_value, target, posterior});
      for (ItemId it : rec.pattern) items.insert(it);
    }
    out.finalized.stages.push_back(counts);
  }
  out.finalized.attribute_values.assign(items.begin(), items.end());
  return out;
}

}  // namespace espm
