#include "espm/miner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <thread>

#include "espm/errors.hpp"
#include "espm/stats.hpp"

namespace espm {

std::uint64_t CandidateRecord::coverage() const {
  std::uint64_t n = 0;
  for (auto v : supports) n += v;
  return n;
}

bool frequent(const std::vector<std::uint64_t>& supports,
              const std::vector<std::uint64_t>& label_counts, const MiningConfig& cfg,
              const std::vector<LabelId>& targets) {
  for (LabelId c : targets) {
    auto ci = static_cast<std::size_t>(c);
    if (cfg.absolute_mode()) {
      if (static_cast<double>(supports[ci]) >= cfg.lambda) return true;
    } else {
      if (label_counts[ci] == 0) continue;
      double ratio = static_cast<double>(supports[ci]) / static_cast<double>(label_counts[ci]);
      if (ratio >= cfg.lambda) return true;
    }
  }
  return false;
}

namespace {

// 2x2 collapse of the supports against one target label.
stats::ContingencyTable one_vs_rest_table(const std::vector<std::uint64_t>& supports,
                                          const std::vector<std::uint64_t>& label_counts,
                                          LabelId target) {
  std::uint64_t sup_t = 0, sup_rest = 0, tot_t = 0, tot_rest = 0;
  for (std::size_t c = 0; c < supports.size(); ++c) {
    if (static_cast<LabelId>(c) == target) {
      sup_t += supports[c];
      tot_t += label_counts[c];
    } else {
      sup_rest += supports[c];
      tot_rest += label_counts[c];
    }
  }
  return stats::ContingencyTable::from_supports({sup_t, sup_rest}, {tot_t, tot_rest});
}

}  // namespace

RelevanceResult relevant(const std::vector<std::uint64_t>& supports,
                         const std::vector<std::uint64_t>& label_counts, const MiningConfig& cfg,
                         const std::vector<LabelId>& targets) {
  RelevanceResult res;
  if (cfg.backend == RelevanceBackend::fisher) {
    // One-sided enrichment of the first target label among covered samples.
    LabelId t = targets.front();
    auto table = one_vs_rest_table(supports, label_counts, t);
    res.p_value = stats::fisher_exact_2x2(table.covered[0], table.covered[1], table.uncovered[0],
                                          table.uncovered[1]);
  } else if (cfg.table_shape == RelevanceTable::one_vs_rest && supports.size() > 2) {
    double best = 1.0;
    for (LabelId t : targets) {
      auto g2 = stats::g2_statistic(one_vs_rest_table(supports, label_counts, t));
      double p = stats::chi_square_sf(g2.statistic, g2.df);
      best = std::min(best, p);
      res.low_expected = res.low_expected || g2.low_expected;
    }
    res.p_value = best;
  } else {
    auto table = stats::ContingencyTable::from_supports(supports, label_counts);
    auto g2 = stats::g2_statistic(table);
    res.p_value = stats::chi_square_sf(g2.statistic, g2.df);
    res.low_expected = g2.low_expected;
  }
  res.pass = res.p_value < cfg.relevance_p;
  return res;
}

bool novel_vs_items(const Pattern& pattern, const std::vector<std::uint64_t>& supports,
                    const std::vector<std::vector<double>>& item_posteriors_by_id, LabelId target,
                    double alpha) {
  if (pattern.size() <= 1) return true;  // no proper parts to compare against
  std::uint64_t n = 0;
  for (auto v : supports) n += v;
  if (n == 0) return false;
  double p_c = 0.0;
  for (ItemId it : pattern) {
    const auto& post = item_posteriors_by_id[static_cast<std::size_t>(it)];
    p_c = std::max(p_c, post[static_cast<std::size_t>(target)]);
  }
  std::uint64_t n_c = supports[static_cast<std::size_t>(target)];
  return stats::binomial_tail(n, n_c, p_c) < alpha;
}

namespace {

struct SearchContext {
  const MiningConfig& cfg;
  const std::vector<LabelId>& targets;
  const std::vector<std::uint64_t>& label_counts;
  const std::vector<std::vector<double>>& item_posteriors_by_id;
  const CoItemsIndex& co_items;
};

struct PartialResult {
  std::vector<CandidateRecord> candidates;
  std::vector<std::uint64_t> test_count;
};

void explore(const FPTree& tree, const Pattern& base, ItemId item, const SearchContext& ctx,
             PartialResult& out) {
  std::vector<std::uint64_t> supports = tree.item_support(item);
  if (!frequent(supports, ctx.label_counts, ctx.cfg, ctx.targets)) return;

  Pattern q;
  q.reserve(base.size() + 1);
  q.push_back(item);  // item precedes every base item in the global order
  q.insert(q.end(), base.begin(), base.end());

  RelevanceResult rel = relevant(supports, ctx.label_counts, ctx.cfg, ctx.targets);
  std::size_t len = q.size();
  if (ctx.cfg.testcount_mode == TestCountMode::prose) out.test_count[len - 1] += 1;
  if (rel.pass) {
    if (ctx.cfg.testcount_mode == TestCountMode::pseudocode) out.test_count[len - 1] += 1;
    CandidateRecord rec;
    rec.pattern = q;
    rec.supports = supports;
    rec.p_value = rel.p_value;
    std::uint64_t n = rec.coverage();
    rec.posteriors.resize(supports.size(), 0.0);
    for (std::size_t c = 0; c < supports.size(); ++c) {
      rec.posteriors[c] = static_cast<double>(supports[c]) / static_cast<double>(n);
    }
    rec.novelty1_pass.reserve(ctx.targets.size());
    for (LabelId t : ctx.targets) {
      rec.novelty1_pass.push_back(
          novel_vs_items(q, supports, ctx.item_posteriors_by_id, t, ctx.cfg.alpha));
    }
    out.candidates.push_back(std::move(rec));
  }

  if (len >= static_cast<std::size_t>(ctx.cfg.max_len)) return;

  FPTree sub = tree.conditional_tree(item);
  for (ItemId next : ctx.co_items.of(item)) {
    if (std::find(q.begin(), q.end(), next) != q.end()) continue;
    explore(sub, q, next, ctx, out);
  }
}

}  // namespace

MineResult mine(const Dataset& ds, const MiningConfig& cfg) {
  cfg.validate();
  auto t0 = std::chrono::steady_clock::now();

  MineResult result;
  result.label_count = ds.labels.size();
  result.test_count.assign(static_cast<std::size_t>(cfg.max_len), 0);
  if (ds.samples.empty()) {
    result.mining_seconds = 0.0;
    return result;
  }

  if (cfg.backend == RelevanceBackend::fisher && ds.labels.size() != 2) {
    throw ConfigError("fisher relevance backend needs exactly two labels");
  }
  result.targets = cfg.resolve_targets(ds);
  result.frequent_items = collect_frequent_items(ds, cfg);

  TreeBuildResult built = build_fp_tree(ds, result.frequent_items);
  const FPTree& tree = built.tree;
  result.label_counts_used = tree.dataset_label_counts();

  std::size_t catalog_size = 0;
  for (const FrequentItem& fi : result.frequent_items) {
    catalog_size = std::max(catalog_size, static_cast<std::size_t>(fi.item) + 1);
  }
  std::vector<std::vector<double>> posteriors_by_id(catalog_size);
  result.item_posteriors.reserve(result.frequent_items.size());
  for (const FrequentItem& fi : result.frequent_items) {
    std::vector<std::uint64_t> sup = tree.item_support(fi.item);
    std::uint64_t total = 0;
    for (auto v : sup) total += v;
    std::vector<double> post(sup.size(), 0.0);
    for (std::size_t c = 0; c < sup.size(); ++c) {
      post[c] = total ? static_cast<double>(sup[c]) / static_cast<double>(total) : 0.0;
    }
    posteriors_by_id[static_cast<std::size_t>(fi.item)] = post;
    result.item_posteriors.push_back(std::move(post));
  }

  SearchContext ctx{cfg, result.targets, result.label_counts_used, posteriors_by_id,
                    built.co_items};

  const std::vector<ItemId>& order = tree.item_order();
  std::vector<PartialResult> parts(order.size());
  for (auto& p : parts) p.test_count.assign(static_cast<std::size_t>(cfg.max_len), 0);

  auto run_top = [&](std::size_t i) {
    Pattern empty;
    explore(tree, empty, order[i], ctx, parts[i]);
  };

  int n_threads = std::min<int>(cfg.threads, static_cast<int>(order.size()));
  if (n_threads <= 1) {
    for (std::size_t i = 0; i < order.size(); ++i) run_top(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < order.size(); i = next.fetch_add(1)) {
          run_top(i);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  // Associative merge in global item order reproduces the sequential result.
  for (PartialResult& p : parts) {
    for (std::size_t l = 0; l < result.test_count.size(); ++l) {
      result.test_count[l] += p.test_count[l];
    }
    result.candidates.insert(result.candidates.end(),
                             std::make_move_iterator(p.candidates.begin()),
                             std::make_move_iterator(p.candidates.end()));
  }

  auto t1 = std::chrono::steady_clock::now();
  result.mining_seconds = std::chrono::duration<double>(t1 - t0).count();
  return result;
}

}  // namespace espm
