#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "espm/config.hpp"
#include "espm/dataset.hpp"

namespace espm {

struct FrequentItem {
  ItemId item = -1;
  std::vector<std::uint64_t> supports;  // per label, dataset-level counts
  std::uint64_t total = 0;
};

/// Items whose singleton pattern satisfies the frequency condition, sorted by
/// descending total frequency with ties broken by ascending catalog id.
/// In group mode the supports count distinct group keys.
std::vector<FrequentItem> collect_frequent_items(const Dataset& ds, const MiningConfig& cfg);

/// For each item, the set of items appearing as ancestors of any node
/// containing it in the original tree. Every co-item precedes the item in
/// the global order.
struct CoItemsIndex {
  // Keyed by item id; lists sorted ascending by global order position.
  std::vector<std::vector<ItemId>> by_item;

  const std::vector<ItemId>& of(ItemId item) const;
};

/// Prefix tree over frequency-ordered samples with per-label support counts
/// per node, per-item header chains, and aggregate per-item supports.
/// Immutable after construction; safe to share read-only across threads.
class FPTree {
 public:
  static constexpr std::uint32_t npos = 0xffffffffu;

  struct Node {
    ItemId item = -1;  // -1 only for the root
    std::uint32_t parent = npos;
    std::uint32_t first_child = npos;
    std::uint32_t next_sibling = npos;
    std::uint32_t next_same_item = npos;  // header chaining
  };

  std::size_t label_count() const { return n_labels_; }
  std::size_t node_count() const { return nodes_.size(); }  // includes root
  const std::vector<ItemId>& item_order() const { return item_order_; }
  const Pattern& base_pattern() const { return base_pattern_; }

  /// Per-label sample counts of the dataset this tree was built from (in
  /// group mode: counts after group de-duplication). Conditional trees keep
  /// the original dataset's counts.
  const std::vector<std::uint64_t>& dataset_label_counts() const { return dataset_label_counts_; }

  bool has_item(ItemId item) const;
  std::uint32_t order_position(ItemId item) const;  // npos when absent from order

  /// Aggregate per-label support of base_pattern + {item}; all zeros when
  /// the item is absent.
  std::vector<std::uint64_t> item_support(ItemId item) const;

  std::uint32_t header_head(ItemId item) const;  // npos when absent
  const Node& node(std::uint32_t idx) const { return nodes_[idx]; }
  const std::uint64_t* node_supports(std::uint32_t idx) const;  // per-label row

  /// Tree of the sub-database covered by base_pattern + {item}, built from
  /// the item's prefix paths. An absent item yields an empty tree.
  FPTree conditional_tree(ItemId item) const;

  /// Deterministic indented rendering (children sorted by item order).
  std::string dump() const;

 private:
  friend struct TreeBuilder;

  std::uint32_t find_or_add_child(std::uint32_t parent, ItemId item);
  void add_supports(std::uint32_t node_idx, const std::uint64_t* counts);
  void insert_path(const std::vector<ItemId>& ordered_items, const std::uint64_t* counts);
  void set_order(std::vector<ItemId> order, std::size_t catalog_hint);

  std::vector<Node> nodes_;            // nodes_[0] = root
  std::vector<std::uint64_t> counts_;  // node_count x n_labels, root row unused
  std::vector<std::uint32_t> header_head_;
  std::vector<std::uint32_t> header_tail_;
  std::vector<std::uint64_t> aggregate_;  // per ordered item x n_labels
  std::vector<ItemId> item_order_;
  std::vector<std::uint32_t> order_pos_;  // item id -> position, npos when absent
  std::vector<std::uint64_t> dataset_label_counts_;
  Pattern base_pattern_;
  std::size_t n_labels_ = 0;
};

struct TreeBuildResult {
  FPTree tree;
  CoItemsIndex co_items;
};

/// Builds the tree from every sample filtered to the frequent items and
/// sorted by the global order. In group mode, samples within a group with
/// identical filtered item sets and label are inserted once.
TreeBuildResult build_fp_tree(const Dataset& ds, const std::vector<FrequentItem>& frequent);

std::vector<std::uint64_t> item_support(const FPTree& tree, ItemId item);
FPTree conditional_tree(const FPTree& tree, ItemId item);

}  // namespace espm
