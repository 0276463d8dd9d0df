#include "espm/fptree.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <tuple>

#include "espm/miner.hpp"

namespace espm {

const std::vector<ItemId>& CoItemsIndex::of(ItemId item) const {
  static const std::vector<ItemId> empty;
  auto idx = static_cast<std::size_t>(item);
  if (idx >= by_item.size()) return empty;
  return by_item[idx];
}

std::vector<FrequentItem> collect_frequent_items(const Dataset& ds, const MiningConfig& cfg) {
  if (ds.samples.empty()) return {};
  std::vector<LabelId> targets = cfg.resolve_targets(ds);
  std::vector<std::uint64_t> denominators = label_counts(ds);

  std::size_t n_labels = ds.labels.size();
  ItemId max_item = -1;
  for (const Sample& s : ds.samples) {
    for (ItemId it : s.items) max_item = std::max(max_item, it);
  }
  std::size_t n_items = static_cast<std::size_t>(max_item + 1);

  std::vector<std::uint64_t> counts(n_items * n_labels, 0);
  if (ds.group_mode) {
    // Distinct group keys per (item, label).
    std::set<std::tuple<ItemId, LabelId, std::int32_t>> seen;
    for (const Sample& s : ds.samples) {
      for (ItemId it : s.items) {
        if (seen.emplace(it, s.label, s.group).second) {
          counts[static_cast<std::size_t>(it) * n_labels + static_cast<std::size_t>(s.label)] += 1;
        }
      }
    }
  } else {
    for (const Sample& s : ds.samples) {
      for (ItemId it : s.items) {
        counts[static_cast<std::size_t>(it) * n_labels + static_cast<std::size_t>(s.label)] += 1;
      }
    }
  }

  std::vector<FrequentItem> result;
  for (std::size_t i = 0; i < n_items; ++i) {
    FrequentItem fi;
    fi.item = static_cast<ItemId>(i);
    fi.supports.assign(counts.begin() + static_cast<std::ptrdiff_t>(i * n_labels),
                       counts.begin() + static_cast<std::ptrdiff_t>((i + 1) * n_labels));
    for (auto v : fi.supports) fi.total += v;
    if (fi.total == 0) continue;
    if (frequent(fi.supports, denominators, cfg, targets)) result.push_back(std::move(fi));
  }
  std::stable_sort(result.begin(), result.end(), [](const FrequentItem& a, const FrequentItem& b) {
    if (a.total != b.total) return a.total > b.total;
    return a.item < b.item;
  });
  return result;
}

bool FPTree::has_item(ItemId item) const {
  return order_position(item) != npos;
}

std::uint32_t FPTree::order_position(ItemId item) const {
  auto idx = static_cast<std::size_t>(item);
  if (item < 0 || idx >= order_pos_.size()) return npos;
  return order_pos_[idx];
}

std::vector<std::uint64_t> FPTree::item_support(ItemId item) const {
  std::uint32_t pos = order_position(item);
  if (pos == npos) return std::vector<std::uint64_t>(n_labels_, 0);
  return std::vector<std::uint64_t>(
      aggregate_.begin() + static_cast<std::ptrdiff_t>(pos * n_labels_),
      aggregate_.begin() + static_cast<std::ptrdiff_t>((pos + 1) * n_labels_));
}

std::uint32_t FPTree::header_head(ItemId item) const {
  std::uint32_t pos = order_position(item);
  return pos == npos ? npos : header_head_[pos];
}

const std::uint64_t* FPTree::node_supports(std::uint32_t idx) const {
  return counts_.data() + static_cast<std::size_t>(idx) * n_labels_;
}

void FPTree::set_order(std::vector<ItemId> order, std::size_t catalog_hint) {
  item_order_ = std::move(order);
  std::size_t max_id = catalog_hint;
  for (ItemId it : item_order_) max_id = std::max(max_id, static_cast<std::size_t>(it) + 1);
  order_pos_.assign(max_id, npos);
  for (std::size_t p = 0; p < item_order_.size(); ++p) {
    order_pos_[static_cast<std::size_t>(item_order_[p])] = static_cast<std::uint32_t>(p);
  }
  header_head_.assign(item_order_.size(), npos);
  header_tail_.assign(item_order_.size(), npos);
  aggregate_.assign(item_order_.size() * n_labels_, 0);
  nodes_.push_back(Node{});  // root
  counts_.resize(n_labels_, 0);
}

std::uint32_t FPTree::find_or_add_child(std::uint32_t parent, ItemId item) {
  std::uint32_t prev = npos;
  std::uint32_t cur = nodes_[parent].first_child;
  while (cur != npos) {
    if (nodes_[cur].item == item) return cur;
    prev = cur;
    cur = nodes_[cur].next_sibling;
  }
  std::uint32_t idx = static_cast<std::uint32_t>(nodes_.size());
  Node n;
  n.item = item;
  n.parent = parent;
  nodes_.push_back(n);
  counts_.resize(counts_.size() + n_labels_, 0);
  if (prev == npos) {
    nodes_[parent].first_child = idx;
  } else {
    nodes_[prev].next_sibling = idx;
  }
  std::uint32_t pos = order_pos_[static_cast<std::size_t>(item)];
  if (header_head_[pos] == npos) {
    header_head_[pos] = idx;
  } else {
    nodes_[header_tail_[pos]].next_same_item = idx;
  }
  header_tail_[pos] = idx;
  return idx;
}

void FPTree::add_supports(std::uint32_t node_idx, const std::uint64_t* add) {
  std::uint64_t* row = counts_.data() + static_cast<std::size_t>(node_idx) * n_labels_;
  for (std::size_t c = 0; c < n_labels_; ++c) row[c] += add[c];
}

void FPTree::insert_path(const std::vector<ItemId>& ordered_items, const std::uint64_t* add) {
  std::uint32_t cur = 0;
  for (ItemId item : ordered_items) {
    cur = find_or_add_child(cur, item);
    add_supports(cur, add);
    std::uint32_t pos = order_pos_[static_cast<std::size_t>(item)];
    std::uint64_t* agg = aggregate_.data() + static_cast<std::size_t>(pos) * n_labels_;
    for (std::size_t c = 0; c < n_labels_; ++c) agg[c] += add[c];
  }
}

TreeBuildResult build_fp_tree(const Dataset& ds, const std::vector<FrequentItem>& frequent) {
  TreeBuildResult out;
  FPTree& tree = out.tree;
  tree.n_labels_ = ds.labels.size();

  std::vector<ItemId> order;
  order.reserve(frequent.size());
  std::size_t max_id = 0;
  for (const FrequentItem& fi : frequent) {
    order.push_back(fi.item);
    max_id = std::max(max_id, static_cast<std::size_t>(fi.item) + 1);
  }
  tree.set_order(std::move(order), max_id);
  tree.dataset_label_counts_.assign(tree.n_labels_, 0);

  std::size_t n_items = tree.item_order_.size();
  out.co_items.by_item.assign(max_id, {});
  // co-occurrence matrix by order position: anc_seen[pos of a][pos of ancestor]
  std::vector<std::vector<bool>> anc_seen(n_items, std::vector<bool>(n_items, false));

  std::set<std::tuple<std::int32_t, LabelId, std::vector<ItemId>>> dedup;
  std::vector<ItemId> path;
  std::vector<std::uint64_t> one(tree.n_labels_, 0);
  for (const Sample& s : ds.samples) {
    path.clear();
    for (ItemId it : s.items) {
      if (tree.order_position(it) != FPTree::npos) path.push_back(it);
    }
    std::sort(path.begin(), path.end(), [&](ItemId a, ItemId b) {
      return tree.order_position(a) < tree.order_position(b);
    });
    if (ds.group_mode && !dedup.emplace(s.group, s.label, path).second) continue;

    tree.dataset_label_counts_[static_cast<std::size_t>(s.label)] += 1;
    std::fill(one.begin(), one.end(), 0);
    one[static_cast<std::size_t>(s.label)] = 1;
    tree.insert_path(path, one.data());

    for (std::size_t k = 1; k < path.size(); ++k) {
      auto kp = tree.order_position(path[k]);
      for (std::size_t j = 0; j < k; ++j) anc_seen[kp][tree.order_position(path[j])] = true;
    }
  }

  for (std::size_t p = 0; p < n_items; ++p) {
    ItemId item = tree.item_order_[p];
    auto& dst = out.co_items.by_item[static_cast<std::size_t>(item)];
    for (std::size_t q = 0; q < n_items; ++q) {
      if (anc_seen[p][q]) dst.push_back(tree.item_order_[q]);  // ascending position
    }
  }
  return out;
}

FPTree FPTree::conditional_tree(ItemId item) const {
  FPTree sub;
  sub.n_labels_ = n_labels_;
  sub.set_order(item_order_, order_pos_.size());
  sub.dataset_label_counts_ = dataset_label_counts_;

  std::uint32_t pos = order_position(item);
  sub.base_pattern_ = base_pattern_;
  auto ins = std::lower_bound(
      sub.base_pattern_.begin(), sub.base_pattern_.end(), item,
      [&](ItemId a, ItemId b) { return order_position(a) < order_position(b); });
  sub.base_pattern_.insert(ins, item);
  if (pos == npos) return sub;  // absent item: empty tree, prunes recursion

  std::vector<ItemId> prefix;
  for (std::uint32_t n = header_head_[pos]; n != npos; n = nodes_[n].next_same_item) {
    prefix.clear();
    for (std::uint32_t a = nodes_[n].parent; a != 0; a = nodes_[a].parent) {
      prefix.push_back(nodes_[a].item);
    }
    std::reverse(prefix.begin(), prefix.end());
    if (!prefix.empty()) sub.insert_path(prefix, node_supports(n));
  }
  return sub;
}

std::string FPTree::dump() const {
  std::ostringstream os;
  auto render = [&](auto&& self, std::uint32_t idx, int depth) -> void {
    for (int i = 0; i < depth; ++i) os << "  ";
    if (idx == 0) {
      os << "root\n";
    } else {
      os << "item " << nodes_[idx].item << " [";
      const std::uint64_t* row = node_supports(idx);
      for (std::size_t c = 0; c < n_labels_; ++c) os << (c ? "," : "") << row[c];
      os << "]\n";
    }
    std::vector<std::uint32_t> children;
    for (std::uint32_t ch = nodes_[idx].first_child; ch != npos; ch = nodes_[ch].next_sibling) {
      children.push_back(ch);
    }
    std::sort(children.begin(), children.end(), [&](std::uint32_t a, std::uint32_t b) {
      return order_pos_[static_cast<std::size_t>(nodes_[a].item)] <
             order_pos_[static_cast<std::size_t>(nodes_[b].item)];
    });
    for (std::uint32_t ch : children) self(self, ch, depth + 1);
  };
  render(render, 0, 0);
  return os.str();
}

std::vector<std::uint64_t> item_support(const FPTree& tree, ItemId item) {
  return tree.item_support(item);
}

FPTree conditional_tree(const FPTree& tree, ItemId item) {
  return tree.conditional_tree(item);
}

}  // namespace espm
