#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace espm {

using ItemId = std::int32_t;
using LabelId = std::int32_t;

/// An item: one (attribute, value) pair. Identical value strings under
/// different attributes are distinct items.
struct AttributeValue {
  std::string attribute;
  std::string value;

  auto operator<=>(const AttributeValue&) const = default;
};

/// A pattern is a conjunction of items, stored in global item order
/// (ascending position in the frequency-sorted item list).
using Pattern = std::vector<ItemId>;

/// Dense interning of attribute-value pairs. Ids are exactly 0..size()-1 and
/// the id <-> pair mapping is a bijection.
class ItemCatalog {
 public:
  ItemId intern(std::string attribute, std::string value);
  ItemId lookup(std::string_view attribute, std::string_view value) const;  // -1 if absent
  const AttributeValue& decode(ItemId id) const;
  std::size_t size() const { return entries_.size(); }
  const std::vector<AttributeValue>& entries() const { return entries_; }

  bool operator==(const ItemCatalog& o) const { return entries_ == o.entries_; }

 private:
  std::vector<AttributeValue> entries_;
  std::map<AttributeValue, ItemId> index_;
};

struct Sample {
  std::vector<ItemId> items;  // sorted ascending by id, no duplicates
  LabelId label = 0;
  std::int32_t group = -1;  // index into Dataset::group_keys, -1 when absent

  bool operator==(const Sample&) const = default;
};

struct Dataset {
  std::vector<Sample> samples;
  std::vector<std::string> labels;
  std::vector<std::uint64_t> label_counts;  // plain per-label sample counts
  std::vector<std::string> group_keys;
  bool group_mode = false;
  std::size_t attribute_count = 0;

  LabelId label_id(std::string_view name) const;  // -1 if absent

  bool operator==(const Dataset&) const = default;
};

/// Per-label counts used as frequency denominators: plain sample counts, or
/// the number of distinct group keys having at least one sample with the
/// label when group semantics are enabled.
std::vector<std::uint64_t> label_counts(const Dataset& ds);

enum class BinStrategy { equal_width, equal_frequency };

struct BinningSpec {
  BinStrategy strategy = BinStrategy::equal_width;
  int bin_count = 5;  // >= 2
  std::map<std::string, std::pair<BinStrategy, int>> per_column;

  void validate() const;  // throws ConfigError
};

/// Bin boundaries for one numeric column. Equal-width bins are [lo, hi) with
/// the last bin closed; equal-frequency bins are (lo, hi] with the first bin
/// closed, so a value sitting on a quantile cut stays in the lower bin.
struct Bins {
  std::vector<double> uppers;       // non-decreasing, deduplicated
  std::vector<std::string> labels;  // parallel to uppers
  bool upper_closed = false;
  double lo = 0.0;

  std::size_t assign(double value) const;
};

Bins compute_bins(const std::vector<double>& values, BinStrategy strategy, int bin_count);

/// Maps each value of one numeric column to a deterministic bin label.
/// Bin edges are derived only from `values`.
std::vector<std::string> bin_numeric(const std::vector<double>& values, BinStrategy strategy,
                                     int bin_count);

struct CsvOptions {
  std::string class_column;
  std::optional<std::string> group_column;
  std::optional<BinningSpec> binning;  // absent: numeric columns kept as nominal text
  std::optional<char> delimiter;       // absent: auto-detect from extension (.tsv -> tab)
  std::string missing_token = "?";     // empty cells are always treated as missing
};

struct LoadedData {
  Dataset dataset;
  ItemCatalog catalog;
};

/// Loads a delimited text file with a header row. Each non-class, non-group
/// cell becomes one item; missing cells produce no item for that attribute
/// but never drop the row. A missing class value is always an error.
LoadedData load_csv(const std::string& path, const CsvOptions& options);
LoadedData load_csv(std::istream& in, const CsvOptions& options, char delimiter);

}  // namespace espm
