#include "espm/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include "espm/errors.hpp"

namespace espm {

ItemId ItemCatalog::intern(std::string attribute, std::string value) {
  AttributeValue key{std::move(attribute), std::move(value)};
  auto it = index_.find(key);
  if (it != index_.end()) return it->second;
  ItemId id = static_cast<ItemId>(entries_.size());
  index_.emplace(key, id);
  entries_.push_back(std::move(key));
  return id;
}

ItemId ItemCatalog::lookup(std::string_view attribute, std::string_view value) const {
  AttributeValue key{std::string(attribute), std::string(value)};
  auto it = index_.find(key);
  return it == index_.end() ? -1 : it->second;
}

const AttributeValue& ItemCatalog::decode(ItemId id) const {
  return entries_.at(static_cast<std::size_t>(id));
}

LabelId Dataset::label_id(std::string_view name) const {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == name) return static_cast<LabelId>(i);
  }
  return -1;
}

std::vector<std::uint64_t> label_counts(const Dataset& ds) {
  if (!ds.group_mode) return ds.label_counts;
  std::vector<std::set<std::int32_t>> groups(ds.labels.size());
  for (const Sample& s : ds.samples) {
    groups[static_cast<std::size_t>(s.label)].insert(s.group);
  }
  std::vector<std::uint64_t> counts(ds.labels.size());
  for (std::size_t c = 0; c < counts.size(); ++c) counts[c] = groups[c].size();
  return counts;
}

void BinningSpec::validate() const {
  if (bin_count < 2) throw ConfigError("binning: bin_count must be >= 2");
  for (const auto& [col, spec] : per_column) {
    if (spec.second < 2) throw ConfigError("binning: bin_count must be >= 2 (column " + col + ")");
  }
}

namespace {

std::string format_edge(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

}  // namespace

std::size_t Bins::assign(double value) const {
  for (std::size_t i = 0; i + 1 < uppers.size(); ++i) {
    if (upper_closed ? value <= uppers[i] : value < uppers[i]) return i;
  }
  return uppers.size() - 1;  // last bin is always closed above
}

Bins compute_bins(const std::vector<double>& values, BinStrategy strategy, int bin_count) {
  if (values.empty()) throw DataError("binning: column has no numeric values");
  double lo = values[0], hi = values[0];
  for (double v : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }

  Bins bins;
  bins.lo = lo;
  std::vector<double> edges;  // candidate upper bounds, last one = hi
  if (strategy == BinStrategy::equal_width) {
    bins.upper_closed = false;
    for (int i = 1; i <= bin_count; ++i) {
      edges.push_back(lo + (hi - lo) * static_cast<double>(i) / bin_count);
    }
  } else {
    // Quantile cuts; a value sitting exactly on a cut stays in the lower bin.
    bins.upper_closed = true;
    std::vector<double> sorted(values);
    std::sort(sorted.begin(), sorted.end());
    std::size_t n = sorted.size();
    for (int i = 1; i < bin_count; ++i) {
      std::size_t idx = (static_cast<std::size_t>(i) * n + bin_count - 1) /
                        static_cast<std::size_t>(bin_count);  // ceil(i*n/k)
      edges.push_back(sorted[idx - 1]);
    }
    edges.push_back(hi);
  }
  edges.back() = hi;

  // Collapse duplicate edges (constant columns, heavy ties).
  std::vector<double> uppers;
  for (double e : edges) {
    if (uppers.empty() || e > uppers.back()) uppers.push_back(e);
  }
  if (uppers.empty() || lo >= hi) uppers = {hi};

  bins.uppers = uppers;
  if (uppers.size() == 1) {
    bins.labels.push_back("[" + format_edge(lo) + "," + format_edge(hi) + "]");
    return bins;
  }
  double prev = lo;
  for (std::size_t i = 0; i < uppers.size(); ++i) {
    bool last = i + 1 == uppers.size();
    std::string label;
    if (bins.upper_closed) {
      label = (i == 0 ? "[" : "(") + format_edge(prev) + "," + format_edge(uppers[i]) + "]";
    } else {
      label = "[" + format_edge(prev) + "," + format_edge(uppers[i]) + (last ? "]" : ")");
    }
    bins.labels.push_back(label);
    prev = uppers[i];
  }
  return bins;
}

std::vector<std::string> bin_numeric(const std::vector<double>& values, BinStrategy strategy,
                                     int bin_count) {
  Bins bins = compute_bins(values, strategy, bin_count);
  std::vector<std::string> out;
  out.reserve(values.size());
  for (double v : values) out.push_back(bins.labels[bins.assign(v)]);
  return out;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return s.substr(b, e - b);
}

bool parse_number(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* begin = s.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  return end == begin + s.size() && std::isfinite(out);
}

// Splits one delimited record; supports double-quoted fields with "" escapes.
// Returns false on end of input. Quoted fields may span lines.
bool read_record(std::istream& in, char delim, std::vector<std::string>& fields) {
  fields.clear();
  int ci = in.get();
  if (ci == EOF) return false;
  std::string field;
  bool in_quotes = false;
  bool any = false;
  while (ci != EOF) {
    char ch = static_cast<char>(ci);
    any = true;
    if (in_quotes) {
      if (ch == '"') {
        if (in.peek() == '"') {
          field.push_back('"');
          in.get();
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(ch);
      }
    } else if (ch == '"' && field.empty()) {
      in_quotes = true;
    } else if (ch == delim) {
      fields.push_back(field);
      field.clear();
    } else if (ch == '\n') {
      break;
    } else {
      field.push_back(ch);
    }
    ci = in.get();
  }
  if (!any) return false;
  fields.push_back(field);
  // A trailing bare newline at EOF yields a single empty field; skip it.
  if (fields.size() == 1 && trim(fields[0]).empty()) return read_record(in, delim, fields);
  return true;
}

char pick_delimiter(const std::string& path, const CsvOptions& options) {
  if (options.delimiter) return *options.delimiter;
  auto dot = path.rfind('.');
  if (dot != std::string::npos) {
    std::string ext = path.substr(dot + 1);
    for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (ext == "tsv" || ext == "tab") return '\t';
  }
  return ',';
}

}  // namespace

LoadedData load_csv(const std::string& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open input file: " + path);
  return load_csv(in, options, pick_delimiter(path, options));
}

LoadedData load_csv(std::istream& in, const CsvOptions& options, char delimiter) {
  std::vector<std::string> header;
  if (!read_record(in, delimiter, header)) throw DataError("empty input: no header row");
  for (std::string& h : header) h = trim(h);

  std::size_t n_cols = header.size();
  std::size_t class_col = n_cols;
  std::size_t group_col = n_cols;
  for (std::size_t i = 0; i < n_cols; ++i) {
    if (header[i] == options.class_column) class_col = i;
    if (options.group_column && header[i] == *options.group_column) group_col = i;
  }
  if (class_col == n_cols) {
    throw DataError("schema: class column '" + options.class_column + "' not found");
  }
  if (options.group_column && group_col == n_cols) {
    throw DataError("schema: group column '" + *options.group_column + "' not found");
  }

  // First pass: materialize rows, validate shape, collect labels and groups.
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> fields;
  std::size_t record = 1;
  while (read_record(in, delimiter, fields)) {
    ++record;
    if (fields.size() != n_cols) {
      throw ParseError("ragged row: expected " + std::to_string(n_cols) + " fields, got " +
                           std::to_string(fields.size()),
                       record);
    }
    for (std::string& f : fields) f = trim(f);
    rows.push_back(fields);
  }
  if (rows.empty()) throw DataError("empty input: no data rows");

  auto is_missing = [&](const std::string& cell) {
    return cell.empty() || (!options.missing_token.empty() && cell == options.missing_token);
  };

  Dataset ds;
  ItemCatalog catalog;
  ds.group_mode = options.group_column.has_value();

  std::map<std::string, LabelId> label_ids;
  std::map<std::string, std::int32_t> group_ids;
  ds.samples.resize(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::string& cls = rows[r][class_col];
    if (is_missing(cls)) {
      throw ParseError("missing class value", r + 2);
    }
    auto [it, inserted] = label_ids.emplace(cls, static_cast<LabelId>(ds.labels.size()));
    if (inserted) ds.labels.push_back(cls);
    ds.samples[r].label = it->second;
    if (ds.group_mode) {
      const std::string& key = rows[r][group_col];
      auto [git, ginserted] = group_ids.emplace(key, static_cast<std::int32_t>(ds.group_keys.size()));
      if (ginserted) ds.group_keys.push_back(key);
      ds.samples[r].group = git->second;
    }
  }

  // Column typing: numeric iff every non-missing cell parses as a number.
  for (std::size_t col = 0; col < n_cols; ++col) {
    if (col == class_col || col == group_col) continue;
    ds.attribute_count += 1;

    bool numeric = true;
    std::size_t present = 0;
    for (const auto& row : rows) {
      const std::string& cell = row[col];
      if (is_missing(cell)) continue;
      ++present;
      double unused;
      if (!parse_number(cell, unused)) {
        numeric = false;
        break;
      }
    }
    if (present == 0) continue;  // all-missing column contributes no items

    if (numeric && options.binning) {
      BinStrategy strategy = options.binning->strategy;
      int k = options.binning->bin_count;
      auto ov = options.binning->per_column.find(header[col]);
      if (ov != options.binning->per_column.end()) {
        strategy = ov->second.first;
        k = ov->second.second;
      }
      std::vector<double> values;
      values.reserve(present);
      for (const auto& row : rows) {
        if (is_missing(row[col])) continue;
        double v;
        parse_number(row[col], v);
        values.push_back(v);
      }
      Bins bins = compute_bins(values, strategy, k);
      std::size_t vi = 0;
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (is_missing(rows[r][col])) continue;
        ds.samples[r].items.push_back(
            catalog.intern(header[col], bins.labels[bins.assign(values[vi])]));
        ++vi;
      }
    } else {
      for (std::size_t r = 0; r < rows.size(); ++r) {
        const std::string& cell = rows[r][col];
        if (is_missing(cell)) continue;
        ds.samples[r].items.push_back(catalog.intern(header[col], cell));
      }
    }
  }

  for (Sample& s : ds.samples) {
    std::sort(s.items.begin(), s.items.end());
    s.items.erase(std::unique(s.items.begin(), s.items.end()), s.items.end());
  }
  ds.label_counts.assign(ds.labels.size(), 0);
  for (const Sample& s : ds.samples) ds.label_counts[static_cast<std::size_t>(s.label)] += 1;

  return LoadedData{std::move(ds), std::move(catalog)};
}

}  // namespace espm
