#pragma once

#include <iosfwd>
#include <string>

#include "espm/config.hpp"
#include "espm/dataset.hpp"
#include "espm/miner.hpp"
#include "espm/postprocess.hpp"

namespace espm {

struct RunMeta {
  std::string input;
  CsvOptions csv;
};

/// Shortest round-trip decimal rendering; used everywhere a double reaches
/// an output document so repeated runs stay byte-identical.
std::string format_double(double v);

/// Deterministic self-describing text document: config echo, dataset stats,
/// test counts, threshold schedule, per-stage filter counts, one pattern per
/// record, and the attribute-value list. Timing is deliberately not part of
/// the document.
void write_report_text(std::ostream& out, const RunMeta& meta, const MiningConfig& cfg,
                       const Dataset& ds, const ItemCatalog& catalog, const MineResult& mined,
                       const InformativePatternSet& final_set);

/// Machine-readable variant with identical content and stable key order.
void write_report_json(std::ostream& out, const RunMeta& meta, const MiningConfig& cfg,
                       const Dataset& ds, const ItemCatalog& catalog, const MineResult& mined,
                       const InformativePatternSet& final_set);

}  // namespace espm
