#pragma once

#include <cstddef>

#include "espm/config.hpp"
#include "espm/dataset.hpp"
#include "espm/miner.hpp"
#include "espm/postprocess.hpp"

namespace espm {

struct OracleCaps {
  std::size_t max_frequent_items = 16;
  int max_pattern_length = 5;
};

struct OracleResult {
  MineResult mine;
  InformativePatternSet finalized;
};

/// Reference miner: enumerates every pattern up to the length cap in the
/// same canonical order as the tree search, counting supports by direct
/// dataset scans, and applies every gate independently. Shares only the
/// statistical kernels with the main pipeline; never touches the FP-tree.
/// Throws OracleCapError when the instance exceeds the caps.
OracleResult brute_force_mine(const Dataset& ds, const MiningConfig& cfg,
                              const OracleCaps& caps = {});

}  // namespace espm
