#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "espm/config.hpp"
#include "espm/dataset.hpp"
#include "espm/oracle.hpp"
#include "espm/synth.hpp"

namespace espm {

enum class OutputFormat { text, json };

struct MineArgs {
  std::string input;
  std::string output;
  CsvOptions csv;
  MiningConfig config;
  OutputFormat format = OutputFormat::text;
};

struct VerifyArgs {
  std::string input;
  CsvOptions csv;
  MiningConfig config;
  OracleCaps caps;
  // Test hook: when >= 0, perturbs the given candidate's first support
  // before comparing, to exercise the mismatch path.
  int perturb_candidate = -1;
};

struct SynthArgs {
  std::string output;
  SynthConfig config;
};

/// Runs load + mine + finalize, writes the output document, and prints the
/// timing summary to `log`. Returns a CLI exit code.
int run_mine(const MineArgs& args, std::ostream& log, std::ostream& err);

/// Runs the pipeline and the brute-force reference on the same input and
/// prints a field-level diff. Exit 0 iff identical.
int run_verify(const VerifyArgs& args, std::ostream& log, std::ostream& err);

int run_synth(const SynthArgs& args, std::ostream& log, std::ostream& err);

}  // namespace espm
