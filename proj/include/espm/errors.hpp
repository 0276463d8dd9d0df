#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace espm {

// CLI exit codes. Library errors map onto these at the tool boundary.
enum class ExitCode : int {
  ok = 0,
  failure = 1,
  config = 2,
  io = 3,
  verify_mismatch = 4,
  oracle_cap = 5,
};

/// Invalid configuration: bad flag values, unknown labels, incompatible options.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data could not be read or does not match the declared schema.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed record; carries the 1-based record number (header = record 1).
class ParseError : public DataError {
 public:
  ParseError(const std::string& msg, std::size_t record)
      : DataError(msg + " (row " + std::to_string(record) + ")"), record_(record) {}
  std::size_t record() const { return record_; }

 private:
  std::size_t record_;
};

/// Brute-force verification refused: instance exceeds the oracle's caps.
class OracleCapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace espm
