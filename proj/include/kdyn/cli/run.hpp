#pragma once

#include <string>
#include <vector>

#include "kdyn/cli/config.hpp"
#include "kdyn/error.hpp"

namespace kdyn::cli {

/// Plot-ready table: header plus rows of already formatted cells.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string to_string() const;
};

struct CommandOutput {
  json result;
  CsvTable table;
  std::vector<std::string> warnings;
};

/// Runs the configured command. Module errors propagate as kdyn::Error.
CommandOutput execute(const RunConfig& config);

struct RunOutput {
  int exit_code = 0;
  json record;        // {command, status, real_format, config, result, warnings} or an error record
  std::string text;   // the record or table rendered in the configured format
};

/// Never throws: failures become error records with a stable code and exit code 1.
RunOutput run(const RunConfig& config);

/// Error record for failures that happen before a config exists.
RunOutput error_output(const std::string& command, ErrorCode code, const std::string& message,
                       const std::string& format);

/// Significant digits used for reals carried at `bits` of precision.
int decimal_digits(long bits);

}  // namespace kdyn::cli
