#pragma once
#include <filesystem>
#include <iosfwd>
#include <string>

#include "cli/config.hpp"
#include "cli/report.hpp"

namespace cli {

struct RunOptions {
  std::filesystem::path out_dir;
  int runs = 1;     // `flow run` batch size
  int threads = 0;  // 0: BARRIERS_THREADS or hardware concurrency
};

/// Worker count for batches: BARRIERS_THREADS if set (and positive),
/// otherwise the hardware concurrency.
int batch_threads();

/// Runs `command` ("module verb"), writes its artifacts under opts.out_dir
/// and returns the exit code: 0 success, 1 numeric failure. Usage errors
/// throw CliError with exit code 2.
int run_command(const ExperimentConfig& cfg, const std::string& command, const RunOptions& opts, std::ostream& out);

}  // namespace cli
