#pragma once

// Entry points behind the command-line tool. Each returns the process exit
// status: 0 success (or condition holds), 1 validation error, 2 condition or
// check failed.

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>

namespace consensus {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitFailed = 2;

struct RunOptions {
  bool dump_pi = false;
};

/// Writes trajectories.csv, events.csv and summary.txt into `out_dir`.
int run_command(const std::filesystem::path& config, const std::filesystem::path& out_dir,
                std::ostream& log, RunOptions opts = {});

/// Runs a built-in scenario by name and prints one CHECK line per criterion.
int reproduce_command(const std::string& name, const std::filesystem::path& out_dir,
                      std::ostream& log);

/// Joint-connectivity check over windows of length T.
int check_command(const std::filesystem::path& config, double T, std::ostream& log);

/// One run per seed in [first, last]; writes batch_summary.csv and
/// final_values.csv.
int batch_command(const std::filesystem::path& config, std::uint64_t first, std::uint64_t last,
                  const std::filesystem::path& out_dir, std::ostream& log);

}  // namespace consensus
