// consensus_sim: run, reproduce, check and batch asynchronous consensus
// scenarios. See README.md for the config format.

#include <charconv>
#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "consensus/builtin.hpp"
#include "consensus/commands.hpp"

namespace {

bool parse_seed_range(const std::string& s, std::uint64_t& first, std::uint64_t& last) {
  const auto dots = s.find("..");
  if (dots == std::string::npos) return false;
  const char* b = s.data();
  const auto r1 = std::from_chars(b, b + dots, first);
  const auto r2 = std::from_chars(b + dots + 2, b + s.size(), last);
  return r1.ec == std::errc() && r1.ptr == b + dots && r2.ec == std::errc() && r2.ptr == b + s.size() &&
         first <= last;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Asynchronous consensus simulator with delays and switching topologies"};
  app.require_subcommand(1);

  std::string config;
  std::string out = "out";
  bool dump_pi = false;
  auto* run = app.add_subcommand("run", "Simulate one scenario file");
  run->add_option("config", config, "Scenario file")->required();
  run->add_option("--out", out, "Output directory");
  run->add_flag("--dump-pi", dump_pi, "Also write one CSV per transition matrix");

  std::string name;
  auto* reproduce = app.add_subcommand("reproduce", "Run a built-in scenario and its checks");
  reproduce->add_option("name", name, "Built-in scenario")
      ->required()
      ->check(CLI::IsMember(consensus::builtin::names()));
  reproduce->add_option("--out", out, "Output directory");

  double window = 0.0;
  auto* check = app.add_subcommand("check", "Test joint connectivity over sliding windows");
  check->add_option("config", config, "Scenario file")->required();
  check->add_option("--window", window, "Window length T in seconds")->required();

  std::string seeds;
  auto* batch = app.add_subcommand("batch", "Run one scenario over a range of seeds");
  batch->add_option("config", config, "Scenario file")->required();
  batch->add_option("--seeds", seeds, "Inclusive seed range A..B")->required();
  batch->add_option("--out", out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : consensus::kExitInvalid;
  }

  try {
    if (*run) return consensus::run_command(config, out, std::cout, {dump_pi});
    if (*reproduce) return consensus::reproduce_command(name, out, std::cout);
    if (*check) return consensus::check_command(config, window, std::cout);
    if (*batch) {
      std::uint64_t first = 0;
      std::uint64_t last = 0;
      if (!parse_seed_range(seeds, first, last)) {
        std::cerr << "error: --seeds expects A..B with A <= B\n";
        return consensus::kExitInvalid;
      }
      return consensus::batch_command(config, first, last, out, std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return consensus::kExitInvalid;
  }
  return consensus::kExitInvalid;
}
