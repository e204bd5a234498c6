// barriers <module> <verb> [--config FILE] [--seed N] [--out DIR] [--runs N]
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cli/commands.hpp"
#include "cli/config.hpp"

namespace {

int report_error(const std::string& tag, const std::string& msg, int code) {
  std::cerr << "error: " << tag << ": " << msg << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Barrier regions, Gauss maps and harmonic map flows"};
  std::string module, verb, config_path, out_dir;
  std::int64_t seed = -1;
  int runs = 1;
  app.add_option("module", module, "grassmann | sphere | quadric | flow | gauss")->required();
  app.add_option("verb", verb, "geodesic | tmax | region | disconnect | roundtrip | chart | run | audit")->required();
  app.add_option("--config", config_path, "experiment config (key = value text)");
  app.add_option("--seed", seed, "override the config seed");
  app.add_option("--out", out_dir, "output directory (default: output.dir)");
  app.add_option("--runs", runs, "independent seeded flow runs, executed concurrently");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return cli::kExitOk;
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    for (char& c : msg)
      if (c == '\n') c = ' ';
    return report_error("usage", msg, cli::kExitUsage);
  }

  try {
    const std::string command = module + " " + verb;
    std::string text;
    if (!config_path.empty()) {
      std::ifstream in(config_path, std::ios::binary);
      if (!in) return report_error("usage", "cannot read config " + config_path, cli::kExitUsage);
      std::ostringstream ss;
      ss << in.rdbuf();
      text = ss.str();
    }
    const auto& cmds = cli::known_commands();
    if (std::find(cmds.begin(), cmds.end(), command) == cmds.end())
      return report_error("usage", "unknown command '" + command + "'", cli::kExitUsage);
    cli::ExperimentConfig cfg = cli::parse_config(text);
    if (seed >= 0) cfg.set("seed", seed);
    cli::RunOptions opts;
    opts.out_dir = out_dir.empty() ? cfg.text("output.dir") : out_dir;
    opts.runs = runs;
    return cli::run_command(cfg, command, opts, std::cout);
  } catch (const cli::CliError& e) {
    return report_error(e.tag(), e.what(), e.exit_code());
  } catch (const std::exception& e) {
    return report_error("internal", e.what(), cli::kExitNumeric);
  }
}
