#include <iostream>
#include <cstdint>
#include <string>

#include <CLI11.hpp>

#include "ringscore/commands.hpp"
#include "ringscore/error.hpp"

int main(int argc, char** argv) {
  using namespace ringscore;

  CLI::App app{"Archery target scoring from camera frames"};
  app.require_subcommand(1);

  CommandOptions options;
  std::string config;
  std::string out;
  std::string mode;
  std::string calibration;
  std::uint64_t seed = 0;

  auto add_common = [&](CLI::App* sub, const char* config_help) {
    sub->add_option("--config", config, config_help)->required();
    sub->add_option("--out", out, "Output path");
    sub->add_option("--mode", mode, "Scoring mode")->check(CLI::IsMember({"masks", "rectified"}));
    sub->add_option("--seed", seed, "Override the scenario seed");
  };
  CLI::App* calibrate = app.add_subcommand("calibrate", "Detect targets in the first frame of each camera");
  add_common(calibrate, "Config JSON");
  CLI::App* score = app.add_subcommand("score", "Score every frame transition and write the session log");
  add_common(score, "Config JSON");
  score->add_option("--calibration", calibration, "Calibration JSON (default: calibrate from frame 0)");
  CLI::App* bench = app.add_subcommand("bench", "Run a synthetic accuracy benchmark");
  add_common(bench, "Scenario JSON");
  CLI::App* synth = app.add_subcommand("synth", "Render synthetic frames, ground truth and a config");
  add_common(synth, "Scenario JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  options.config = config;
  if (!out.empty()) options.out = out;
  if (!mode.empty()) options.mode = parse_scoring_mode(mode);
  if (!calibration.empty()) options.calibration = calibration;
  for (CLI::App* sub : {calibrate, score, bench, synth}) {
    if (sub->parsed() && sub->count("--seed") > 0) options.seed = seed;
  }

  try {
    if (calibrate->parsed()) return cmd_calibrate(options, std::cout);
    if (score->parsed()) return cmd_score(options, std::cout);
    if (bench->parsed()) return cmd_bench(options, std::cout);
    return cmd_synth(options, std::cout);
  } catch (const Error& e) {
    std::cerr << "score-cli: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "score-cli: " << e.what() << '\n';
    return kExitUsage;
  }
}
