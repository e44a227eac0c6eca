#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "h1s2s/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Monte-Carlo line-shape simulator for the hydrogen 1S-2S transition"};
  app.set_version_flag("--version", "h1s2s 0.1.0");

  h1s2s::CommandRequest request;
  std::string config_path;
  std::string output_dir = ".";
  std::uint64_t seed = 0;

  std::string commands;
  for (const auto& c : h1s2s::known_commands()) commands += (commands.empty() ? "" : ", ") + c;
  app.add_option("command", request.command, "Study to run: " + commands)
      ->required();
  app.add_option("values", request.arguments, "Positional values (budget: sim exp)");
  app.add_option("-c,--config", config_path, "key = value configuration file")
      ->check(CLI::ExistingFile);
  app.add_option("-o,--out", output_dir, "Output directory");
  auto* seed_opt = app.add_option("--seed", seed, "Override the configured seed");
  app.add_option("--set", request.overrides, "Override a configuration key (key=value)")
      ->expected(1)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);

  CLI11_PARSE(app, argc, argv);

  request.config_path = config_path;
  request.output_dir = output_dir;
  if (*seed_opt) request.seed_override = seed;
  return h1s2s::run(request, std::cout, std::cerr);
}
