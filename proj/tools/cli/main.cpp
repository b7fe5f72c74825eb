#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Time-periodic viscous Burgers solver and verification suite"};
  app.set_version_flag("--version", TPB_VERSION);
  app.require_subcommand(1);

  struct Args {
    std::string config;
    std::vector<std::string> overrides;
  };
  std::vector<std::pair<CLI::App*, Args>> commands;
  const std::pair<const char*, const char*> specs[] = {
      {"solve", "Solve T(u) = f and write the report and field dump"},
      {"verify", "Run the invariant suite"},
      {"sweep", "Solve over a list of mu, truncation or forcing amplitude values"},
      {"colehopf", "Uniqueness, Cole-Hopf chain and monodromy for a solution"},
      {"scale", "Solve a problem given in physical units"},
  };
  commands.reserve(std::size(specs));
  for (const auto& [name, help] : specs) {
    CLI::App* sub = app.add_subcommand(name, help);
    commands.push_back({sub, Args{}});
    Args& args = commands.back().second;
    sub->add_option("--config", args.config, "JSON configuration file")->required();
    sub->add_option("--override", args.overrides, "key.path=value, applied in order")->take_all();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : tpb::cli::kConfigError;
  }
  for (const auto& [sub, args] : commands) {
    if (sub->parsed()) return tpb::cli::run(sub->get_name(), args.config, args.overrides, std::cerr);
  }
  return tpb::cli::kConfigError;
}
