#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fsdisc/cli.hpp"

namespace {

struct Flags {
  std::string config;
  std::optional<std::string> output;
  std::optional<std::string> format;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> grid_scale;
};

void add_flags(CLI::App& cmd, Flags& f) {
  cmd.add_option("--config", f.config, "Run configuration (JSON)");
  cmd.add_option("--output", f.output, "Report path (stdout when omitted)");
  cmd.add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  cmd.add_option("--seed", f.seed, "Seed for every random choice");
  cmd.add_option("--grid-scale", f.grid_scale, "Multiply all grid counts by k")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Norm and dual-functional experiments on the unit disc"};
  app.require_subcommand(1);
  Flags flags;
  for (const char* name : {"norms", "equivalence", "search"}) add_flags(*app.add_subcommand(name), flags);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  fsdisc::cli::RunConfig config;
  fsdisc::cli::Overrides overrides;
  try {
    if (!flags.config.empty()) config = fsdisc::cli::load_run_config(flags.config);
    overrides.output = flags.output;
    if (flags.format) overrides.format = fsdisc::cli::format_from_string(*flags.format);
    overrides.seed = flags.seed;
    overrides.grid_scale = flags.grid_scale;
  } catch (const fsdisc::ConfigError& e) {
    std::cerr << "fsdisc: configuration error: " << e.what() << '\n';
    return 2;
  }
  return fsdisc::cli::run_command(command, std::move(config), overrides);
}
