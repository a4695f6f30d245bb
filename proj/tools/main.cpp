#include <iostream>

#include "CLI11.hpp"
#include "critspec/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"critspec: critical points of Hamiltonian actions on tori and SU(2)"};
  app.set_version_flag("--version", critspec::version());
  app.require_subcommand(1, 1);

  std::string config;
  critspec::Overrides o;
  for (const char* name : {"verify", "solve", "spectrum"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config, "run configuration (JSON)")->required();
    sub->add_option("--out", o.out_dir, "output directory");
    sub->add_option("--seed", o.seed, "RNG seed");
    sub->add_option("--threads", o.threads, "worker threads (0 = hardware)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : critspec::kExitConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  return critspec::run_command(command, config, o, std::cout, std::cerr);
}
