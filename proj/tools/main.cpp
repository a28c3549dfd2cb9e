#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"kpplab: Fisher-KPP fronts and spreading speeds in periodic media"};
  app.require_subcommand(1);
  app.set_version_flag("--version", KPPLAB_VERSION);

  kpp::cli::Invocation inv;
  std::string output_dir;

  const std::pair<const char*, const char*> commands[] = {
      {"verify-exact", "Check the explicit pulsating front and plot it at several times"},
      {"speed", "Minimal speed, closed form and sandwich bounds for a list of media"},
      {"large-l", "Large-period limit of the minimal speed and its convergence rate"},
      {"simulate", "Integrate the Cauchy problem and measure the front speed"},
      {"eigen", "Principal eigenvalue k_lambda of the tilted operator"},
      {"sweep", "Speeds and bounds along a one-parameter family of media"},
  };
  for (const auto& [name, description] : commands) {
    auto* sub = app.add_subcommand(name, description);
    sub->add_option("-c,--config", inv.config_path, "JSON config merged over the defaults")
        ->check(CLI::ExistingFile);
    sub->add_option("-s,--set", inv.overrides, "Override a config entry, e.g. medium.eps=0.3");
    sub->add_option("-o,--output-dir", output_dir, "Output directory (default out/<command>)");
    sub->add_option("--seed", inv.seed, "Seed for randomized media");
    sub->add_flag("-q,--quiet", inv.quiet, "Only report errors");
    sub->callback([&inv, name = std::string(name)] { inv.command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kpp::cli::kExitConfigError;
  }
  inv.output_dir = output_dir;
  return kpp::cli::execute(inv, std::cout, std::cerr);
}
