#include "genusflow/cli_report.hpp"
#include "genusflow/error.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace genusflow;

int main(int argc, char** argv) {
  CLI::App app{"genusflow: symplectic flows on glued genus-g surfaces"};
  app.require_subcommand(1, 1);

  std::string config_path;
  cli::Overrides ov;
  std::string out;
  std::uint64_t seed = 0;
  int genus = 0;

  for (const auto& name : cli::subcommands()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "run configuration (JSON, schema 1)");
    sub->add_option("--out", out, "output directory");
    sub->add_option("--seed", seed, "rng seed override");
    sub->add_option("--genus", genus, "genus override");
  }

  CLI11_PARSE(app, argc, argv);
  const std::string subcommand = app.get_subcommands().front()->get_name();
  const auto* sub = app.get_subcommands().front();
  if (sub->count("--out")) ov.out = out;
  if (sub->count("--seed")) ov.seed = seed;
  if (sub->count("--genus")) ov.genus = genus;

  cli::RunConfig config;
  try {
    if (!config_path.empty()) config = cli::load_config(config_path);
    cli::apply(config, ov);
  } catch (const Error& e) {
    std::cout << cli::dump(cli::error_json(std::string(to_string(e.code())), e.what(), subcommand));
    return 2;
  }

  const auto outcome = cli::run(subcommand, config);
  std::cout << cli::dump(outcome.summary);
  return outcome.exit_code;
}
