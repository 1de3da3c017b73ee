#include <iostream>

#include <CLI11.hpp>

#include "gskdet/gskdet.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Fredholm determinants of the oscillatory generalized sine kernel "
               "and their closed-form large-x asymptotics"};
  app.require_subcommand(1);

  std::string config_path, out_path;

  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "configuration file (key = value lines)")
        ->required();
    sub->add_option("--out", out_path, "CSV output path (overrides config)");
  };

  CLI::App* selftest = app.add_subcommand("selftest", "run the built-in identity suites");
  CLI::App* det = app.add_subcommand("det", "compute det(I+V) for one configuration");
  add_config(det);
  CLI::App* asym = app.add_subcommand("asym", "evaluate the closed-form asymptotic factors");
  add_config(asym);
  CLI::App* compare =
      app.add_subcommand("compare", "sweep x and compare determinant against asymptotics");
  add_config(compare);
  CLI::App* rhp = app.add_subcommand("rhp", "parametrix and Pi residual report");
  add_config(rhp);

  CLI11_PARSE(app, argc, argv);

  try {
    if (selftest->parsed()) return gskdet::cli::cmd_selftest(std::cout);
    gskdet::RunConfig cfg = gskdet::RunConfig::parse_file(config_path);
    if (!out_path.empty()) cfg.out_path = out_path;
    if (det->parsed()) return gskdet::cli::cmd_det(cfg, std::cout);
    if (asym->parsed()) return gskdet::cli::cmd_asym(cfg, std::cout);
    if (compare->parsed()) return gskdet::cli::cmd_compare(cfg, std::cout);
    if (rhp->parsed()) return gskdet::cli::cmd_rhp(cfg, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
