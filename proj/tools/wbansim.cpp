// wbansim: command line entry point.
#include <iostream>

#include "CLI11.hpp"

#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace wban::cli;
  CLI::App app{"WBAN coexistence simulator: OCAIM, SMS and OS"};
  app.require_subcommand(1);

  Options opt;
  std::string seeds, protocols;
  std::size_t workers = 0;
  auto common = [&](CLI::App* sub, bool needs_config) {
    auto* c = sub->add_option("--config", opt.config_path, "experiment config (JSON)");
    if (needs_config) c->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out_dir, "output directory (overrides the config)");
    sub->add_option("--seeds", seeds, "seed count N, range A-B or list a,b,c");
    sub->add_option("--workers", workers, "parallel runs")->check(CLI::PositiveNumber);
    sub->add_option("--protocols", protocols, "comma separated: OCAIM,SMS,OS");
  };

  auto* validate = app.add_subcommand("validate", "check a config file");
  common(validate, true);

  std::string figure_name;
  auto* figure = app.add_subcommand("figure", "reproduce one evaluation figure");
  figure->add_option("name", figure_name, "figure name")
      ->required()
      ->check(CLI::IsMember(kFigureNames));
  common(figure, true);

  auto* golden = app.add_subcommand("golden", "run the three-WBAN worked example");
  golden->add_option("--fixture", opt.fixture_path, "golden fixture (JSON)");
  golden->add_option("--out", opt.out_dir, "write the OCAIM trace here");

  auto* sweep = app.add_subcommand("sweep", "run the config's sweep");
  common(sweep, true);
  sweep->add_flag("--rounds", opt.write_rounds, "also write per-run round CSVs");

  auto* analytics = app.add_subcommand("analytics", "closed-form curves only");
  common(analytics, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kValidationFailure;
  }

  try {
    if (!seeds.empty()) opt.seeds = parse_seeds(seeds);
    if (!protocols.empty()) opt.protocols = parse_protocols(protocols);
  } catch (const std::exception& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kValidationFailure;
  }
  if (workers > 0) opt.workers = workers;

  if (*validate) return cmd_validate(opt, std::cout, std::cerr);
  if (*figure) return cmd_figure(figure_name, opt, std::cout, std::cerr);
  if (*golden) return cmd_golden(opt, std::cout, std::cerr);
  if (*sweep) return cmd_sweep(opt, std::cout, std::cerr);
  return cmd_analytics(opt, std::cout, std::cerr);
}
