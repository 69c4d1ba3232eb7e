#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Essential quantum correlations of two-mode light"};
  app.require_subcommand(1);
  app.fallthrough();

  cli::GlobalOptions g;
  app.add_option("--state", g.state, "State or ensemble: JSON file or inline JSON");
  app.add_option("--out", g.out, "Output directory");
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--cutoff", g.cutoff, "Fock cutoff per mode");
  app.add_flag("--no-timestamp", g.no_timestamp, "Omit the generated-at comment line");
  app.add_option("--tol", g.tol_overrides, "Tolerance override name=value (repeatable)");

  cli::Action action;
  cli::add_mgf_commands(app, action);
  cli::add_criteria_commands(app, action);
  cli::add_clicks_command(app, action);
  cli::add_reconstruct_command(app, action);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const cli::Context ctx(g);
    action(ctx);
  } catch (const esscorr::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const esscorr::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
