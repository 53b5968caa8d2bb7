#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "sbtheta/cli_io.hpp"

using namespace sbtheta;

int main(int argc, char** argv) {
  CLI::App app{"Finite-gap solutions of the stationary Szego-Baxter hierarchy via theta functions"};
  app.require_subcommand(1);

  std::string config_path;
  std::string sequences_path;
  std::string format;
  std::string out_path;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;

  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* c = sub->add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    if (config_required) c->required();
    sub->add_option("--out", out_path, "output file (default: stdout)");
    sub->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--tol-acceptance", tol, "override acceptance tolerances")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "seed for randomized checks");
  };

  auto* curve_info = app.add_subcommand("curve-info", "genus, g_{p+1}, cuts and period matrix");
  auto* periods = app.add_subcommand("periods", "a-periods, normalization and tau");
  auto* theta_eval = app.add_subcommand("theta-eval", "Riemann theta at the config's theta.z points");
  auto* solve = app.add_subcommand("solve", "alpha(n), beta(n) with a verification report");
  auto* genus0 = app.add_subcommand("genus0", "genus-0 closed form with a verification report");
  auto* verify = app.add_subcommand("verify", "hierarchy residuals on supplied sequences");
  for (auto* sub : {curve_info, periods, theta_eval, solve, genus0}) add_common(sub, true);
  add_common(verify, false);
  verify->add_option("--sequences", sequences_path, "sequences file (JSON or CSV)")
      ->required()
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  CommandOptions opt{out_path, format, tol, seed, sequences_path};
  try {
    if (verify->parsed()) {
      std::optional<RunConfig> cfg;
      if (!config_path.empty()) cfg = load_config(config_path);
      return cmd_verify(cfg, opt, std::cout);
    }
    const RunConfig cfg = load_config(config_path);
    if (curve_info->parsed()) return cmd_curve_info(cfg, opt, std::cout);
    if (periods->parsed()) return cmd_periods(cfg, opt, std::cout);
    if (theta_eval->parsed()) return cmd_theta_eval(cfg, opt, std::cout);
    if (solve->parsed()) return cmd_solve(cfg, opt, std::cout);
    if (genus0->parsed()) return cmd_genus0(cfg, opt, std::cout);
  } catch (const Error& e) {
    std::cerr << "error [" << module_of(e.code()) << "::" << to_string(e.code()) << "] " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
