#include "llb/app.hpp"
#include "llb/config.hpp"
#include "llb/errors.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Spectral Galerkin LLB solver and audit harness"};
  app.require_subcommand(1);

  std::string run_config;
  auto* run = app.add_subcommand("run", "integrate one configuration and audit it");
  run->add_option("config", run_config, "config file")->required();

  std::string level = "quick";
  std::string fault = "none";
  std::string verify_out;
  auto* verify = app.add_subcommand("verify", "run the built-in verification battery");
  verify->add_option("--level", level, "quick or full")->check(CLI::IsMember({"quick", "full"}));
  verify->add_option("--inject-fault", fault, "deliberate defect for mutation testing")
      ->check(CLI::IsMember({"none", "kappa2-sign"}));
  verify->add_option("--out", verify_out, "directory for one JSON report per audit");

  std::string converge_config;
  std::string modes_text;
  double beta_bar = 0.0;
  double p_bar = 8.0;
  auto* converge = app.add_subcommand("converge", "Cauchy differences over a mode-count family");
  converge->add_option("config", converge_config, "config file")->required();
  converge->add_option("--modes", modes_text, "comma separated mode counts, e.g. 8,16,32,64")->required();
  auto* beta_opt = converge->add_option("--beta-bar", beta_bar, "X^{-beta} exponent of d_C");
  converge->add_option("--p-bar", p_bar, "time exponent of d_Lp");

  std::string map;
  llb::ProbeOptions probe_opts;
  std::string probe_config;
  auto* probe = app.add_subcommand("probe", "empirical Lipschitz ratio of F1, F2 or F3");
  probe->add_option("map", map, "F1, F2 or F3")->required();
  probe->add_option("--ball", probe_opts.ball, "L2 radius of the probe ball");
  probe->add_option("--samples", probe_opts.samples, "number of random pairs");
  probe->add_option("--seed", probe_opts.seed, "RNG seed");
  probe->add_option("--modes", probe_opts.modes, "1-D Neumann mode count when no config is given");
  probe->add_option("--config", probe_config, "take domain, model and modes from a config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return llb::kExitUsage;
  }

  if (*run) return llb::run_command(run_config, std::cout, std::cerr);
  if (*verify) {
    llb::VerifyOptions opts;
    opts.level = llb::parse_level(level);
    opts.fault = fault == "kappa2-sign" ? llb::Fault::flip_kappa2_sign : llb::Fault::none;
    opts.output_dir = verify_out;
    return llb::verify_command(opts, std::cout, std::cerr);
  }
  if (*converge) {
    llb::ConvergeOptions opts;
    try {
      opts.modes = llb::parse_int_list(modes_text);
    } catch (const llb::ConfigError& e) {
      std::cerr << "converge: --modes: " << e.what() << '\n';
      return llb::kExitUsage;
    }
    if (*beta_opt) opts.beta_bar = beta_bar;
    opts.p_bar = p_bar;
    return llb::converge_command(converge_config, opts, std::cout, std::cerr);
  }
  probe_opts.config = probe_config;
  return llb::probe_command(map, probe_opts, std::cout, std::cerr);
}
