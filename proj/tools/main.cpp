#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"pcurl: Sobolev-curl minimization, constants and verification"};
  app.fallthrough();
  app.require_subcommand(1);

  std::string config_path, out_dir = "out";
  long long seed = -1;
  std::vector<std::string> sets;
  app.add_option("--config", config_path, "key=value config file")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_option("--seed", seed, "random seed (overrides config and environment)")->check(CLI::NonNegativeNumber);
  app.add_option("--set", sets, "key=value override, repeatable");

  auto* minimize = app.add_subcommand("minimize", "minimize J on the Nehari set; writes minimize.csv and field.pcrl");
  auto* constants = app.add_subcommand("constants", "sweep p_list; S_p, H_p, S_curl and symmetric constants");
  auto* verify = app.add_subcommand("verify", "closed-form identities and convergence sweeps");
  auto* decompose = app.add_subcommand("decompose", "Helmholtz split, w(v) and O-frame parts of input");

  CLI11_PARSE(app, argc, argv);

  try {
    pcurl::Config cfg = pcurl::Config::defaults();
    if (!config_path.empty()) cfg.load_file(config_path);
    cfg.load_env();
    if (seed >= 0) cfg.set("seed", std::to_string(seed));
    for (const auto& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
      cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }

    if (minimize->parsed()) return pcurl::cli::cmd_minimize(cfg, out_dir, std::cout);
    if (constants->parsed()) return pcurl::cli::cmd_constants(cfg, out_dir, std::cout);
    if (verify->parsed()) return pcurl::cli::cmd_verify(cfg, out_dir, std::cout);
    if (decompose->parsed()) return pcurl::cli::cmd_decompose(cfg, out_dir, std::cout);
  } catch (const std::exception& ex) {
    std::cerr << "pcurl: error: " << ex.what() << '\n';
    return 2;
  }
  return 2;
}
