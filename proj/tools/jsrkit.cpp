#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "jsr/cli.hpp"
#include "jsr/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"jsrkit: joint spectral radius bounds, splittings and symbolic diagnostics"};
  jsr::RunConfig config;
  std::string command;
  std::string gamma;
  double rho_hat = 0.0;

  app.add_option("command", command, "bounds | pruned | splitting | sturmian | epsilon | convergence")->required();
  app.add_option("--input", config.input, "matrix-set or orbit-closure JSON file");
  app.add_option("--out", config.out, "CSV report path (metadata goes to <out>.json)")->required();
  app.add_option("--max-depth", config.max_depth, "deepest word length / horizon / n");
  app.add_option("--norm", config.norm, "euclidean or adapted");
  app.add_option("--adapted-depth", config.adapted_depth, "depth of the adapted norm");
  auto* rho_opt = app.add_option("--rho-hat", rho_hat, "scale for adapted norms and splittings");
  app.add_option("--delta", config.delta, "target width for pruned bounds");
  app.add_option("--gamma", gamma, "Sturmian convergents p1/q1,p2/q2,...");
  app.add_option("--seed", config.seed, "seed for sampled checks");
  app.add_option("--workers", config.workers, "parallel workers for word enumeration");
  app.add_option("--word", config.word, "periodic cycle for splitting, e.g. 0-1");
  app.add_flag("--svg", config.svg, "also write <out>.svg (gap vs n, log-log)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : jsr::kExitInput;
  }

  try {
    config.command = jsr::parse_command(command);
    if (rho_opt->count() > 0) config.rho_hat = rho_hat;
    if (!gamma.empty()) {
      std::stringstream in(gamma);
      std::string item;
      while (std::getline(in, item, ',')) config.gamma.push_back(jsr::parse_rational(item));
    }
    if (const char* env = std::getenv("JSRKIT_BUDGET")) {
      const std::string text(env);
      std::size_t used = 0;
      const unsigned long long value = std::stoull(text, &used);
      if (used != text.size() || value == 0) throw jsr::ValueError("JSRKIT_BUDGET must be a positive integer");
      config.budget = value;
    }
  } catch (const std::exception& e) {
    std::cerr << "jsrkit: exit=" << jsr::kExitInput << " kind=input_error message=\"" << e.what() << "\"\n";
    return jsr::kExitInput;
  }
  return jsr::run(config, std::cerr);
}
