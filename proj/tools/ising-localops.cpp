#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <omp.h>

#include "CLI11.hpp"
#include "isingops/errors.hpp"
#include "isingops/suites.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks for local operators of the Ising field theory"};
  std::string suite, config, out;
  std::optional<unsigned long> seed;
  bool parallel = false;
  std::vector<std::string> choices = isingops::suite_names();
  choices.push_back("all");
  app.add_option("suite", suite, "suite to run")->required()->check(CLI::IsMember(choices));
  app.add_option("--config", config, "config file (JSON or key = value)")->required();
  app.add_option("--out", out, "output directory for JSON/CSV reports");
  app.add_option("--seed", seed, "random seed (default 1)");
  app.add_flag("--parallel", parallel, "enable OpenMP kernels");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  isingops::RunConfig cfg;
  try {
    cfg = isingops::load_config(config);
    if (!out.empty()) cfg.out_dir = out;
    if (seed) cfg.seed = *seed;
    if (parallel) cfg.parallel = true;
    cfg.validate();
  } catch (const std::exception& e) {
    std::cerr << "invalid config: " << e.what() << "\n";
    return 2;
  }
  if (!cfg.parallel) omp_set_num_threads(1);

  try {
    const int rc = isingops::run_suite(cfg, suite);
    std::cout << suite << ": " << (rc == 0 ? "pass" : "FAIL") << " (reports in " << cfg.out_dir << ")\n";
    return rc;
  } catch (const isingops::InvalidArgument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
