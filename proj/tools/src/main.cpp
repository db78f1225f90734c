#include <iostream>

#include "CLI11.hpp"
#include "ultrajet/error.hpp"
#include "ultrajet_cli/jobs.hpp"

int main(int argc, char** argv) {
  using namespace ultrajet::cli;
  CLI::App app{"ultrajet: weight functions, weight matrices and ultradifferentiable jet extension"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::optional<std::size_t> K;
  std::vector<double> xi;
  std::optional<std::uint64_t> seed;
  for (const char* name : {"classify", "matrix", "extend", "cover-dump"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "job file (JSON)")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--k", K, "largest sequence index");
    sub->add_option("--xi", xi, "xi grid, comma separated")->delimiter(',');
    sub->add_option("--seed", seed, "sampling seed");
  }
  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  JobConfig cfg;
  try {
    cfg = load_config(config_path);
  } catch (const ultrajet::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kError;
  }
  if (!out_dir.empty()) cfg.output = out_dir;
  if (K) cfg.K = *K;
  if (!xi.empty()) cfg.xi_grid = xi;
  if (seed) cfg.seed = *seed;

  const auto r = run_job(command, cfg);
  if (r.exit_code == kError) {
    std::cerr << "error: " << r.summary << '\n';
    return kError;
  }
  try {
    write_outputs(cfg.output, r);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kError;
  }
  std::cout << command << ": " << r.summary << '\n';
  return r.exit_code;
}
