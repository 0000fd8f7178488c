#include <crdeg/crdeg.h>

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

int main(int argc, char** argv) {
  CLI::App app{"Degeneracy invariants of formal maps between generic submanifolds"};
  app.set_version_flag("--version", std::string(crdeg_version()));
  std::string command;
  std::vector<std::string> files;
  int order = -1, kmax = -1, levels = -1, trials = -1;
  uint64_t seed = 0;
  bool as_json = false;
  app.add_option("command", command,
                 "check | degeneracy | constancy | holvf | segre | finite-type | basic-identity | "
                 "basic-identity-1deg | jets")
      ->required();
  app.add_option("files", files, "problem file(s); jets takes two")->required()->expected(1, 2);
  app.add_option("--order", order, "working truncation order")->check(CLI::PositiveNumber);
  app.add_option("--kmax", kmax, "highest CR-derivative level")->check(CLI::NonNegativeNumber);
  app.add_option("--levels", levels, "Segre levels for finite-type and segre")->check(CLI::NonNegativeNumber);
  app.add_option("--trials", trials, "random points per search")->check(CLI::PositiveNumber);
  auto* seed_opt = app.add_option("--seed", seed, "seed for all randomness (default 0)");
  app.add_flag("--json", as_json, "machine-readable report");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : CRDEG_E_USAGE;
  }

  crdeg_options opt;
  crdeg_options_init(&opt);
  opt.order = order;
  opt.k_max = kmax;
  opt.levels = levels;
  opt.trials = trials;
  opt.has_seed = seed_opt->count() > 0;
  opt.seed = seed;
  opt.json = as_json;

  std::vector<const char*> paths;
  for (const auto& f : files) paths.push_back(f.c_str());
  crdeg_report* rep = nullptr;
  crdeg_status st = crdeg_run_files(command.c_str(), paths.data(), paths.size(), &opt, &rep);
  if (!rep) {
    std::cerr << "crdeg: " << crdeg_last_error() << "\n";
    return st == CRDEG_OK ? CRDEG_E_INTERNAL : st;
  }
  // error reports go to stderr in text mode; JSON always on stdout
  std::FILE* sink = (st != CRDEG_OK && !as_json) ? stderr : stdout;
  std::fputs(crdeg_report_text(rep), sink);
  crdeg_report_free(rep);
  return st;
}
