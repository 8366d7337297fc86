#include "holoflow/experiment.hpp"
#include "holoflow/parallel.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>

namespace {

struct Options {
  std::string config;
  std::string out = ".";
  int threads = 1;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
};

int run(const Options& opt, const std::optional<holoflow::ExperimentId>& expected) {
  using namespace holoflow;
  ExperimentConfig cfg;
  try {
    cfg = load_config(opt.config);
    if (expected && cfg.id != *expected)
      throw ConfigError(fmt::format("config is for '{}', not '{}'", to_string(cfg.id), to_string(*expected)));
    if (opt.seed) cfg.seed = opt.seed;
    if (opt.tol) {
      if (!(*opt.tol > 0.0)) throw ConfigError("--tol must be positive");
      cfg.tol = *opt.tol;
    }
    set_thread_count(opt.threads);
  } catch (const Error& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return 2;
  }

  try {
    const RunReport rep = run_experiment(cfg);
    const auto written = write_csv(rep, std::filesystem::path(opt.out) / cfg.output);
    fmt::print("{}", rep.summary());
    for (const auto& p : written) fmt::print("wrote {}\n", p.string());
    return rep.pass() ? 0 : 1;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Experiments with holomorphic maps on the poly-half-plane and the translation flow"};
  app.require_subcommand(1);

  Options opt;
  std::optional<holoflow::ExperimentId> expected;
  auto add_flags = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config, "experiment config (YAML)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out, "output directory");
    sub->add_option("--threads", opt.threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--seed", opt.seed, "override the config seed");
    sub->add_option("--tol", opt.tol, "override the config tolerance");
  };

  add_flags(app.add_subcommand("run", "run any config"));
  for (const char* name :
       {"flow-orbit", "average-convergence", "defect-scan", "equivariance", "rigidity", "entire-demo", "periodicity"}) {
    CLI::App* sub = app.add_subcommand(name, fmt::format("run a {} config", name));
    add_flags(sub);
    sub->callback([&expected, name] { expected = holoflow::experiment_from_string(name); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  return run(opt, expected);
}
