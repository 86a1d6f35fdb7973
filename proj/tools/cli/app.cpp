#include "app.hpp"

#include <functional>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

namespace wsr {

namespace {

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<std::string> out_dir;
};

using Command = std::function<int(const ExperimentConfig&, std::ostream&, std::ostream&)>;

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Warm-standby reliability analysis: exact solution, simulation, coupling and "
               "convergence certificates",
               "wsr"};
  app.require_subcommand(1);

  Flags flags;
  Command selected;
  const std::pair<const char*, Command> commands[] = {
      {"exact", cmd_exact},   {"simulate", cmd_simulate}, {"couple", cmd_couple},
      {"bounds", cmd_bounds}, {"verify", cmd_verify},
  };
  const char* descriptions[] = {
      "Transient and stationary solution of the exponential model",
      "Monte Carlo ensemble: availability, histograms, TV curve, epoch statistics",
      "Coupled runs: coupling times and tail curve",
      "Convergence-rate certificate (alpha, K)",
      "Simulate, couple and certify, then check the certificate dominates",
  };
  for (std::size_t k = 0; k < std::size(commands); ++k) {
    CLI::App* sub = app.add_subcommand(commands[k].first, descriptions[k]);
    sub->add_option("--config", flags.config, "Experiment config file")->required();
    sub->add_option("--seed", flags.seed, "Master seed, overrides [sim] seed");
    sub->add_option("--threads", flags.threads, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", flags.out_dir, "Output directory, overrides [output] directory");
    sub->callback([&selected, cmd = commands[k].second] { selected = cmd; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    ExperimentConfig cfg = load_config(flags.config);
    if (flags.seed) cfg.sim.master_seed = *flags.seed;
    if (flags.threads) cfg.sim.threads = *flags.threads;
    if (flags.out_dir) cfg.output.directory = *flags.out_dir;
    return selected(cfg, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kAssertionFailed;
  }
}

}  // namespace wsr
