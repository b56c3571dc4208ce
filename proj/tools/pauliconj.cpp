// Command-line front end: registry listing, fidelity sweeps, conjugation search,
// concatenation thresholds, multi-round scenarios and gate-noise runs.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "pauliconj/cli.hpp"

namespace {

using pauliconj::cli::RunConfig;

struct Flags {
  std::optional<std::string> code, theta_start, theta_stop, out, format, report, direction, config;
  std::optional<int> theta_points, k, levels;
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> seed;
  std::optional<double> p_gate;
  std::vector<std::string> schemes;
  bool echo = false;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--code", f.code, "registry name (five_qubit, steane, shor_z, shor_x, surface3) or a .json code file");
  sub->add_option("--theta-start", f.theta_start, "first angle in radians; accepts forms like pi/8");
  sub->add_option("--theta-stop", f.theta_stop, "last angle in radians");
  sub->add_option("--theta-points", f.theta_points, "number of grid points");
  sub->add_option("--scheme", f.schemes, "none, twirl, conj:<pauli>, ltwirl:<pauli> or all (repeatable)");
  sub->add_option("--k", f.k, "round count");
  sub->add_option("--trials", f.trials, "Monte Carlo trials");
  sub->add_option("--seed", f.seed, "64-bit seed for stochastic commands");
  sub->add_option("--p-gate", f.p_gate, "depolarizing probability per gate");
  sub->add_option("--out", f.out, "output path (default stdout)");
  sub->add_option("--format", f.format, "csv or json");
  sub->add_option("--config", f.config, "JSON config file; flags override it");
  sub->add_option("--levels", f.levels, "threshold: concatenation levels in the curve output");
  sub->add_option("--report", f.report, "threshold: report path (.json or .csv)");
  sub->add_option("--direction", f.direction, "multiround: fixed or random_walk");
  sub->add_flag("--echo", f.echo, "multiround: reverse the rotation on every other round");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pauli conjugation and twirling of coherent noise on small stabilizer codes"};
  app.require_subcommand(1);
  Flags f;
  const std::pair<const char*, const char*> commands[] = {
      {"codes", "list registry codes, or export one as JSON"},
      {"sweep", "logical fidelity against theta for each scheme"},
      {"search", "symmetry classes of the twirl set and the best conjugation"},
      {"threshold", "concatenation level curves and crossing angles"},
      {"multiround", "fidelity after k rounds of noise and correction"},
      {"noisy", "Monte Carlo fidelity with depolarizing gate faults"},
  };
  for (const auto& [name, what] : commands) add_common(app.add_subcommand(name, what), f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return pauliconj::cli::kUsage;
  }

  RunConfig cfg;
  try {
    if (f.config) pauliconj::cli::load_config_file(cfg, *f.config);
    cfg.command = app.get_subcommands().front()->get_name();
    if (f.code) cfg.code = *f.code;
    if (f.theta_start) cfg.theta_start = pauliconj::parse_angle(*f.theta_start);
    if (f.theta_stop) cfg.theta_stop = pauliconj::parse_angle(*f.theta_stop);
    if (f.theta_points) cfg.theta_points = *f.theta_points;
    if (!f.schemes.empty()) cfg.schemes = f.schemes;
    if (f.k) cfg.k = *f.k;
    if (f.trials) cfg.trials = *f.trials;
    if (f.seed) cfg.seed = *f.seed;
    if (f.p_gate) cfg.p_gate = *f.p_gate;
    if (f.out) cfg.out = *f.out;
    if (f.format) cfg.format = *f.format;
    if (f.levels) cfg.levels = *f.levels;
    if (f.report) cfg.report = *f.report;
    if (f.direction) cfg.direction = *f.direction;
    if (f.echo) cfg.echo = true;
  } catch (const std::exception& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return pauliconj::cli::kUsage;
  }
  return pauliconj::cli::run(cfg, std::cout, std::cerr);
}
