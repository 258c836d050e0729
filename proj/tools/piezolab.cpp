// piezolab: command-line front end for the piezoelectric beam laboratory.
#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <optional>

#include "piezolab/experiments.hpp"

using namespace piezolab;

namespace {

// Flag values land in the config under `key`, overriding the file.
struct Overrides {
  std::map<std::string, std::string> values;

  void add(CLI::App* app, const std::string& flag, const std::string& key,
           const std::string& help) {
    app->add_option_function<std::string>(
        flag, [this, key](const std::string& v) { values[key] = v; }, help);
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"piezoelectric beam laboratory: spectra, gaps, simulation, observability, decay"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::string> out_dir;
  std::uint64_t seed = 1;
  unsigned jobs = 1;
  app.add_option("--config", config_path, "key = value config file");
  app.add_option("--out", out_dir, "output directory (default: artifact to stdout, manifest to stderr)");
  app.add_option("--seed", seed, "random seed")->capture_default_str();
  app.add_option("--jobs", jobs, "concurrent workers")->check(CLI::PositiveNumber);

  Overrides ov;

  auto* spectrum = app.add_subcommand("spectrum", "sorted frequencies of both branches");
  ov.add(spectrum, "--modes", "modes", "modes per branch N");

  auto* gaps = app.add_subcommand("gaps", "minimal spectral gap and fitted gap constant");
  ov.add(gaps, "--modes", "modes", "N, or a comma list for a sweep");
  ov.add(gaps, "--alpha", "alpha", "gap exponent (>= 1)");
  ov.add(gaps, "--tau-prime", "tau_prime", "near-collision threshold");

  auto* observe = app.add_subcommand("observe", "observability quotients over a random ensemble");
  ov.add(observe, "--T", "T", "observation time");
  ov.add(observe, "--theta", "theta", "norm index of the denominator");
  ov.add(observe, "--modes", "modes", "modes per branch");
  ov.add(observe, "--ensemble", "ensemble", "number of random states");
  ov.add(observe, "--theta-gen", "theta_gen", "coefficient decay |2j-1|^-theta_gen");

  auto add_sim = [&](CLI::App* sc) {
    ov.add(sc, "--dx", "dx", "grid spacing (snapped to L/n)");
    ov.add(sc, "--cfl", "cfl", "CFL number in (0, 1)");
    ov.add(sc, "--T", "T", "final time");
    ov.add(sc, "--init", "init", "mode k j | random-modal N [seed] | file PATH");
    ov.add(sc, "--sample-dt", "sample_dt", "trace sampling interval");
    ov.add(sc, "--theta-gen", "theta_gen", "random-modal coefficient decay");
  };
  auto* simulate = app.add_subcommand("simulate", "finite-difference run, energy trace CSV");
  add_sim(simulate);
  simulate->add_flag_callback("--damped", [&] { ov.values["damped"] = "true"; }, "closed loop");
  simulate->add_flag_callback("--undamped", [&] { ov.values["damped"] = "false"; }, "open loop");

  auto* decay = app.add_subcommand("decay", "damped run plus decay-rate fit");
  add_sim(decay);
  ov.add(decay, "--window", "window", "fit window t_a,t_b");

  auto* dio = app.add_subcommand("diophantine", "continued fraction and approximation class");
  ov.add(dio, "--x", "x", "p/q, (a+b*sqrt(c))/d or a decimal string");
  ov.add(dio, "--liouville", "liouville", "use sum base^-n! up to n = k instead of --x");
  ov.add(dio, "--base", "base", "Liouville base 2, 3, 5 or 10");
  ov.add(dio, "--depth", "depth", "partial quotients requested");
  ov.add(dio, "--qmax", "qmax", "odd-approximation scan bound (0 = skip)");
  ov.add(dio, "--precision", "precision", "decimal working precision in digits");

  auto* check = app.add_subcommand("check", "inequality checks: gram | ammari | interpolation");
  std::string mode;
  check->add_option("mode", mode, "gram | ammari | interpolation")->required();
  ov.add(check, "--exponents", "exponents", "comma list of exponents (gram)");
  ov.add(check, "--T", "T", "interval length (gram)");
  ov.add(check, "--tau-prime", "tau_prime", "chain threshold (gram)");
  check->add_flag_callback("--divided", [&] { ov.values["divided"] = "true"; }, "use divided differences");
  ov.add(check, "--C", "C", "Ammari constant C");
  ov.add(check, "--alpha", "alpha", "Ammari exponent alpha");
  ov.add(check, "--E0", "E0", "Ammari initial value");
  ov.add(check, "--K", "K", "Ammari sequence length");
  ov.add(check, "--f", "f", "comma list of weights (interpolation)");
  ov.add(check, "--epsilon", "epsilon", "epsilon in [0, 1/2)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfigError;
  }

  Config cfg;
  try {
    if (!config_path.empty()) cfg = Config::load(config_path);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  }
  for (const auto& [k, v] : ov.values) cfg.set(k, v);
  if (!mode.empty()) cfg.set("mode", mode);

  const std::string name = app.get_subcommands().front()->get_name();
  return run_cli(name, cfg, out_dir, seed, jobs, std::cout, std::cerr);
}
