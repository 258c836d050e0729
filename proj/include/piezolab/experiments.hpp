#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "piezolab/config.hpp"

namespace piezolab {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode { kOk = 0, kFailure = 1, kConfigError = 2, kNumericalGuard = 3 };

struct Artifact {
  std::string name;
  std::string content;
};

struct RunContext {
  std::uint64_t seed = 1;
  unsigned jobs = 1;
  std::string manifest_name = "manifest.json";
};

const std::vector<std::string>& experiment_names();

// One experiment on a config without list-valued sweep keys.
std::vector<Artifact> run_experiment(const std::string& experiment,
                                     const Config& cfg, const RunContext& ctx);

// Cartesian product over comma-separated values of sweepable keys.
std::vector<Config> expand_sweep(const Config& cfg);

// Runs every sweep member, writes artifacts plus one manifest per run into
// out_dir (or the sole artifact to `out` and the manifest to `err` when no
// directory is given) and maps failures to exit codes.
int run_cli(const std::string& experiment, const Config& cfg,
            const std::optional<std::string>& out_dir, std::uint64_t seed,
            unsigned jobs, std::ostream& out, std::ostream& err);

std::string format_real(double v);

}  // namespace piezolab
