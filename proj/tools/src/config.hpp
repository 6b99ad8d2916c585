#pragma once

#include "glearn/harness.hpp"

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace glearn::cli {

/// Schema or value errors in an experiment config. Carries every problem found.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const noexcept { return errors_; }

 private:
  std::vector<std::string> errors_;
};

struct ExperimentConfig {
  enum class Kind { sweep, real };
  Kind kind = Kind::sweep;
  std::uint64_t seed = 1;
  int jobs = 1;
  std::filesystem::path out_dir = ".";
  bool has_out_dir = false;

  TrialConfig trial;
  bool has_observed = false;  // trial.observed given explicitly
  SweepGrid grid;
  int trials = 100;
  RealExperimentConfig real;
};

/// Parses and validates a YAML document. Relative input paths resolve against
/// `base_dir`. Throws ConfigError listing every problem.
ExperimentConfig parse_experiment_config(const std::string& text, const std::filesystem::path& base_dir = ".");
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Copies seed and jobs into the nested trial and real-data settings.
void propagate_globals(ExperimentConfig& cfg);

}  // namespace glearn::cli
