#pragma once

#include "glearn/graph.hpp"
#include "glearn/observation.hpp"
#include "glearn/signal.hpp"
#include "glearn/solver.hpp"
#include "glearn/theory.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace glearn {

struct F1Result {
  double f1 = 0;
  double precision = 0;
  double recall = 0;
};

/// Edge-set F1 over unordered off-diagonal pairs. Two empty graphs score 1.
F1Result f1_score(const Graph& estimated, const Graph& truth);

/// Stations joined when their altitudes differ by strictly less than `threshold`.
Graph altitude_ground_truth(const std::vector<double>& altitudes, double threshold = 300.0);

// Graph sources for a trial.
struct ErModel {
  int nodes = 50;
  double p = 0.2;
};
struct KnnModel {
  int nodes = 20;
  int k = 5;
};
struct SbmModel {
  std::vector<int> sizes{10, 10};
  double p_in = 0.6;
  double p_out = 0.05;
};
struct FileGraph {
  std::filesystem::path path;
};
using GraphSpec = std::variant<ErModel, KnnModel, SbmModel, FileGraph>;

int node_count(const GraphSpec& spec);
Graph make_graph(const GraphSpec& spec, Rng& rng);
std::string describe(const GraphSpec& spec);

struct TrialConfig {
  GraphSpec graph = ErModel{};
  GraphFilter filter = HeatFilter{1.0};
  int signals = 200;
  int observed = 30;
  double lambda = 2.0;
  double tau = 0.1;
  std::uint64_t seed = 1;
  int K = 5;
  double delta = 0.1;
  SolverConfig solver{};
  /// Compute the bound report for each trial.
  bool theory = true;

  /// Throws InvalidArgument naming the first bad field.
  void validate() const;
};

struct StageTimes {
  double graph = 0;
  double signals = 0;
  double solve_partial = 0;
  double solve_full = 0;
  double theory = 0;
};

struct TrialResult {
  double f1_partial = 0;          // threshold(L_p*) vs true observed subgraph
  double f1_full_restricted = 0;  // threshold(E_o L* E_o') vs true observed subgraph
  double f1_partial_vs_full = 0;  // threshold(L_p*) vs threshold(E_o L* E_o')
  double ratio = 1;               // Jp(Lt_p) / Jp(Lp*)
  bool degenerate = false;
  std::string degenerate_reason;
  double jp_star = 0, jp_tilde = 0, jf_star = 0, jf_hat = 0;
  bool converged = true;
  /// Largest constraint violation over L*, Lp*, L-hat and Lt_p.
  double worst_constraint_violation = 0;
  std::optional<BoundReport> bound_report;
  std::vector<int> mask;
  StageTimes times;
  /// Hard invariant failures, empty when all held.
  std::vector<std::string> violations;
};

/// Failure in one stage of the trial pipeline.
class TrialError : public std::runtime_error {
 public:
  TrialError(std::string stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

/// Independent generator for (seed, stream, tag); equal arguments give equal streams.
Rng derive_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t tag);

/// graph -> spectrum -> signals -> mask -> partial and full solves ->
/// surrogates -> scores. Deterministic in cfg.seed.
TrialResult run_trial(const TrialConfig& cfg);

/// Same pipeline on a fixed graph and signal matrix (no synthesis).
struct FixedData {
  const Graph& truth;
  const Matrix& signals;
  /// Filter that produced `signals`, when known; enables residual terms.
  std::optional<GraphFilter> filter;
  std::optional<Matrix> excitations;
};
TrialResult run_trial_on(const FixedData& data, const ObservationMask& mask, const TrialConfig& cfg);

/// What varies across sweep columns besides n.
enum class SweepParam { none, alpha, beta };
std::string to_string(SweepParam p);
SweepParam parse_sweep_param(const std::string& s);

struct SweepGrid {
  std::vector<int> observed;
  SweepParam param = SweepParam::none;
  std::vector<double> values;
};

struct Quartiles {
  double q1 = 0, median = 0, q3 = 0;
};
/// Linear-interpolation quartiles; NaN entries when `xs` is empty.
Quartiles quartiles(std::vector<double> xs);

struct SweepRow {
  int n = 0;
  double param = 0;
  /// F1 of threshold(L_p*) against threshold of the observed part of L*.
  Quartiles f1_partial;
  /// F1 of threshold(L_p*) against the true observed subgraph.
  Quartiles f1_partial_truth;
  Quartiles ratio;
  int trials = 0;
  std::string failure;  // non-empty when the grid point was aborted
  std::vector<TrialResult> results;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<std::string> violations;
};

/// Every (n, value) point runs `trials` trials. Trial t uses seed stream t at
/// every point, so points share graphs and excitations trial by trial.
SweepResult run_sweep(const TrialConfig& base, const SweepGrid& grid, int trials, int jobs = 1);

std::string sweep_csv(const SweepResult& sweep);
std::string trial_log_csv(const SweepResult& sweep);

/// Station file: `station_id,altitude_m,temp_jan,...,temp_dec` with a header row.
struct StationData {
  std::vector<std::string> ids;
  std::vector<double> altitudes;
  Matrix readings;  // stations x months
};
StationData load_stations(const std::filesystem::path& path);

struct RealExperimentConfig {
  enum class Kind { congress, stations } kind = Kind::congress;
  std::filesystem::path input;
  int signals = 100;                                  // congress: synthesized realizations
  GraphFilter filter = ResolventFilter{1.0};          // congress: (I + L)^-1
  double altitude_threshold = 300.0;                  // stations
  std::vector<int> observed;                          // empty: Fig. 1 grid scaled to N
  int trials = 20;
  double lambda = 2.0;
  double tau = 0.1;
  std::uint64_t seed = 1;
  int jobs = 1;
};

struct RealRow {
  int n = 0;
  Quartiles f1_partial;
  Quartiles f1_full;
  int trials = 0;
  std::vector<std::string> violations;
};

std::vector<RealRow> run_real_experiment(const RealExperimentConfig& cfg);
std::string real_csv(const std::vector<RealRow>& rows);

/// n in {N/5, 1.5 N/5, ..., N} (the 10..50 grid for N = 50), deduplicated, each >= 2.
std::vector<int> default_observed_grid(int total);

}  // namespace glearn
