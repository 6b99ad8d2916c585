#include "app.hpp"

#include "config.hpp"
#include "glearn/error.hpp"
#include "glearn/harness.hpp"
#include "glearn/version.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

namespace glearn::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

class InvariantViolation : public std::runtime_error {
 public:
  explicit InvariantViolation(const std::vector<std::string>& violations)
      : std::runtime_error(message(violations)) {}

 private:
  static std::string message(const std::vector<std::string>& v) {
    std::string msg = fmt::format("{} hard invariant violation{}:", v.size(), v.size() == 1 ? "" : "s");
    const std::size_t shown = std::min<std::size_t>(v.size(), 20);
    for (std::size_t i = 0; i < shown; ++i) msg += "\n  " + v[i];
    if (shown < v.size()) msg += fmt::format("\n  ... and {} more", v.size() - shown);
    return msg;
  }
};

enum class Report { csv, json };

struct Globals {
  std::uint64_t seed = 1;
  int jobs = 1;
  std::string out_dir = ".";
  Report report = Report::csv;
  // set when given on the command line
  bool seed_set = false, jobs_set = false, out_dir_set = false;
};

// Stream tags shared with the trial pipeline, so `gen-graph --seed s` draws the
// same graph as trial seed s.
constexpr std::uint64_t kGraphTag = 1;
constexpr std::uint64_t kSignalTag = 2;
constexpr std::uint64_t kMaskTag = 3;

// Collects every output of a command and writes them at the end, one file at
// a time through a temporary name.
class OutputWriter {
 public:
  explicit OutputWriter(fs::path dir) : dir_(std::move(dir)) {}

  void add(const std::string& name, std::string content) { files_[name] = std::move(content); }

  void commit(std::ostream& log) const {
    fs::create_directories(dir_);
    for (const auto& [name, content] : files_) {
      const fs::path target = dir_ / name;
      const fs::path tmp = dir_ / (name + ".tmp");
      {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
      }
      fs::rename(tmp, target);
      log << "wrote " << target.string() << "\n";
    }
  }

 private:
  fs::path dir_;
  std::map<std::string, std::string> files_;
};

json provenance(const std::string& command, const Globals& g, json params) {
  json j;
  j["tool"] = "glearn";
  j["version"] = kVersion;
  j["command"] = command;
  j["seed"] = g.seed;
  j["params"] = std::move(params);
  return j;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string fmt_num(double v) { return fmt::format("{:.17g}", v); }

json filter_json(const GraphFilter& f) {
  return std::visit(
      [](const auto& x) -> json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, HeatFilter>) return {{"kind", "heat"}, {"alpha", x.alpha}};
        else if constexpr (std::is_same_v<T, ResolventFilter>) return {{"kind", "resolvent"}, {"beta", x.beta}};
        else if constexpr (std::is_same_v<T, PolynomialFilter>)
          return {{"kind", "polynomial"}, {"coefficients", x.coefficients}};
        else return {{"kind", "ideal_lowpass"}, {"cutoff", x.cutoff}};
      },
      f);
}

std::string edge_list_text(const Graph& g) {
  std::ostringstream ss;
  write_edge_list(g, ss);
  return ss.str();
}

Graph graph_from_laplacian(const Matrix& L) {
  Matrix adj = (-L).cwiseMax(0.0);
  adj.diagonal().setZero();
  return Graph(adj);
}

std::string mask_csv(const ObservationMask& mask) {
  std::string out = "local,node\n";
  for (int i = 0; i < mask.size(); ++i) out += fmt::format("{},{}\n", i, mask.observed()[i]);
  return out;
}

// Single-row table rendered as CSV or as one JSON object.
std::string record(const std::vector<std::pair<std::string, json>>& fields, Report report) {
  if (report == Report::json) {
    json j;
    for (const auto& [k, v] : fields) j[k] = v;
    return dump(j);
  }
  std::string head, row;
  for (const auto& [k, v] : fields) {
    head += (head.empty() ? "" : ",") + k;
    std::string cell;
    if (v.is_number_float()) cell = fmt_num(v.get<double>());
    else if (v.is_boolean()) cell = v.get<bool>() ? "1" : "0";
    else if (v.is_string()) cell = v.get<std::string>();
    else cell = v.dump();
    row += (row.empty() ? "" : ",") + cell;
  }
  return head + "\n" + row + "\n";
}

const char* ext(Report r) { return r == Report::json ? "json" : "csv"; }

// ---- filter flags shared by gen-signals -------------------------------------

struct FilterFlags {
  std::string kind = "heat";
  double alpha = 1.0;
  double beta = 1.0;
  std::vector<double> coefficients;
  int cutoff = 1;

  void attach(CLI::App* cmd) {
    cmd->add_option("--filter", kind, "Filter family")
        ->check(CLI::IsMember({"heat", "resolvent", "polynomial", "ideal_lowpass"}))
        ->capture_default_str();
    cmd->add_option("--alpha", alpha, "Heat filter rate: h(l) = exp(-alpha l)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--beta", beta, "Resolvent filter scale: h(l) = 1/(1 + beta l)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--coefficients", coefficients, "Polynomial coefficients c0,c1,... (ascending powers)")
        ->delimiter(',');
    cmd->add_option("--cutoff", cutoff, "Ideal low-pass passband size K")->check(CLI::PositiveNumber)->capture_default_str();
  }

  GraphFilter build() const {
    GraphFilter f;
    if (kind == "heat") f = HeatFilter{alpha};
    else if (kind == "resolvent") f = ResolventFilter{beta};
    else if (kind == "polynomial") f = PolynomialFilter{coefficients};
    else f = IdealLowpassFilter{cutoff};
    validate_filter(f);
    return f;
  }
};

// ---- gen-graph --------------------------------------------------------------

struct GenGraphArgs {
  std::string model;
  int nodes = 50;
  double p = 0.2;
  int k = 5;
  std::vector<int> sizes{10, 10};
  double p_in = 0.6;
  double p_out = 0.05;
  std::string input;
  std::string output = "graph.csv";
};

int cmd_gen_graph(const GenGraphArgs& a, const Globals& g, std::ostream& out) {
  Rng rng = derive_rng(g.seed, 0, kGraphTag);
  OutputWriter writer(g.out_dir);
  json params;
  params["model"] = a.model;
  std::optional<Graph> graph;
  if (a.model == "er") {
    params["nodes"] = a.nodes;
    params["p"] = a.p;
    graph = generate_er(a.nodes, a.p, rng);
  } else if (a.model == "knn") {
    params["nodes"] = a.nodes;
    params["k"] = a.k;
    KnnSample s = generate_knn_with_points(a.nodes, a.k, rng);
    std::ostringstream pts;
    write_points(s.points, pts);
    writer.add("points.csv", pts.str());
    graph = std::move(s.graph);
  } else if (a.model == "sbm") {
    params["sizes"] = a.sizes;
    params["p_in"] = a.p_in;
    params["p_out"] = a.p_out;
    graph = generate_sbm(a.sizes, a.p_in, a.p_out, rng);
  } else {
    if (a.input.empty()) throw InvalidArgument("--input: required for model 'file'");
    params["input"] = a.input;
    graph = load_edge_list(a.input);
  }
  writer.add(a.output, edge_list_text(*graph));
  writer.add(fs::path(a.output).stem().string() + ".provenance.json", dump(provenance("gen-graph", g, params)));
  writer.commit(out);
  out << fmt::format("nodes={} edges={} connected={}\n", graph->n_nodes(), graph->edge_count(),
                     graph->is_connected() ? "yes" : "no");
  return kExitOk;
}

// ---- gen-signals ------------------------------------------------------------

struct GenSignalsArgs {
  std::string graph;
  FilterFlags filter;
  int count = 200;
  std::string output = "signals.csv";
};

int cmd_gen_signals(const GenSignalsArgs& a, const Globals& g, std::ostream& out) {
  const GraphFilter f = a.filter.build();
  const Graph graph = load_edge_list(a.graph);
  const Spectrum spec = eigendecompose(build_laplacian(graph));
  Rng rng = derive_rng(g.seed, 0, kSignalTag);
  const SignalMatrix s = generate_signals(spec, f, a.count, rng);

  OutputWriter writer(g.out_dir);
  std::ostringstream sig, exc;
  write_signals(s.signals(), sig);
  write_signals(s.excitations(), exc);
  writer.add(a.output, sig.str());
  writer.add("excitations.csv", exc.str());
  json params{{"graph", a.graph}, {"filter", filter_json(f)}, {"count", a.count}, {"nodes", graph.n_nodes()}};
  writer.add(fs::path(a.output).stem().string() + ".provenance.json", dump(provenance("gen-signals", g, params)));
  writer.commit(out);
  out << fmt::format("signals={} nodes={} filter={}\n", s.count(), s.nodes(), describe(f));
  return kExitOk;
}

// ---- learn ------------------------------------------------------------------

struct LearnArgs {
  std::string signals;
  int observe = 0;
  double lambda = 2.0;
  int max_iters = SolverConfig{}.max_iters;
  double rel_tol = SolverConfig{}.rel_tol;
  double tau = 0.1;
  std::string truth;
  int K = 5;
  double delta = 0.1;
};

int cmd_learn(const LearnArgs& a, const Globals& g, std::ostream& out) {
  const Matrix y = load_signals(a.signals);
  const int total = static_cast<int>(y.cols());
  if (a.observe != 0 && (a.observe < 2 || a.observe > total))
    throw InvalidArgument(fmt::format("--observe: n = {} not in [2, {}]", a.observe, total));
  if (total < 2) throw InvalidArgument("--signals: need at least two nodes (columns)");

  SolverConfig solver;
  solver.lambda = a.lambda;
  solver.max_iters = a.max_iters;
  solver.rel_tol = a.rel_tol;

  std::optional<ObservationMask> mask;
  Matrix yo = y;
  if (a.observe != 0) {
    Rng rng = derive_rng(g.seed, static_cast<std::uint64_t>(a.observe), kMaskTag);
    mask = sample_observation(total, a.observe, rng);
    yo = restrict_signals(*mask, y);
  }
  const SolveResult res = solve_gl_sigrep(yo, solver);
  const int n = static_cast<int>(yo.cols());

  OutputWriter writer(g.out_dir);
  writer.add("learned.csv", edge_list_text(graph_from_laplacian(res.laplacian)));
  if (mask) writer.add("mask.csv", mask_csv(*mask));
  const auto rep = validate_in_laplacian_set(res.laplacian, n, 1e-8);
  writer.add(fmt::format("solve.{}", ext(g.report)),
             record({{"nodes", n},
                     {"total_nodes", total},
                     {"signals", static_cast<int>(y.rows())},
                     {"lambda", a.lambda},
                     {"objective", res.objective},
                     {"iterations", res.iterations},
                     {"converged", res.converged},
                     {"kkt_residual", res.kkt_residual},
                     {"duality_gap", res.duality_gap},
                     {"edges", threshold_edges(res.laplacian, a.tau).graph.edge_count()},
                     {"laplacian_set_ok", rep.ok()}},
                    g.report));

  std::vector<std::string> violations;
  if (!rep.ok()) violations.push_back("learned Laplacian outside the Laplacian set: " + rep.summary());
  if (!a.truth.empty()) {
    const Graph truth = load_edge_list(a.truth, total);
    if (truth.n_nodes() != total)
      throw InvalidArgument(fmt::format("--truth: {} nodes but signals have {}", truth.n_nodes(), total));
    TrialConfig cfg;
    cfg.lambda = a.lambda;
    cfg.tau = a.tau;
    cfg.K = a.K;
    cfg.delta = a.delta;
    cfg.solver = solver;
    cfg.theory = mask.has_value() && a.K < total;
    const ObservationMask m = mask ? *mask : ObservationMask::full(total);
    const TrialResult tr = run_trial_on(FixedData{truth, y, std::nullopt, std::nullopt}, m, cfg);
    violations.insert(violations.end(), tr.violations.begin(), tr.violations.end());
    std::vector<std::pair<std::string, json>> score{{"f1_partial", tr.f1_partial},
                                                    {"f1_full_restricted", tr.f1_full_restricted},
                                                    {"f1_partial_vs_full", tr.f1_partial_vs_full},
                                                    {"ratio", tr.ratio},
                                                    {"degenerate", tr.degenerate}};
    writer.add(fmt::format("score.{}", ext(g.report)), record(score, g.report));
    if (tr.bound_report) {
      writer.add(fmt::format("bounds.{}", ext(g.report)),
                 g.report == Report::json ? bound_report_json(*tr.bound_report) + "\n"
                                          : bound_report_csv_header() + "\n" + bound_report_csv_row(*tr.bound_report) + "\n");
    }
  }
  json params{{"signals", a.signals}, {"observe", a.observe}, {"lambda", a.lambda}, {"max_iters", a.max_iters},
              {"rel_tol", a.rel_tol}, {"tau", a.tau},         {"truth", a.truth},   {"K", a.K},
              {"delta", a.delta}};
  writer.add("learn.provenance.json", dump(provenance("learn", g, params)));
  writer.commit(out);
  out << fmt::format("n={} objective={} iterations={} converged={}\n", n, fmt_num(res.objective), res.iterations,
                     res.converged ? "true" : "false");
  if (!violations.empty()) throw InvariantViolation(violations);
  return kExitOk;
}

// ---- bounds -----------------------------------------------------------------

struct BoundsArgs {
  std::string config;
  int observe = 0;
  int K = 0;
  double delta = 0;
  int rip_draws = 0;
};

int cmd_bounds(const BoundsArgs& a, const Globals& g, std::ostream& out) {
  ExperimentConfig cfg;
  if (!a.config.empty()) cfg = load_experiment_config(a.config);
  if (cfg.kind != ExperimentConfig::Kind::sweep)
    throw ConfigError({"experiment: bounds needs a synthetic ('sweep') config"});
  if (g.seed_set) cfg.seed = g.seed;
  propagate_globals(cfg);
  TrialConfig trial = cfg.trial;
  if (!cfg.has_observed && !cfg.grid.observed.empty()) trial.observed = cfg.grid.observed.front();
  if (a.observe) trial.observed = a.observe;
  if (a.K) trial.K = a.K;
  if (a.delta > 0) trial.delta = a.delta;
  if (cfg.grid.param == SweepParam::alpha && !cfg.grid.values.empty()) trial.filter = HeatFilter{cfg.grid.values.front()};
  if (cfg.grid.param == SweepParam::beta && !cfg.grid.values.empty())
    trial.filter = ResolventFilter{cfg.grid.values.front()};
  trial.theory = true;
  trial.validate();

  const TrialResult tr = run_trial(trial);
  Globals used = g;
  used.seed = cfg.seed;
  OutputWriter writer(g.out_dir);
  if (tr.bound_report) {
    writer.add(fmt::format("bounds.{}", ext(g.report)),
               g.report == Report::json ? bound_report_json(*tr.bound_report) + "\n"
                                        : bound_report_csv_header() + "\n" + bound_report_csv_row(*tr.bound_report) + "\n");
  }
  json params{{"graph", describe(trial.graph)}, {"filter", filter_json(trial.filter)}, {"observed", trial.observed},
              {"signals", trial.signals},       {"lambda", trial.lambda},               {"K", trial.K},
              {"delta", trial.delta},           {"rip_draws", a.rip_draws}};
  if (a.rip_draws > 0) {
    Rng graph_rng = derive_rng(trial.seed, 0, kGraphTag);
    const Graph truth = make_graph(trial.graph, graph_rng);
    const Matrix L = build_laplacian(truth);
    const Spectrum spec = eigendecompose(L);
    Rng rip_rng = derive_rng(trial.seed, static_cast<std::uint64_t>(trial.observed), 4);
    const RipStudy st = rip_study(L, spec, trial.K, trial.observed, trial.delta, a.rip_draws, rip_rng);
    writer.add(fmt::format("rip.{}", ext(g.report)),
               record({{"n", st.n},
                       {"coherence", st.coherence},
                       {"t", st.t ? json(*st.t) : json(nullptr)},
                       {"draws", st.draws},
                       {"failures", st.failures},
                       {"failure_rate", st.failure_rate()}},
                      g.report));
  }
  writer.add("bounds.provenance.json", dump(provenance("bounds", used, params)));
  writer.commit(out);
  if (!tr.bound_report) out << "no bound report: " << (tr.degenerate ? tr.degenerate_reason : "theory skipped") << "\n";
  else
    out << fmt::format("ratio={} hard_checks={}\n", fmt_num(tr.ratio),
                       tr.bound_report->hard_checks_hold() ? "hold" : "VIOLATED");
  if (!tr.violations.empty()) throw InvariantViolation(tr.violations);
  return kExitOk;
}

// ---- experiment -------------------------------------------------------------

std::string sweep_json(const SweepResult& sweep) {
  json rows = json::array();
  for (const auto& r : sweep.rows) {
    json j{{"n", r.n},
           {"param", r.param},
           {"median_f1_partial", r.f1_partial.median},
           {"q1", r.f1_partial.q1},
           {"q3", r.f1_partial.q3},
           {"median_f1_partial_truth", r.f1_partial_truth.median},
           {"median_ratio", r.ratio.median},
           {"ratio_q1", r.ratio.q1},
           {"ratio_q3", r.ratio.q3},
           {"trials", r.trials}};
    if (!r.failure.empty()) j["failure"] = r.failure;
    rows.push_back(std::move(j));
  }
  return dump(rows);
}

int cmd_experiment(const std::string& path, const Globals& g, std::ostream& out) {
  ExperimentConfig cfg = load_experiment_config(path);
  if (g.seed_set) cfg.seed = g.seed;
  if (g.jobs_set) cfg.jobs = g.jobs;
  propagate_globals(cfg);
  const fs::path dir = g.out_dir_set ? fs::path(g.out_dir) : cfg.has_out_dir ? cfg.out_dir : fs::path(g.out_dir);
  OutputWriter writer(dir);
  Globals used = g;
  used.seed = cfg.seed;
  json params{{"config", path}, {"jobs", cfg.jobs}};

  std::vector<std::string> violations;
  std::vector<std::string> failures;
  if (cfg.kind == ExperimentConfig::Kind::sweep) {
    const SweepResult sweep = run_sweep(cfg.trial, cfg.grid, cfg.trials, cfg.jobs);
    writer.add("sweep.csv", sweep_csv(sweep));
    writer.add("trials.csv", trial_log_csv(sweep));
    if (g.report == Report::json) writer.add("sweep.json", sweep_json(sweep));
    violations = sweep.violations;
    for (const auto& r : sweep.rows)
      if (!r.failure.empty()) failures.push_back(fmt::format("n={} param={:g}: {}", r.n, r.param, r.failure));
    out << fmt::format("{} grid points x {} trials\n", sweep.rows.size(), cfg.trials);
  } else {
    const auto rows = run_real_experiment(cfg.real);
    writer.add("real.csv", real_csv(rows));
    if (g.report == Report::json) {
      json arr = json::array();
      for (const auto& r : rows)
        arr.push_back({{"n", r.n},
                       {"median_f1_partial", r.f1_partial.median},
                       {"median_f1_full", r.f1_full.median},
                       {"trials", r.trials}});
      writer.add("real.json", dump(arr));
    }
    for (const auto& r : rows) violations.insert(violations.end(), r.violations.begin(), r.violations.end());
    out << fmt::format("{} grid points x {} trials\n", rows.size(), cfg.real.trials);
  }
  writer.add("experiment.provenance.json", dump(provenance("experiment", used, params)));
  writer.commit(out);
  if (!violations.empty()) throw InvariantViolation(violations);
  if (!failures.empty()) {
    std::string msg = fmt::format("{} grid point(s) aborted:", failures.size());
    for (const auto& f : failures) msg += "\n  " + f;
    throw std::runtime_error(msg);
  }
  return kExitOk;
}

// ---- eval -------------------------------------------------------------------

struct EvalArgs {
  std::string estimated;
  std::string truth;
  double tau = 0.1;
};

int cmd_eval(const EvalArgs& a, const Globals& g, std::ostream& out) {
  const Graph truth = load_edge_list(a.truth).binarized();
  const Graph est_raw = load_edge_list(a.estimated, truth.n_nodes());
  if (est_raw.n_nodes() != truth.n_nodes())
    throw InvalidArgument(fmt::format("--estimated: {} nodes but truth has {}", est_raw.n_nodes(), truth.n_nodes()));
  const ThresholdResult th = threshold_edges(build_laplacian(est_raw), a.tau);
  const F1Result f1 = f1_score(th.graph, truth);
  OutputWriter writer(g.out_dir);
  writer.add(fmt::format("eval.{}", ext(g.report)),
             record({{"f1", f1.f1},
                     {"precision", f1.precision},
                     {"recall", f1.recall},
                     {"estimated_edges", th.graph.edge_count()},
                     {"true_edges", truth.edge_count()},
                     {"tau", a.tau}},
                    g.report));
  writer.commit(out);
  out << fmt::format("f1={} precision={} recall={}\n", fmt_num(f1.f1), fmt_num(f1.precision), fmt_num(f1.recall));
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Learn graph topology from smooth graph signals under partial observation.", "glearn"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(kVersion));
  app.set_help_all_flag("--help-all", "Print help for every subcommand and exit");

  Globals g;
  std::string report = "csv";
  app.add_option("--seed", g.seed, "Base random seed")->capture_default_str();
  app.add_option("--jobs", g.jobs, "Worker threads for trial sweeps")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--out-dir", g.out_dir, "Directory for output files")->capture_default_str();
  app.add_option("--report", report, "Report format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

  GenGraphArgs gg;
  auto* gen_graph = app.add_subcommand("gen-graph", "Generate or normalize a graph and write it as an edge list");
  gen_graph->add_option("model", gg.model, "Graph model")->required()->check(CLI::IsMember({"er", "knn", "sbm", "file"}));
  gen_graph->add_option("--nodes", gg.nodes, "Number of nodes (er, knn)")->check(CLI::Range(2, 100000))->capture_default_str();
  gen_graph->add_option("--p", gg.p, "Edge probability (er)")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  gen_graph->add_option("--k", gg.k, "Neighbors per node (knn)")->check(CLI::PositiveNumber)->capture_default_str();
  gen_graph->add_option("--sizes", gg.sizes, "Block sizes, comma separated (sbm)")->delimiter(',')->capture_default_str();
  gen_graph->add_option("--p-in", gg.p_in, "Within-block edge probability (sbm)")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  gen_graph->add_option("--p-out", gg.p_out, "Between-block edge probability (sbm)")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  gen_graph->add_option("--input", gg.input, "Edge-list file to read (file)")->check(CLI::ExistingFile);
  gen_graph->add_option("--output", gg.output, "Output file name inside --out-dir")->capture_default_str();

  GenSignalsArgs gs;
  auto* gen_signals = app.add_subcommand("gen-signals", "Filter white excitations on a graph into smooth signals");
  gen_signals->add_option("--graph", gs.graph, "Edge-list file")->required()->check(CLI::ExistingFile);
  gs.filter.attach(gen_signals);
  gen_signals->add_option("--count", gs.count, "Number of signals M")->check(CLI::PositiveNumber)->capture_default_str();
  gen_signals->add_option("--output", gs.output, "Output file name inside --out-dir")->capture_default_str();

  LearnArgs la;
  auto* learn = app.add_subcommand("learn", "Learn a Laplacian from a signal matrix, optionally on a random node subset");
  learn->add_option("--signals", la.signals, "Signal CSV (rows = realizations, columns = nodes)")
      ->required()
      ->check(CLI::ExistingFile);
  learn->add_option("--observe", la.observe, "Observe a random subset of n nodes (0 = all)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  learn->add_option("--lambda", la.lambda, "Frobenius regularization weight")->check(CLI::NonNegativeNumber)->capture_default_str();
  learn->add_option("--max-iters", la.max_iters, "Solver iteration cap")->check(CLI::PositiveNumber)->capture_default_str();
  learn->add_option("--rel-tol", la.rel_tol, "Solver tolerance on the relative duality gap")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  learn->add_option("--tau", la.tau, "Relative edge threshold for binarization")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  learn->add_option("--truth", la.truth, "Ground-truth edge list; enables F1 scores and the bound report")
      ->check(CLI::ExistingFile);
  learn->add_option("--K", la.K, "Passband size for the bound report")->check(CLI::PositiveNumber)->capture_default_str();
  learn->add_option("--delta", la.delta, "Failure probability for the sampling condition")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();

  BoundsArgs ba;
  auto* bounds = app.add_subcommand("bounds", "Run one synthetic trial and report the surrogate inequalities");
  bounds->add_option("--config", ba.config, "Experiment config (graph, filter and trial sections are used)")
      ->check(CLI::ExistingFile);
  bounds->add_option("--observe", ba.observe, "Observed node count (overrides the config)")->check(CLI::NonNegativeNumber);
  bounds->add_option("--K", ba.K, "Passband size (overrides the config)")->check(CLI::NonNegativeNumber);
  bounds->add_option("--delta", ba.delta, "Failure probability (overrides the config)")->check(CLI::Range(0.0, 1.0));
  bounds->add_option("--rip-draws", ba.rip_draws, "Monte Carlo draws for the restricted-isometry study (0 = skip)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();

  std::string experiment_config;
  auto* experiment = app.add_subcommand("experiment", "Run a sweep or real-data experiment from a config file");
  experiment->add_option("config", experiment_config, "Experiment config (YAML)")->required()->check(CLI::ExistingFile);

  EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "Score a learned edge list against a ground-truth edge list");
  eval->add_option("--estimated", ea.estimated, "Learned (weighted) edge list")->required()->check(CLI::ExistingFile);
  eval->add_option("--truth", ea.truth, "Ground-truth edge list")->required()->check(CLI::ExistingFile);
  eval->add_option("--tau", ea.tau, "Relative edge threshold")->check(CLI::Range(0.0, 1.0))->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  g.report = report == "json" ? Report::json : Report::csv;
  g.seed_set = app.get_option("--seed")->count() > 0;
  g.jobs_set = app.get_option("--jobs")->count() > 0;
  g.out_dir_set = app.get_option("--out-dir")->count() > 0;

  try {
    if (*gen_graph) return cmd_gen_graph(gg, g, out);
    if (*gen_signals) return cmd_gen_signals(gs, g, out);
    if (*learn) return cmd_learn(la, g, out);
    if (*bounds) return cmd_bounds(ba, g, out);
    if (*experiment) return cmd_experiment(experiment_config, g, out);
    if (*eval) return cmd_eval(ea, g, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvariantViolation& e) {
    err << "invariant violation: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const TrialError& e) {
    err << "error in stage " << e.stage() << ": " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace glearn::cli
