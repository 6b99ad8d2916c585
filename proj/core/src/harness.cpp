#include "glearn/harness.hpp"

#include "glearn/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace glearn {

F1Result f1_score(const Graph& estimated, const Graph& truth) {
  const int n = truth.n_nodes();
  if (estimated.n_nodes() != n)
    throw InvalidArgument(fmt::format("f1_score: {} vs {} nodes", estimated.n_nodes(), n));
  long tp = 0, fp = 0, fn = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const bool e = estimated.weight(i, j) > 0;
      const bool t = truth.weight(i, j) > 0;
      tp += e && t;
      fp += e && !t;
      fn += !e && t;
    }
  }
  if (tp + fp + fn == 0) return F1Result{1.0, 1.0, 1.0};
  F1Result r;
  r.precision = tp + fp > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
  r.recall = tp + fn > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0;
  r.f1 = tp > 0 ? 2.0 * r.precision * r.recall / (r.precision + r.recall) : 0.0;
  return r;
}

Graph altitude_ground_truth(const std::vector<double>& altitudes, double threshold) {
  const int n = static_cast<int>(altitudes.size());
  if (n < 1) throw InvalidArgument("altitude_ground_truth: no stations");
  for (double a : altitudes)
    if (!std::isfinite(a)) throw InvalidArgument("altitude_ground_truth: non-finite altitude");
  Matrix adj = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(altitudes[i] - altitudes[j]) < threshold) adj(i, j) = adj(j, i) = 1.0;
  return Graph(std::move(adj));
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Runs fn(i) for i in [0, count) on up to `jobs` threads. Exceptions stay with
// their task: fn is expected to catch and record them.
template <typename Fn>
void parallel_for(int count, int jobs, Fn&& fn) {
  jobs = std::max(1, std::min(jobs, count));
  if (jobs == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> workers;
  workers.reserve(jobs);
  for (int w = 0; w < jobs; ++w)
    workers.emplace_back([&] {
      for (int i = next++; i < count; i = next++) fn(i);
    });
  for (auto& t : workers) t.join();
}

std::string num(double v) { return fmt::format("{:.10g}", v); }

}  // namespace

int node_count(const GraphSpec& spec) {
  return std::visit(overloaded{
                        [](const ErModel& m) { return m.nodes; },
                        [](const KnnModel& m) { return m.nodes; },
                        [](const SbmModel& m) {
                          int total = 0;
                          for (int s : m.sizes) total += s;
                          return total;
                        },
                        [](const FileGraph& f) { return load_edge_list(f.path).n_nodes(); },
                    },
                    spec);
}

Graph make_graph(const GraphSpec& spec, Rng& rng) {
  return std::visit(overloaded{
                        [&](const ErModel& m) { return generate_er(m.nodes, m.p, rng); },
                        [&](const KnnModel& m) { return generate_knn(m.nodes, m.k, rng); },
                        [&](const SbmModel& m) { return generate_sbm(m.sizes, m.p_in, m.p_out, rng); },
                        [](const FileGraph& f) { return load_edge_list(f.path); },
                    },
                    spec);
}

std::string describe(const GraphSpec& spec) {
  return std::visit(overloaded{
                        [](const ErModel& m) { return fmt::format("er(n={},p={:g})", m.nodes, m.p); },
                        [](const KnnModel& m) { return fmt::format("knn(n={},k={})", m.nodes, m.k); },
                        [](const SbmModel& m) {
                          return fmt::format("sbm(sizes={},p_in={:g},p_out={:g})", fmt::join(m.sizes, ";"), m.p_in,
                                             m.p_out);
                        },
                        [](const FileGraph& f) { return "file(" + f.path.string() + ")"; },
                    },
                    spec);
}

void TrialConfig::validate() const {
  const int total = node_count(graph);
  if (total < 2) throw InvalidArgument("graph: need at least two nodes");
  validate_filter(filter);
  if (signals < 1) throw InvalidArgument("signals: must be >= 1");
  if (observed < 2 || observed > total)
    throw InvalidArgument(fmt::format("observed: n = {} not in [2, {}]", observed, total));
  if (!(lambda >= 0)) throw InvalidArgument("lambda: must be >= 0");
  if (!(tau >= 0 && tau < 1)) throw InvalidArgument("tau: must lie in [0, 1)");
  if (K < 1 || K > total) throw InvalidArgument(fmt::format("K: {} not in [1, {}]", K, total));
  if (!(delta > 0 && delta < 1)) throw InvalidArgument("delta: must lie in (0, 1)");
  if (solver.max_iters < 1 || !(solver.rel_tol > 0)) throw InvalidArgument("solver: invalid iteration settings");
}

Rng derive_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t tag) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    static_cast<std::uint32_t>(tag)};
  return Rng(seq);
}

namespace {

enum StreamTag : std::uint64_t { kGraphStream = 1, kSignalStream = 2, kMaskStream = 3 };

template <typename Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const TrialError&) {
    throw;
  } catch (const std::exception& e) {
    throw TrialError(name, e.what());
  }
}

TrialResult evaluate(const Graph& truth, const Spectrum& spec, const Matrix& y,
                     const std::optional<LowpassProfile>& profile, const ObservationMask& mask,
                     const TrialConfig& cfg, StageTimes times) {
  TrialResult res;
  res.mask = mask.observed();
  SolverConfig solver = cfg.solver;
  solver.lambda = cfg.lambda;

  const Matrix yo = restrict_signals(mask, y);
  auto start = Clock::now();
  const SolveResult partial = stage("solve-partial", [&] { return solve_gl_sigrep(yo, solver); });
  times.solve_partial = seconds_since(start);
  start = Clock::now();
  const SolveResult full = stage("solve-full", [&] { return solve_gl_sigrep(y, solver); });
  times.solve_full = seconds_since(start);
  res.converged = partial.converged && full.converged;

  TrialSolutions sol;
  sol.full = full.laplacian;
  sol.partial = partial.laplacian;
  sol.lifted = stage("surrogates", [&] { return lift_surrogate_full(mask, sol.partial); });
  bool have_projected = true;
  try {
    sol.projected = project_surrogate_partial(mask, sol.full);
  } catch (const DegenerateSurrogate& e) {
    have_projected = false;
    res.degenerate = true;
    res.degenerate_reason = e.what();
  }

  constexpr double kSlack = 1e-8;
  auto check_set = [&](const Matrix& m, const char* name) {
    const auto rep = validate_in_laplacian_set(m, static_cast<int>(m.rows()), kSlack);
    res.worst_constraint_violation = std::max({res.worst_constraint_violation, rep.trace_violation,
                                               rep.row_sum_violation, rep.off_diagonal_violation,
                                               rep.symmetry_violation});
    if (!rep.ok()) res.violations.push_back(fmt::format("{} outside the Laplacian set: {}", name, rep.summary()));
  };
  check_set(sol.full, "L*");
  check_set(sol.partial, "Lp*");
  check_set(sol.lifted, "Lhat");
  if (have_projected) check_set(sol.projected, "Lt_p");

  res.jp_star = objective(sol.partial, yo, cfg.lambda);
  res.jf_star = objective(sol.full, y, cfg.lambda);
  res.jf_hat = objective(sol.lifted, y, cfg.lambda);
  if (res.jf_star > res.jf_hat + kSlack * (1.0 + std::abs(res.jf_hat)))
    res.violations.push_back(fmt::format("Jf(L*) = {} exceeds Jf(Lhat) = {}", res.jf_star, res.jf_hat));
  if (have_projected) {
    res.jp_tilde = objective(sol.projected, yo, cfg.lambda);
    if (res.jp_star > res.jp_tilde + kSlack * (1.0 + std::abs(res.jp_tilde)))
      res.violations.push_back(fmt::format("Jp(Lp*) = {} exceeds Jp(Lt_p) = {}", res.jp_star, res.jp_tilde));
    constexpr double kTiny = 1e-300;
    if (std::abs(res.jp_star) <= kTiny && std::abs(res.jp_tilde) <= kTiny) {
      res.ratio = 1.0;
      res.degenerate = true;
      res.degenerate_reason = "both partial objectives vanish";
    } else {
      res.ratio = res.jp_tilde / res.jp_star;
      if (res.ratio < 1.0 - kSlack) res.violations.push_back(fmt::format("ratio {} below 1", res.ratio));
    }
  } else {
    res.jp_tilde = std::numeric_limits<double>::quiet_NaN();
    res.ratio = std::numeric_limits<double>::quiet_NaN();
  }

  const Graph truth_oo = Graph(restrict_laplacian(mask, truth.adjacency())).binarized();
  const Graph est_partial = threshold_edges(sol.partial, cfg.tau).graph;
  const Graph est_full = threshold_edges(restrict_laplacian(mask, sol.full), cfg.tau).graph;
  res.f1_partial = f1_score(est_partial, truth_oo).f1;
  res.f1_full_restricted = f1_score(est_full, truth_oo).f1;
  res.f1_partial_vs_full = f1_score(est_partial, est_full).f1;

  if (cfg.theory && have_projected && cfg.K < spec.size()) {
    start = Clock::now();
    res.bound_report = stage("theory", [&] {
      return theorem_report(TheoremInputs{sol, mask, y, spec, cfg.K, cfg.delta, cfg.lambda, profile, kSlack});
    });
    times.theory = seconds_since(start);
    for (const auto& c : res.bound_report->inequalities)
      if (c.hard && !c.holds) res.violations.push_back(fmt::format("{}: {} vs {}", c.name, c.lhs, c.rhs));
  }
  res.times = times;
  return res;
}

std::optional<LowpassProfile> try_profile(const Spectrum& spec, const GraphFilter& filter, int K,
                                          double m_bound) {
  if (K >= spec.size()) return std::nullopt;
  try {
    LowpassProfile p = sharpness_ratio(spec, filter, K);
    p.m_bound = m_bound;
    return p;
  } catch (const InvalidArgument&) {
    return std::nullopt;  // passband annihilated; no finite sharpness ratio
  }
}

}  // namespace

TrialResult run_trial(const TrialConfig& cfg) {
  stage("config", [&] {
    cfg.validate();
    return 0;
  });
  StageTimes times;
  auto start = Clock::now();
  Rng graph_rng = derive_rng(cfg.seed, 0, kGraphStream);
  const Graph truth = stage("graph", [&] { return make_graph(cfg.graph, graph_rng); });
  const Spectrum spec = stage("spectrum", [&] { return eigendecompose(build_laplacian(truth)); });
  times.graph = seconds_since(start);

  start = Clock::now();
  Rng signal_rng = derive_rng(cfg.seed, 0, kSignalStream);
  const SignalMatrix signals = stage("signals", [&] { return generate_signals(spec, cfg.filter, cfg.signals, signal_rng); });
  times.signals = seconds_since(start);

  Rng mask_rng = derive_rng(cfg.seed, static_cast<std::uint64_t>(cfg.observed), kMaskStream);
  const ObservationMask mask =
      stage("mask", [&] { return sample_observation(truth.n_nodes(), cfg.observed, mask_rng); });
  const auto profile = try_profile(spec, cfg.filter, cfg.K, signals.excitation_bound());
  return evaluate(truth, spec, signals.signals(), profile, mask, cfg, times);
}

TrialResult run_trial_on(const FixedData& data, const ObservationMask& mask, const TrialConfig& cfg) {
  if (data.signals.cols() != data.truth.n_nodes()) throw InvalidArgument("run_trial_on: signals/graph mismatch");
  const Spectrum spec = stage("spectrum", [&] { return eigendecompose(build_laplacian(data.truth)); });
  std::optional<LowpassProfile> profile;
  if (data.filter && data.excitations)
    profile = try_profile(spec, *data.filter, cfg.K, data.excitations->rowwise().norm().maxCoeff());
  return evaluate(data.truth, spec, data.signals, profile, mask, cfg, StageTimes{});
}

std::string to_string(SweepParam p) {
  switch (p) {
    case SweepParam::alpha: return "alpha";
    case SweepParam::beta: return "beta";
    case SweepParam::none: break;
  }
  return "none";
}

SweepParam parse_sweep_param(const std::string& s) {
  if (s == "alpha") return SweepParam::alpha;
  if (s == "beta") return SweepParam::beta;
  if (s == "none") return SweepParam::none;
  throw InvalidArgument("unknown sweep parameter '" + s + "' (expected alpha, beta or none)");
}

Quartiles quartiles(std::vector<double> xs) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  xs.erase(std::remove_if(xs.begin(), xs.end(), [](double v) { return std::isnan(v); }), xs.end());
  if (xs.empty()) return Quartiles{nan, nan, nan};
  std::sort(xs.begin(), xs.end());
  auto at = [&](double q) {
    const double pos = q * static_cast<double>(xs.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, xs.size() - 1);
    return xs[lo] + (pos - static_cast<double>(lo)) * (xs[hi] - xs[lo]);
  };
  return Quartiles{at(0.25), at(0.5), at(0.75)};
}

namespace {

std::uint64_t trial_seed(std::uint64_t base, int trial) {
  // splitmix64 step keyed by the trial index
  std::uint64_t x = base + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(trial + 1);
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

TrialConfig apply_param(TrialConfig cfg, SweepParam param, double value) {
  switch (param) {
    case SweepParam::alpha: cfg.filter = HeatFilter{value}; break;
    case SweepParam::beta: cfg.filter = ResolventFilter{value}; break;
    case SweepParam::none: break;
  }
  return cfg;
}

}  // namespace

SweepResult run_sweep(const TrialConfig& base, const SweepGrid& grid, int trials, int jobs) {
  if (trials < 1) throw InvalidArgument("run_sweep: trials must be >= 1");
  if (grid.observed.empty()) throw InvalidArgument("run_sweep: empty observation grid");
  std::vector<double> values = grid.values;
  if (grid.param == SweepParam::none || values.empty()) values = {0.0};

  SweepResult sweep;
  for (double v : values)
    for (int n : grid.observed) {
      SweepRow row;
      row.n = n;
      row.param = v;
      row.results.resize(trials);
      sweep.rows.push_back(std::move(row));
    }

  const int points = static_cast<int>(sweep.rows.size());
  std::vector<std::string> errors(static_cast<std::size_t>(points) * trials);
  parallel_for(points * trials, jobs, [&](int task) {
    const int p = task / trials;
    const int t = task % trials;
    SweepRow& row = sweep.rows[p];
    TrialConfig cfg = apply_param(base, grid.param, row.param);
    cfg.observed = row.n;
    cfg.seed = trial_seed(base.seed, t);
    try {
      row.results[t] = run_trial(cfg);
    } catch (const std::exception& e) {
      errors[task] = fmt::format("trial {}: {}", t, e.what());
    }
  });

  for (int p = 0; p < points; ++p) {
    SweepRow& row = sweep.rows[p];
    for (int t = 0; t < trials && row.failure.empty(); ++t) row.failure = errors[p * trials + t];
    if (!row.failure.empty()) {
      row.results.clear();
      row.f1_partial = row.f1_partial_truth = row.ratio = quartiles({});
      continue;
    }
    std::vector<double> f1p, f1t, ratio;
    for (int t = 0; t < trials; ++t) {
      const TrialResult& r = row.results[t];
      f1p.push_back(r.f1_partial_vs_full);
      f1t.push_back(r.f1_partial);
      ratio.push_back(r.ratio);
      for (const auto& v : r.violations)
        sweep.violations.push_back(fmt::format("n={} param={:g} trial {}: {}", row.n, row.param, t, v));
    }
    row.f1_partial = quartiles(std::move(f1p));
    row.f1_partial_truth = quartiles(std::move(f1t));
    row.ratio = quartiles(std::move(ratio));
    row.trials = trials;
  }
  return sweep;
}

std::string sweep_csv(const SweepResult& sweep) {
  std::string out = "n,param,median_f1_partial,q1,q3,median_ratio,ratio_q1,ratio_q3,trials\n";
  for (const auto& row : sweep.rows)
    out += fmt::format("{},{},{},{},{},{},{},{},{}\n", row.n, num(row.param), num(row.f1_partial.median),
                       num(row.f1_partial.q1), num(row.f1_partial.q3), num(row.ratio.median), num(row.ratio.q1),
                       num(row.ratio.q3), row.trials);
  return out;
}

std::string trial_log_csv(const SweepResult& sweep) {
  std::string out =
      "n,param,trial,f1_partial,f1_full_restricted,f1_partial_vs_full,ratio,degenerate,jp_star,jp_tilde,jf_star,"
      "jf_hat,converged,worst_constraint_violation,violations,mask," +
      bound_report_csv_header() + "\n";
  const std::string report_header = bound_report_csv_header();
  const std::string no_report(std::count(report_header.begin(), report_header.end(), ','), ',');
  for (const auto& row : sweep.rows) {
    if (!row.failure.empty()) {
      out += fmt::format("# n={} param={} aborted: {}\n", row.n, num(row.param), row.failure);
      continue;
    }
    for (std::size_t t = 0; t < row.results.size(); ++t) {
      const TrialResult& r = row.results[t];
      out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},\"{}\",{}\n", row.n, num(row.param), t,
                         num(r.f1_partial), num(r.f1_full_restricted), num(r.f1_partial_vs_full), num(r.ratio),
                         r.degenerate ? 1 : 0, num(r.jp_star), num(r.jp_tilde), num(r.jf_star), num(r.jf_hat),
                         r.converged ? 1 : 0, num(r.worst_constraint_violation), r.violations.size(),
                         fmt::join(r.mask, ","), r.bound_report ? bound_report_csv_row(*r.bound_report) : no_report);
    }
  }
  return out;
}

StationData load_stations(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  StationData data;
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  std::size_t columns = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (columns == 0) {
      if (cells.size() < 3 || cells[0] != "station_id" || cells[1] != "altitude_m")
        throw ParseError(path.string() + ": header must start with station_id,altitude_m", line_no);
      columns = cells.size();
      continue;
    }
    if (cells.size() != columns)
      throw ParseError(fmt::format("{}: expected {} fields, got {}", path.string(), columns, cells.size()), line_no);
    std::vector<double> values;
    for (std::size_t c = 1; c < cells.size(); ++c) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(cells[c], &used));
        if (cells[c].find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(cells[c]);
      } catch (const std::exception&) {
        throw ParseError(fmt::format("{}: field {} is not a number", path.string(), c + 1), line_no);
      }
    }
    data.ids.push_back(cells[0]);
    data.altitudes.push_back(values[0]);
    rows.emplace_back(values.begin() + 1, values.end());
  }
  if (rows.empty()) throw ParseError(path.string() + ": no stations");
  data.readings.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(columns - 2));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t m = 0; m < rows[i].size(); ++m) data.readings(i, m) = rows[i][m];
  return data;
}

std::vector<int> default_observed_grid(int total) {
  std::set<int> grid;
  for (int k = 2; k <= 10; ++k) grid.insert(std::max(2, static_cast<int>(std::lround(total * k / 10.0))));
  return {grid.begin(), grid.end()};
}

std::vector<RealRow> run_real_experiment(const RealExperimentConfig& cfg) {
  if (cfg.trials < 1) throw InvalidArgument("real experiment: trials must be >= 1");
  Graph truth = Graph::empty(1);
  std::optional<Matrix> fixed_signals;
  if (cfg.kind == RealExperimentConfig::Kind::stations) {
    const StationData stations = load_stations(cfg.input);
    truth = altitude_ground_truth(stations.altitudes, cfg.altitude_threshold);
    fixed_signals = stations.readings.transpose();  // one signal per month
  } else {
    truth = load_edge_list(cfg.input).binarized();
    validate_filter(cfg.filter);
    if (cfg.signals < 1) throw InvalidArgument("real experiment: signals must be >= 1");
  }
  const int total = truth.n_nodes();
  const std::vector<int> grid = cfg.observed.empty() ? default_observed_grid(total) : cfg.observed;
  for (int n : grid)
    if (n < 2 || n > total) throw InvalidArgument(fmt::format("real experiment: n = {} not in [2, {}]", n, total));
  const Spectrum spec = eigendecompose(build_laplacian(truth));

  TrialConfig trial;
  trial.lambda = cfg.lambda;
  trial.tau = cfg.tau;
  trial.theory = false;
  trial.K = std::min(5, total);

  std::vector<RealRow> rows(grid.size());
  std::vector<std::vector<TrialResult>> results(grid.size(), std::vector<TrialResult>(cfg.trials));
  std::vector<std::string> errors(grid.size() * cfg.trials);
  const int tasks = static_cast<int>(grid.size()) * cfg.trials;
  parallel_for(tasks, cfg.jobs, [&](int task) {
    const int g = task / cfg.trials;
    const int t = task % cfg.trials;
    try {
      const std::uint64_t seed = trial_seed(cfg.seed, t);
      Matrix y;
      std::optional<SignalMatrix> synth;
      if (fixed_signals) {
        y = *fixed_signals;
      } else {
        Rng signal_rng = derive_rng(seed, 0, kSignalStream);
        synth.emplace(generate_signals(spec, cfg.filter, cfg.signals, signal_rng));
        y = synth->signals();
      }
      Rng mask_rng = derive_rng(seed, static_cast<std::uint64_t>(grid[g]), kMaskStream);
      const ObservationMask mask = sample_observation(total, grid[g], mask_rng);
      FixedData data{truth, y, std::nullopt, std::nullopt};
      if (synth) {
        data.filter = cfg.filter;
        data.excitations = synth->excitations();
      }
      results[g][t] = run_trial_on(data, mask, trial);
    } catch (const std::exception& e) {
      errors[task] = fmt::format("n={} trial {}: {}", grid[g], t, e.what());
    }
  });
  for (const auto& e : errors)
    if (!e.empty()) throw std::runtime_error("real experiment failed: " + e);

  for (std::size_t g = 0; g < grid.size(); ++g) {
    std::vector<double> fp, ff;
    for (int t = 0; t < cfg.trials; ++t) {
      const TrialResult& r = results[g][t];
      fp.push_back(r.f1_partial);
      ff.push_back(r.f1_full_restricted);
      for (const auto& v : r.violations) rows[g].violations.push_back(fmt::format("n={} trial {}: {}", grid[g], t, v));
    }
    rows[g].n = grid[g];
    rows[g].f1_partial = quartiles(std::move(fp));
    rows[g].f1_full = quartiles(std::move(ff));
    rows[g].trials = cfg.trials;
  }
  return rows;
}

std::string real_csv(const std::vector<RealRow>& rows) {
  std::string out = "n,median_f1_partial,f1_partial_q1,f1_partial_q3,median_f1_full,f1_full_q1,f1_full_q3,trials\n";
  for (const auto& r : rows)
    out += fmt::format("{},{},{},{},{},{},{},{}\n", r.n, num(r.f1_partial.median), num(r.f1_partial.q1),
                       num(r.f1_partial.q3), num(r.f1_full.median), num(r.f1_full.q1), num(r.f1_full.q3), r.trials);
  return out;
}

}  // namespace glearn
