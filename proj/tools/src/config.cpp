#include "config.hpp"

#include "glearn/error.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <yaml-cpp/yaml.h>

#include <fstream>
#include <optional>
#include <set>
#include <sstream>

namespace glearn::cli {

namespace {

std::string join_errors(const std::vector<std::string>& errors) {
  std::string msg = fmt::format("invalid config ({} problem{}):", errors.size(), errors.size() == 1 ? "" : "s");
  for (const auto& e : errors) msg += "\n  - " + e;
  return msg;
}

std::string key_path(const std::string& section, const std::string& key) {
  return section.empty() ? key : section + "." + key;
}

class Reader {
 public:
  std::vector<std::string> errors;

  void error(std::string msg) { errors.push_back(std::move(msg)); }

  // Returns an empty node (and records an error) when `name` is present but not a map.
  YAML::Node section(const YAML::Node& parent, const std::string& name) {
    const YAML::Node n = parent[name];
    if (!n) return absent();
    if (!n.IsMap()) {
      error(fmt::format("{}: expected a section of key/value pairs", name));
      return absent();
    }
    return n;
  }

  static YAML::Node absent() { return YAML::Node(YAML::NodeType::Undefined); }

  void allow_keys(const YAML::Node& n, const std::string& section, std::initializer_list<const char*> allowed) {
    if (!n || !n.IsMap()) return;
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& kv : n) {
      const auto key = kv.first.as<std::string>();
      if (!ok.count(key)) error(fmt::format("unknown key '{}'", key_path(section, key)));
    }
  }

  template <typename T>
  std::optional<T> get(const YAML::Node& n, const std::string& section, const char* key, const char* what) {
    if (!n || !n.IsMap()) return std::nullopt;
    const YAML::Node v = n[key];
    if (!v) return std::nullopt;
    try {
      return v.as<T>();
    } catch (const YAML::Exception&) {
      error(fmt::format("{}: expected {}", key_path(section, key), what));
      return std::nullopt;
    }
  }

  std::optional<double> real(const YAML::Node& n, const std::string& s, const char* key) {
    return get<double>(n, s, key, "a number");
  }
  std::optional<int> integer(const YAML::Node& n, const std::string& s, const char* key) {
    return get<int>(n, s, key, "an integer");
  }
  std::optional<std::string> text(const YAML::Node& n, const std::string& s, const char* key) {
    const YAML::Node v = n && n.IsMap() ? n[key] : absent();
    if (v && !v.IsScalar()) {
      error(fmt::format("{}: expected a string", key_path(s, key)));
      return std::nullopt;
    }
    return get<std::string>(n, s, key, "a string");
  }
  std::optional<bool> boolean(const YAML::Node& n, const std::string& s, const char* key) {
    return get<bool>(n, s, key, "true or false");
  }
  template <typename T>
  std::optional<std::vector<T>> list(const YAML::Node& n, const std::string& s, const char* key, const char* what) {
    const YAML::Node v = n && n.IsMap() ? n[key] : absent();
    if (v && !v.IsSequence()) {
      error(fmt::format("{}: expected a list of {}", key_path(s, key), what));
      return std::nullopt;
    }
    return get<std::vector<T>>(n, s, key, what);
  }
};

std::optional<GraphSpec> read_graph(Reader& r, const YAML::Node& g, const std::filesystem::path& base) {
  if (!g) return std::nullopt;
  const auto model = r.text(g, "graph", "model");
  if (!model) {
    if (!g["model"]) r.error("graph.model: required (er, knn, sbm or file)");
    return std::nullopt;
  }
  if (*model == "er") {
    r.allow_keys(g, "graph", {"model", "nodes", "p"});
    ErModel m;
    if (auto v = r.integer(g, "graph", "nodes")) m.nodes = *v;
    if (auto v = r.real(g, "graph", "p")) m.p = *v;
    return m;
  }
  if (*model == "knn") {
    r.allow_keys(g, "graph", {"model", "nodes", "k"});
    KnnModel m;
    if (auto v = r.integer(g, "graph", "nodes")) m.nodes = *v;
    if (auto v = r.integer(g, "graph", "k")) m.k = *v;
    return m;
  }
  if (*model == "sbm") {
    r.allow_keys(g, "graph", {"model", "sizes", "p_in", "p_out"});
    SbmModel m;
    if (auto v = r.list<int>(g, "graph", "sizes", "integers")) m.sizes = *v;
    if (auto v = r.real(g, "graph", "p_in")) m.p_in = *v;
    if (auto v = r.real(g, "graph", "p_out")) m.p_out = *v;
    return m;
  }
  if (*model == "file") {
    r.allow_keys(g, "graph", {"model", "path"});
    const auto path = r.text(g, "graph", "path");
    if (!path) {
      if (!g["path"]) r.error("graph.path: required for model 'file'");
      return std::nullopt;
    }
    return FileGraph{base / *path};
  }
  r.error(fmt::format("graph.model: unknown model '{}' (expected er, knn, sbm or file)", *model));
  return std::nullopt;
}

std::optional<GraphFilter> read_filter(Reader& r, const YAML::Node& f) {
  if (!f) return std::nullopt;
  const auto kind = r.text(f, "filter", "kind");
  if (!kind) {
    if (!f["kind"]) r.error("filter.kind: required (heat, resolvent, polynomial or ideal_lowpass)");
    return std::nullopt;
  }
  if (*kind == "heat") {
    r.allow_keys(f, "filter", {"kind", "alpha"});
    return HeatFilter{r.real(f, "filter", "alpha").value_or(1.0)};
  }
  if (*kind == "resolvent") {
    r.allow_keys(f, "filter", {"kind", "beta"});
    return ResolventFilter{r.real(f, "filter", "beta").value_or(1.0)};
  }
  if (*kind == "polynomial") {
    r.allow_keys(f, "filter", {"kind", "coefficients"});
    auto c = r.list<double>(f, "filter", "coefficients", "numbers");
    if (!c && !f["coefficients"]) r.error("filter.coefficients: required for kind 'polynomial'");
    return PolynomialFilter{c.value_or(std::vector<double>{})};
  }
  if (*kind == "ideal_lowpass") {
    r.allow_keys(f, "filter", {"kind", "cutoff"});
    return IdealLowpassFilter{r.integer(f, "filter", "cutoff").value_or(1)};
  }
  r.error(fmt::format("filter.kind: unknown kind '{}' (expected heat, resolvent, polynomial or ideal_lowpass)", *kind));
  return std::nullopt;
}

void read_solver(Reader& r, const YAML::Node& s, SolverConfig& cfg) {
  r.allow_keys(s, "solver", {"max_iters", "rel_tol", "power_iterations"});
  if (auto v = r.integer(s, "solver", "max_iters")) cfg.max_iters = *v;
  if (auto v = r.real(s, "solver", "rel_tol")) cfg.rel_tol = *v;
  if (auto v = r.integer(s, "solver", "power_iterations")) cfg.power_iterations = *v;
  if (cfg.max_iters < 1) r.error("solver.max_iters: must be >= 1");
  if (!(cfg.rel_tol > 0)) r.error("solver.rel_tol: must be > 0");
  if (cfg.power_iterations < 1) r.error("solver.power_iterations: must be >= 1");
}

// Runs the library precondition check and records its message instead of throwing.
template <typename Fn>
void collect(Reader& r, const std::string& where, Fn&& fn) {
  try {
    fn();
  } catch (const InvalidArgument& e) {
    r.error(where.empty() ? e.what() : where + ": " + e.what());
  } catch (const ParseError& e) {
    r.error(where.empty() ? e.what() : where + ": " + e.what());
  }
}

// Field-by-field range checks so that one pass reports every bad value.
void check_sweep_fields(Reader& r, const ExperimentConfig& cfg) {
  const TrialConfig& t = cfg.trial;
  std::optional<int> total;
  if (const auto* m = std::get_if<ErModel>(&t.graph)) {
    if (m->nodes < 2) r.error("graph.nodes: must be >= 2");
    if (!(m->p >= 0 && m->p <= 1)) r.error(fmt::format("graph.p: {} not in [0, 1]", m->p));
    total = m->nodes;
  } else if (const auto* m = std::get_if<KnnModel>(&t.graph)) {
    if (m->nodes < 2) r.error("graph.nodes: must be >= 2");
    if (m->k < 1 || m->k >= m->nodes) r.error(fmt::format("graph.k: {} not in [1, nodes - 1]", m->k));
    total = m->nodes;
  } else if (const auto* m = std::get_if<SbmModel>(&t.graph)) {
    int sum = 0;
    for (int s : m->sizes) {
      if (s < 1) r.error(fmt::format("graph.sizes: block size {} must be >= 1", s));
      sum += s;
    }
    if (m->sizes.empty()) r.error("graph.sizes: need at least one block");
    if (!(m->p_in >= 0 && m->p_in <= 1)) r.error(fmt::format("graph.p_in: {} not in [0, 1]", m->p_in));
    if (!(m->p_out >= 0 && m->p_out <= 1)) r.error(fmt::format("graph.p_out: {} not in [0, 1]", m->p_out));
    total = sum;
  } else if (const auto* f = std::get_if<FileGraph>(&t.graph)) {
    if (!std::filesystem::exists(f->path)) r.error("graph.path: file not found: " + f->path.string());
    else collect(r, "graph.path", [&] { total = node_count(t.graph); });
  }

  if (cfg.grid.param == SweepParam::none) collect(r, "filter", [&] { validate_filter(t.filter); });
  for (double v : cfg.grid.values) {
    if (cfg.grid.param == SweepParam::alpha) collect(r, "sweep.values", [&] { validate_filter(HeatFilter{v}); });
    if (cfg.grid.param == SweepParam::beta) collect(r, "sweep.values", [&] { validate_filter(ResolventFilter{v}); });
  }
  if (t.signals < 1) r.error("trial.signals: must be >= 1");
  if (!(t.lambda >= 0)) r.error("trial.lambda: must be >= 0");
  if (!(t.tau >= 0 && t.tau < 1)) r.error(fmt::format("trial.tau: {} not in [0, 1)", t.tau));
  if (!(t.delta > 0 && t.delta < 1)) r.error(fmt::format("trial.delta: {} not in (0, 1)", t.delta));
  if (t.K < 1 || (total && t.K > *total)) r.error(fmt::format("trial.K: {} out of range", t.K));
  for (int n : cfg.grid.observed)
    if (n < 2 || (total && n > *total))
      r.error(total ? fmt::format("sweep.observed: n = {} not in [2, {}]", n, *total)
                    : fmt::format("sweep.observed: n = {} must be >= 2", n));
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::runtime_error(join_errors(errors)), errors_(std::move(errors)) {}

void propagate_globals(ExperimentConfig& cfg) {
  cfg.trial.seed = cfg.seed;
  cfg.real.seed = cfg.seed;
  cfg.real.jobs = cfg.jobs;
}

ExperimentConfig parse_experiment_config(const std::string& text, const std::filesystem::path& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError({fmt::format("not valid YAML: {}", e.what())});
  }
  if (!root || root.IsNull()) throw ConfigError({"config is empty"});
  if (!root.IsMap()) throw ConfigError({"top level must be a set of key/value sections"});

  Reader r;
  ExperimentConfig cfg;
  r.allow_keys(root, "", {"experiment", "seed", "jobs", "output", "graph", "filter", "trial", "solver", "sweep", "real"});

  if (auto kind = r.text(root, "", "experiment")) {
    if (*kind == "sweep") cfg.kind = ExperimentConfig::Kind::sweep;
    else if (*kind == "real") cfg.kind = ExperimentConfig::Kind::real;
    else r.error(fmt::format("experiment: unknown kind '{}' (expected sweep or real)", *kind));
  }
  if (auto seed = r.get<long long>(root, "", "seed", "a non-negative integer")) {
    if (*seed < 0) r.error("seed: must be >= 0");
    else cfg.seed = static_cast<std::uint64_t>(*seed);
  }
  if (auto jobs = r.integer(root, "", "jobs")) {
    if (*jobs < 1) r.error("jobs: must be >= 1");
    else cfg.jobs = *jobs;
  }

  const YAML::Node output = r.section(root, "output");
  r.allow_keys(output, "output", {"dir"});
  if (auto dir = r.text(output, "output", "dir")) {
    cfg.out_dir = *dir;
    cfg.has_out_dir = true;
  }

  const YAML::Node graph = r.section(root, "graph");
  const YAML::Node filter = r.section(root, "filter");
  const YAML::Node trial = r.section(root, "trial");
  const YAML::Node solver = r.section(root, "solver");
  const YAML::Node sweep = r.section(root, "sweep");
  const YAML::Node real = r.section(root, "real");

  if (auto g = read_graph(r, graph, base_dir)) cfg.trial.graph = *g;
  const auto f = read_filter(r, filter);
  if (f) cfg.trial.filter = *f;

  r.allow_keys(trial, "trial", {"signals", "observed", "lambda", "tau", "K", "delta", "theory"});
  if (auto v = r.integer(trial, "trial", "signals")) cfg.trial.signals = *v;
  if (auto v = r.integer(trial, "trial", "observed")) {
    cfg.trial.observed = *v;
    cfg.has_observed = true;
  }
  if (auto v = r.real(trial, "trial", "lambda")) cfg.trial.lambda = *v;
  if (auto v = r.real(trial, "trial", "tau")) cfg.trial.tau = *v;
  if (auto v = r.integer(trial, "trial", "K")) cfg.trial.K = *v;
  if (auto v = r.real(trial, "trial", "delta")) cfg.trial.delta = *v;
  if (auto v = r.boolean(trial, "trial", "theory")) cfg.trial.theory = *v;
  read_solver(r, solver, cfg.trial.solver);

  r.allow_keys(sweep, "sweep", {"observed", "param", "values", "trials"});
  if (auto v = r.list<int>(sweep, "sweep", "observed", "integers")) cfg.grid.observed = *v;
  if (auto v = r.text(sweep, "sweep", "param")) {
    collect(r, "sweep.param", [&] { cfg.grid.param = parse_sweep_param(*v); });
  }
  if (auto v = r.list<double>(sweep, "sweep", "values", "numbers")) cfg.grid.values = *v;
  if (auto v = r.integer(sweep, "sweep", "trials")) cfg.trials = *v;

  r.allow_keys(real, "real", {"kind", "input", "signals", "altitude_threshold", "observed", "trials"});
  if (auto v = r.text(real, "real", "kind")) {
    if (*v == "congress") cfg.real.kind = RealExperimentConfig::Kind::congress;
    else if (*v == "stations") cfg.real.kind = RealExperimentConfig::Kind::stations;
    else r.error(fmt::format("real.kind: unknown kind '{}' (expected congress or stations)", *v));
  }
  if (auto v = r.text(real, "real", "input")) cfg.real.input = base_dir / *v;
  if (auto v = r.integer(real, "real", "signals")) cfg.real.signals = *v;
  if (auto v = r.real(real, "real", "altitude_threshold")) cfg.real.altitude_threshold = *v;
  if (auto v = r.list<int>(real, "real", "observed", "integers")) cfg.real.observed = *v;
  if (auto v = r.integer(real, "real", "trials")) cfg.real.trials = *v;
  if (f) cfg.real.filter = *f;
  cfg.real.lambda = cfg.trial.lambda;
  cfg.real.tau = cfg.trial.tau;

  propagate_globals(cfg);

  // Value checks against the pipeline preconditions, all before any work starts.
  if (cfg.kind == ExperimentConfig::Kind::sweep) {
    if (real) r.error("real: section only valid with 'experiment: real'");
    if (cfg.trials < 1) r.error("sweep.trials: must be >= 1");
    if (cfg.grid.param != SweepParam::none && cfg.grid.values.empty())
      r.error("sweep.values: required when sweep.param is set");
    if (cfg.grid.param == SweepParam::none && !cfg.grid.values.empty())
      r.error("sweep.values: given without sweep.param");
    if (!sweep || !sweep["observed"]) {
      if (cfg.has_observed) cfg.grid.observed = {cfg.trial.observed};
      else r.error("sweep.observed: required (list of observed node counts)");
    }
    check_sweep_fields(r, cfg);
    if (r.errors.empty()) {
      std::vector<double> values = cfg.grid.values;
      if (values.empty()) values = {0.0};
      for (double v : values)
        for (int n : cfg.grid.observed) {
          TrialConfig t = cfg.trial;
          t.observed = n;
          if (cfg.grid.param == SweepParam::alpha) t.filter = HeatFilter{v};
          if (cfg.grid.param == SweepParam::beta) t.filter = ResolventFilter{v};
          const std::string where =
              cfg.grid.param == SweepParam::none ? fmt::format("n={}", n)
                                                 : fmt::format("n={} {}={:g}", n, to_string(cfg.grid.param), v);
          const auto before = r.errors.size();
          collect(r, where, [&] {
            if (std::holds_alternative<FileGraph>(t.graph)) {
              // node count needs the file; validate what does not depend on it
              validate_filter(t.filter);
              return;
            }
            t.validate();
          });
          if (r.errors.size() > before) break;
        }
    }
  } else {
    if (sweep) r.error("sweep: section only valid with 'experiment: sweep'");
    if (graph) r.error("graph: not used by 'experiment: real' (the graph comes from real.input)");
    if (!real || !real["input"]) r.error("real.input: required");
    if (!real || !real["kind"]) r.error("real.kind: required (congress or stations)");
    if (cfg.real.trials < 1) r.error("real.trials: must be >= 1");
    if (cfg.real.signals < 1) r.error("real.signals: must be >= 1");
    if (!(cfg.real.altitude_threshold > 0)) r.error("real.altitude_threshold: must be > 0");
    if (!(cfg.real.lambda >= 0)) r.error("trial.lambda: must be >= 0");
    if (!(cfg.real.tau >= 0 && cfg.real.tau < 1)) r.error("trial.tau: must lie in [0, 1)");
    collect(r, "filter", [&] { validate_filter(cfg.real.filter); });
    if (!cfg.real.input.empty() && !std::filesystem::exists(cfg.real.input))
      r.error("real.input: file not found: " + cfg.real.input.string());
    for (int n : cfg.real.observed)
      if (n < 2) r.error(fmt::format("real.observed: n = {} must be >= 2", n));
  }

  if (!r.errors.empty()) throw ConfigError(std::move(r.errors));
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot read config file " + path.string()});
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_experiment_config(ss.str(), path.parent_path());
}

}  // namespace glearn::cli
