#include "glearn/error.hpp"
#include "glearn/harness.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>

using namespace glearn;

namespace {

const std::filesystem::path kFixtures = GLEARN_FIXTURE_DIR;

Graph from_edges(int n, std::initializer_list<std::pair<int, int>> edges) {
  Matrix a = Matrix::Zero(n, n);
  for (auto [i, j] : edges) a(i, j) = a(j, i) = 1;
  return Graph(a);
}

TrialConfig small_config() {
  TrialConfig cfg;
  cfg.graph = ErModel{20, 0.3};
  cfg.filter = HeatFilter{0.3};
  cfg.signals = 60;
  cfg.observed = 12;
  cfg.K = 3;
  return cfg;
}

}  // namespace

TEST(F1, Examples) {
  const Graph truth = from_edges(4, {{0, 1}, {1, 2}});
  EXPECT_DOUBLE_EQ(f1_score(truth, truth).f1, 1.0);
  const auto half = f1_score(from_edges(4, {{0, 1}, {2, 3}}), truth);
  EXPECT_DOUBLE_EQ(half.precision, 0.5);
  EXPECT_DOUBLE_EQ(half.recall, 0.5);
  EXPECT_DOUBLE_EQ(half.f1, 0.5);
  EXPECT_DOUBLE_EQ(f1_score(Graph::empty(4), truth).f1, 0.0);
  EXPECT_DOUBLE_EQ(f1_score(from_edges(4, {{0, 3}}), truth).f1, 0.0);
  EXPECT_DOUBLE_EQ(f1_score(Graph::empty(3), Graph::empty(3)).f1, 1.0);
  EXPECT_THROW(f1_score(Graph::empty(3), truth), InvalidArgument);
  // 2 of 3 estimated edges correct, 2 of 2 true edges found
  EXPECT_NEAR(f1_score(from_edges(4, {{0, 1}, {1, 2}, {0, 2}}), truth).f1, 0.8, 1e-15);
}

TEST(F1, SymmetricAndBounded) {
  Rng rng(3);
  for (int rep = 0; rep < 50; ++rep) {
    const Graph a = generate_er(12, 0.3, rng), b = generate_er(12, 0.4, rng);
    const double ab = f1_score(a, b).f1, ba = f1_score(b, a).f1;
    EXPECT_DOUBLE_EQ(ab, ba);
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, 1.0);
  }
}

TEST(AltitudeGroundTruth, Examples) {
  const Graph g = altitude_ground_truth({100, 350, 700, 399.9}, 300);
  EXPECT_EQ(g.weight(0, 1), 1.0);
  EXPECT_EQ(g.weight(0, 3), 1.0);
  EXPECT_EQ(g.weight(1, 2), 0.0);  // exactly 350 apart
  EXPECT_EQ(g.weight(2, 3), 0.0);  // 300.1 apart
  EXPECT_EQ(g.weight(1, 3), 1.0);
  EXPECT_EQ(g.edge_count(), 3);
  EXPECT_EQ(altitude_ground_truth({0, 300}, 300).edge_count(), 0);
  EXPECT_THROW(altitude_ground_truth({}), InvalidArgument);
}

TEST(Quartiles, LinearInterpolation) {
  const auto q = quartiles({4, 1, 3, 2, 5});
  EXPECT_DOUBLE_EQ(q.q1, 2);
  EXPECT_DOUBLE_EQ(q.median, 3);
  EXPECT_DOUBLE_EQ(q.q3, 4);
  const auto e = quartiles({1, 2, 3, 4});
  EXPECT_DOUBLE_EQ(e.median, 2.5);
  EXPECT_DOUBLE_EQ(e.q1, 1.75);
  EXPECT_DOUBLE_EQ(quartiles({7}).q3, 7);
  EXPECT_TRUE(std::isnan(quartiles({}).median));
  EXPECT_DOUBLE_EQ(quartiles({1, std::nan(""), 3}).median, 2);
}

TEST(DefaultGrid, FiftyNodesGivesTenToFifty) {
  EXPECT_EQ(default_observed_grid(50), (std::vector<int>{10, 15, 20, 25, 30, 35, 40, 45, 50}));
  EXPECT_EQ(default_observed_grid(5), (std::vector<int>{2, 3, 4, 5}));
}

TEST(TrialConfig, ValidationNamesTheField) {
  TrialConfig cfg = small_config();
  cfg.observed = 21;
  try {
    cfg.validate();
    FAIL();
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("observed"), std::string::npos);
  }
  cfg = small_config();
  cfg.tau = 1;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  cfg = small_config();
  cfg.filter = HeatFilter{-1};
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  EXPECT_THROW(run_trial(cfg), TrialError);
}

TEST(DeriveRng, DistinctTagsAndStreamsDiffer) {
  auto a = derive_rng(1, 0, 1), b = derive_rng(1, 0, 1), c = derive_rng(1, 0, 2), d = derive_rng(1, 1, 1);
  const auto va = a();
  EXPECT_EQ(va, b());
  EXPECT_NE(va, c());
  EXPECT_NE(va, d());
}

TEST(RunTrial, FullObservationMakesPartialAndFullAgree) {
  TrialConfig cfg = small_config();
  cfg.observed = 20;
  const TrialResult r = run_trial(cfg);
  EXPECT_TRUE(r.violations.empty());
  EXPECT_NEAR(r.ratio, 1.0, 1e-6);
  EXPECT_DOUBLE_EQ(r.f1_partial_vs_full, 1.0);
  EXPECT_DOUBLE_EQ(r.f1_partial, r.f1_full_restricted);
  EXPECT_NEAR(r.jp_star, r.jf_star, 1e-12 * (1 + r.jf_star));
}

TEST(RunTrial, RatioAtLeastOneOnTheReferenceSetting) {
  TrialConfig cfg;
  cfg.graph = ErModel{50, 0.2};
  cfg.filter = HeatFilter{0.3};
  cfg.observed = 30;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    cfg.seed = seed;
    const TrialResult r = run_trial(cfg);
    EXPECT_TRUE(r.violations.empty());
    EXPECT_FALSE(r.degenerate);
    EXPECT_GE(r.ratio, 1.0 - 1e-8);
    EXPECT_TRUE(r.converged);
    EXPECT_LE(r.worst_constraint_violation, 1e-8);
    EXPECT_EQ(r.mask.size(), 30u);
  }
}

TEST(RunTrial, DeterministicInTheSeed) {
  const TrialConfig cfg = small_config();
  const TrialResult a = run_trial(cfg), b = run_trial(cfg);
  EXPECT_EQ(a.mask, b.mask);
  EXPECT_EQ(a.jp_star, b.jp_star);
  EXPECT_EQ(a.jf_star, b.jf_star);
  EXPECT_EQ(a.f1_partial, b.f1_partial);
  TrialConfig other = cfg;
  other.seed = 2;
  EXPECT_NE(run_trial(other).jf_star, a.jf_star);
}

TEST(RunTrial, MissingGraphFileIsAGraphStageError) {
  TrialConfig cfg = small_config();
  cfg.graph = FileGraph{"/nonexistent/graph.csv"};
  EXPECT_THROW(run_trial(cfg), std::exception);
}

TEST(RunTrialOn, FixtureGraphAndSignals) {
  const Graph truth = load_edge_list(kFixtures / "er50_graph.csv");
  const Matrix y = load_signals(kFixtures / "er50_signals.csv");
  ASSERT_EQ(truth.n_nodes(), 50);
  ASSERT_EQ(y.cols(), 50);
  Rng rng(4);
  const auto mask = sample_observation(50, 25, rng);
  TrialConfig cfg;
  const TrialResult r = run_trial_on(FixedData{truth, y, std::nullopt, std::nullopt}, mask, cfg);
  EXPECT_TRUE(r.violations.empty());
  EXPECT_GT(r.f1_partial, 0.0);
  EXPECT_THROW(run_trial_on(FixedData{truth, y.leftCols(49), std::nullopt, std::nullopt}, mask, cfg),
               InvalidArgument);
}

TEST(Sweep, SinglePointMatchesRunTrialAndIsJobIndependent) {
  TrialConfig cfg = small_config();
  SweepGrid grid{{12}, SweepParam::none, {}};
  const SweepResult one = run_sweep(cfg, grid, 4, 1);
  const SweepResult four = run_sweep(cfg, grid, 4, 4);
  ASSERT_EQ(one.rows.size(), 1u);
  EXPECT_EQ(sweep_csv(one), sweep_csv(four));
  EXPECT_EQ(trial_log_csv(one), trial_log_csv(four));
  EXPECT_EQ(one.rows[0].trials, 4);
  EXPECT_TRUE(one.violations.empty());
  const std::string csv = sweep_csv(one);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "n,param,median_f1_partial,q1,q3,median_ratio,ratio_q1,ratio_q3,trials");
}

TEST(Sweep, AlphaColumnsShareTrialsAndReportEveryPoint) {
  TrialConfig cfg = small_config();
  SweepGrid grid{{8, 20}, SweepParam::alpha, {0.2, 1.0}};
  const SweepResult s = run_sweep(cfg, grid, 3, 2);
  ASSERT_EQ(s.rows.size(), 4u);
  for (const auto& row : s.rows) {
    EXPECT_TRUE(row.failure.empty());
    if (row.n == 20) EXPECT_DOUBLE_EQ(row.f1_partial.median, 1.0);
  }
  // same trial seed at each point: the same mask at equal n
  EXPECT_EQ(s.rows[0].results[1].mask, s.rows[2].results[1].mask);
  EXPECT_THROW(run_sweep(cfg, SweepGrid{{}, SweepParam::none, {}}, 3), InvalidArgument);
  EXPECT_THROW(run_sweep(cfg, grid, 0), InvalidArgument);
}

TEST(Sweep, FailingPointIsRecordedNotThrown) {
  TrialConfig cfg = small_config();
  const SweepResult s = run_sweep(cfg, SweepGrid{{12, 25}, SweepParam::none, {}}, 2);
  EXPECT_TRUE(s.rows[0].failure.empty());
  EXPECT_FALSE(s.rows[1].failure.empty());
  EXPECT_NE(trial_log_csv(s).find("aborted"), std::string::npos);
}

TEST(SweepParam, ParsesNames) {
  EXPECT_EQ(parse_sweep_param("alpha"), SweepParam::alpha);
  EXPECT_EQ(parse_sweep_param("beta"), SweepParam::beta);
  EXPECT_EQ(to_string(SweepParam::none), "none");
  EXPECT_THROW(parse_sweep_param("gamma"), InvalidArgument);
}

TEST(Stations, FixtureLoads) {
  const StationData d = load_stations(kFixtures / "stations_40.csv");
  EXPECT_EQ(d.ids.size(), 40u);
  EXPECT_EQ(d.readings.rows(), 40);
  EXPECT_EQ(d.readings.cols(), 12);
  EXPECT_EQ(d.ids[0], "ST00");
  EXPECT_DOUBLE_EQ(d.altitudes[0], 1557);
  EXPECT_DOUBLE_EQ(d.readings(0, 0), -8.71);
}

TEST(Stations, MalformedFilesReportTheLine) {
  const auto path = std::filesystem::temp_directory_path() / "glearn_bad_stations.csv";
  {
    std::ofstream out(path);
    out << "station_id,altitude_m,t1\nA,100,1.5\nB,abc,2\n";
  }
  try {
    load_stations(path);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  {
    std::ofstream out(path);
    out << "id,alt,t\n";
  }
  EXPECT_THROW(load_stations(path), ParseError);
  std::filesystem::remove(path);
}

// Monthly temperatures are driven by altitude, so learning from all stations
// should beat random graphs of the same density against the altitude graph.
TEST(Stations, LearnedGraphBeatsRandomGraphs) {
  const StationData d = load_stations(kFixtures / "stations_40.csv");
  const Graph truth = altitude_ground_truth(d.altitudes, 300);
  const Matrix y = d.readings.transpose();
  TrialConfig cfg;
  cfg.theory = false;
  const TrialResult r = run_trial_on(FixedData{truth, y, std::nullopt, std::nullopt}, ObservationMask::full(40), cfg);
  const double density = truth.edge_count() / (40.0 * 39 / 2);
  std::vector<double> baseline;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(seed);
    std::bernoulli_distribution keep(density);
    Matrix a = Matrix::Zero(40, 40);
    for (int i = 0; i < 40; ++i)
      for (int j = i + 1; j < 40; ++j)
        if (keep(rng)) a(i, j) = a(j, i) = 1;
    baseline.push_back(f1_score(Graph(a), truth).f1);
  }
  EXPECT_GT(r.f1_partial, *std::max_element(baseline.begin(), baseline.end()));
}

TEST(RealExperiment, CongressFixtureRuns) {
  RealExperimentConfig cfg;
  cfg.kind = RealExperimentConfig::Kind::congress;
  cfg.input = kFixtures / "congress_30.csv";
  cfg.signals = 50;
  cfg.observed = {10, 30};
  cfg.trials = 3;
  const auto rows = run_real_experiment(cfg);
  ASSERT_EQ(rows.size(), 2u);
  for (const auto& row : rows) EXPECT_TRUE(row.violations.empty());
  EXPECT_DOUBLE_EQ(rows[1].f1_partial.median, rows[1].f1_full.median);
  EXPECT_NE(real_csv(rows).find("n,median_f1_partial"), std::string::npos);
  cfg.observed = {31};
  EXPECT_THROW(run_real_experiment(cfg), InvalidArgument);
}

TEST(RealExperiment, StationsFixtureRuns) {
  RealExperimentConfig cfg;
  cfg.kind = RealExperimentConfig::Kind::stations;
  cfg.input = kFixtures / "stations_40.csv";
  cfg.trials = 2;
  const auto rows = run_real_experiment(cfg);
  EXPECT_EQ(rows.size(), default_observed_grid(40).size());
  EXPECT_EQ(rows.back().n, 40);
}
