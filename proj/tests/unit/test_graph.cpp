#include "glearn/error.hpp"
#include "glearn/graph.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace glearn;

namespace {

Graph triangle() {
  Matrix a = Matrix::Ones(3, 3);
  a.diagonal().setZero();
  return Graph(a);
}

Graph complete(int n) {
  Matrix a = Matrix::Ones(n, n);
  a.diagonal().setZero();
  return Graph(a);
}

Graph path3() {
  Matrix a = Matrix::Zero(3, 3);
  a(0, 1) = a(1, 0) = a(1, 2) = a(2, 1) = 1;
  return Graph(a);
}

Graph parse(const std::string& text, int n = 0) {
  std::istringstream in(text);
  return parse_edge_list(in, n);
}

}  // namespace

TEST(Graph, RejectsAsymmetricNegativeOrLoopedAdjacency) {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 1) = 1;
  EXPECT_THROW(Graph{a}, InvalidArgument);
  a(1, 0) = 1;
  a(0, 0) = 0.5;
  EXPECT_THROW(Graph{a}, InvalidArgument);
  a(0, 0) = 0;
  a(0, 1) = a(1, 0) = -1;
  EXPECT_THROW(Graph{a}, InvalidArgument);
}

TEST(Laplacian, SingleEdge) {
  Matrix a(2, 2);
  a << 0, 1, 1, 0;
  Matrix expected(2, 2);
  expected << 1, -1, -1, 1;
  EXPECT_EQ(build_laplacian(Graph(a)), expected);
}

TEST(Laplacian, EmptyGraphGivesZeroMatrix) {
  EXPECT_EQ(build_laplacian(Graph::empty(3)), Matrix::Zero(3, 3));
}

TEST(Laplacian, TriangleHasDegreeTwoDiagonal) {
  const Matrix L = build_laplacian(triangle());
  Matrix expected = 3 * Matrix::Identity(3, 3) - Matrix::Ones(3, 3);
  EXPECT_EQ(L, expected);
  EXPECT_EQ(L.diagonal(), Vector::Constant(3, 2.0));
}

TEST(Laplacian, RowSumsVanishAndTraceIsTwiceTotalWeight) {
  Rng rng(11);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 5 + rep;
    Matrix a = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) a(i, j) = a(j, i) = u(rng) < 1.0 ? 0.0 : u(rng);
    const Graph g(a);
    const Matrix L = build_laplacian(g);
    EXPECT_LE(L.rowwise().sum().cwiseAbs().maxCoeff(), 1e-9 * n);
    EXPECT_NEAR(L.trace(), 2.0 * g.total_weight(), 1e-9 * L.trace());
    EXPECT_LE((L - oracle::laplacian(a)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Spectrum, ZeroMatrix) {
  const Spectrum s = eigendecompose(Matrix::Zero(2, 2));
  EXPECT_NEAR(s.values(0), 0.0, 1e-15);
  EXPECT_NEAR(s.values(1), 0.0, 1e-15);
}

TEST(Spectrum, SingleEdgeClosedForm) {
  Matrix L(2, 2);
  L << 1, -1, -1, 1;
  const Spectrum s = eigendecompose(L);
  EXPECT_NEAR(s.values(0), 0.0, 1e-12);
  EXPECT_NEAR(s.values(1), 2.0, 1e-12);
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(s.vectors(0, 1)), r, 1e-12);
  EXPECT_NEAR(s.vectors(0, 1), -s.vectors(1, 1), 1e-12);
}

TEST(Spectrum, CompleteGraphK4) {
  const Spectrum s = eigendecompose(build_laplacian(complete(4)));
  EXPECT_NEAR(s.values(0), 0.0, 1e-12);
  for (int i = 1; i < 4; ++i) EXPECT_NEAR(s.values(i), 4.0, 1e-12);
}

TEST(Spectrum, ReconstructsOrthonormalAscendingWithFlatNullVector) {
  Rng rng(3);
  for (int rep = 0; rep < 10; ++rep) {
    const Graph g = generate_er(30, 0.2, rng);
    const Matrix L = build_laplacian(g);
    const Spectrum s = eigendecompose(L);
    const Matrix rec = s.vectors * s.values.asDiagonal() * s.vectors.transpose();
    EXPECT_LE((rec - L).cwiseAbs().maxCoeff(), 1e-7 * L.cwiseAbs().maxCoeff());
    EXPECT_LE((s.vectors.transpose() * s.vectors - Matrix::Identity(30, 30)).cwiseAbs().maxCoeff(), 1e-8);
    for (int i = 1; i < 30; ++i) EXPECT_LE(s.values(i - 1), s.values(i));
    EXPECT_NEAR(s.values(0), 0.0, 1e-8);
    const double flat = 1.0 / std::sqrt(30.0);
    EXPECT_LE((s.vectors.col(0).cwiseAbs() - Vector::Constant(30, flat)).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(LaplacianSet, ScaledTriangleIsMember) {
  const Matrix L = build_laplacian(triangle()) * (3.0 / 6.0);
  const auto r = validate_in_laplacian_set(L, 3, 1e-12);
  EXPECT_TRUE(r.ok()) << r.summary();
}

TEST(LaplacianSet, PositiveOffDiagonalReportedWithMagnitude) {
  Matrix L = build_laplacian(triangle()) * 0.5;
  L(0, 1) = L(1, 0) = 0.25;
  L(0, 0) = L(1, 1) = -0.25 + 0.5;
  const auto r = validate_in_laplacian_set(L, 3, 1e-9);
  EXPECT_FALSE(r.off_diagonal_ok);
  EXPECT_DOUBLE_EQ(r.off_diagonal_violation, 0.25);
  EXPECT_FALSE(r.ok());
}

TEST(LaplacianSet, AsymmetricPerturbationFailsSymmetry) {
  Matrix L = build_laplacian(triangle()) * 0.5;
  L(0, 1) += 1e-3;
  L(0, 2) -= 1e-3;  // keep the row sum at zero
  const auto r = validate_in_laplacian_set(L, 3, 1e-6);
  EXPECT_FALSE(r.symmetry_ok);
  EXPECT_NEAR(r.symmetry_violation, 1e-3, 1e-12);
  EXPECT_TRUE(r.row_sum_ok);
}

TEST(LaplacianSet, WrongTraceAndDimensionMismatch) {
  const auto r = validate_in_laplacian_set(build_laplacian(triangle()), 3, 1e-9);
  EXPECT_FALSE(r.trace_ok);
  EXPECT_NEAR(r.trace_violation, 1.0, 1e-12);
  EXPECT_THROW(validate_in_laplacian_set(Matrix::Zero(3, 3), 4, 1e-9), InvalidArgument);
}

TEST(ErdosRenyi, FullProbabilityGivesCompleteGraph) {
  Rng rng(1);
  EXPECT_EQ(generate_er(7, 1.0, rng), complete(7));
}

TEST(ErdosRenyi, ZeroProbabilityNeverConnects) {
  Rng rng(1);
  EXPECT_THROW(generate_er(2, 0.0, rng), ConnectivityError);
}

TEST(ErdosRenyi, RejectsBadParameters) {
  Rng rng(1);
  EXPECT_THROW(generate_er(1, 0.5, rng), InvalidArgument);
  EXPECT_THROW(generate_er(5, 1.5, rng), InvalidArgument);
  EXPECT_THROW(generate_er(5, -0.1, rng), InvalidArgument);
}

TEST(ErdosRenyi, EdgeCountWithinFourSigmaOfBinomialMean) {
  // mean p C(50,2) = 245, sd sqrt(245 * 0.8) ~ 14
  const double mean = 0.2 * 1225, sd = std::sqrt(mean * 0.8);
  for (std::uint64_t seed : {7u, 8u, 9u, 10u}) {
    Rng rng(seed);
    const Graph g = generate_er(50, 0.2, rng);
    EXPECT_TRUE(g.is_connected());
    EXPECT_LE(std::abs(g.edge_count() - mean), 4 * sd) << "seed " << seed;
  }
}

TEST(ErdosRenyi, SameSeedSameGraph) {
  Rng a(42), b(42);
  EXPECT_EQ(generate_er(20, 0.3, a), generate_er(20, 0.3, b));
}

TEST(Knn, TwoNodesOneNeighbor) {
  Rng rng(5);
  const Graph g = generate_knn(2, 1, rng);
  EXPECT_EQ(g.edge_count(), 1);
  EXPECT_EQ(g.weight(0, 1), 1.0);
}

TEST(Knn, DegreesAtLeastKAndEdgesMatchBruteForceNeighbors) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Rng rng(seed);
    const KnnSample s = generate_knn_with_points(20, 5, rng);
    const Graph& g = s.graph;
    EXPECT_TRUE(g.is_connected());
    for (int i = 0; i < 20; ++i) {
      int deg = 0;
      for (int j = 0; j < 20; ++j) deg += g.weight(i, j) > 0;
      EXPECT_GE(deg, 5);
      EXPECT_LE(deg, 19);
    }
    // recompute the symmetrized neighbor relation from the coordinates
    for (int i = 0; i < 20; ++i) {
      std::vector<std::pair<double, int>> d;
      for (int j = 0; j < 20; ++j)
        if (j != i) d.emplace_back((s.points[i] - s.points[j]).norm(), j);
      std::sort(d.begin(), d.end());
      for (int r = 0; r < 5; ++r) EXPECT_EQ(g.weight(i, d[r].second), 1.0);
    }
    for (int i = 0; i < 20; ++i)
      for (int j = 0; j < 20; ++j)
        if (g.weight(i, j) > 0) {
          auto in_knn = [&](int a, int b) {
            const double dab = (s.points[a] - s.points[b]).norm();
            int closer = 0;
            for (int c = 0; c < 20; ++c)
              if (c != a && c != b && (s.points[a] - s.points[c]).norm() < dab) ++closer;
            return closer < 5;
          };
          EXPECT_TRUE(in_knn(i, j) || in_knn(j, i));
        }
    for (const auto& p : s.points) {
      EXPECT_GE(p.minCoeff(), 0.0);
      EXPECT_LT(p.maxCoeff(), 1.0);
    }
  }
}

TEST(Knn, RejectsKOutOfRange) {
  Rng rng(1);
  EXPECT_THROW(generate_knn(5, 0, rng), InvalidArgument);
  EXPECT_THROW(generate_knn(5, 5, rng), InvalidArgument);
}

TEST(Sbm, TwoCliquesWithoutBridgeExhaustRetries) {
  Rng rng(1);
  EXPECT_THROW(generate_sbm({5, 5}, 1.0, 0.0, rng), ConnectivityError);
}

TEST(Sbm, AllOnesGivesCompleteGraph) {
  Rng rng(1);
  EXPECT_EQ(generate_sbm({3, 4}, 1.0, 1.0, rng), complete(7));
}

TEST(Sbm, WithinBlockEdgeCountWithinFourSigma) {
  // mean 0.6 * 2 * C(10,2) = 54, sd sqrt(90 * 0.6 * 0.4)
  const double mean = 54, sd = std::sqrt(90 * 0.6 * 0.4);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    Rng rng(seed);
    const Graph g = generate_sbm({10, 10}, 0.6, 0.05, rng);
    EXPECT_TRUE(g.is_connected());
    int within = 0, across = 0;
    for (int i = 0; i < 20; ++i)
      for (int j = i + 1; j < 20; ++j)
        if (g.weight(i, j) > 0) ((i < 10) == (j < 10) ? within : across)++;
    EXPECT_LE(std::abs(within - mean), 4 * sd) << "seed " << seed;
    EXPECT_LE(across, 100 * 0.05 + 4 * std::sqrt(100 * 0.05 * 0.95));
  }
}

TEST(EdgeList, SingleEdge) {
  const Graph g = parse("0,1,1.0\n", 2);
  EXPECT_EQ(g.n_nodes(), 2);
  EXPECT_EQ(g.weight(0, 1), 1.0);
  EXPECT_EQ(g.weight(1, 0), 1.0);
}

TEST(EdgeList, SelfLoopRejectedWithLineNumber) {
  try {
    parse("0,1,1\n1,1,1.0\n", 2);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(EdgeList, HeaderDetectionAndMalformedInput) {
  EXPECT_EQ(parse("i,j,weight\n0,2,0.5\n").n_nodes(), 3);
  EXPECT_THROW(parse("0,1\n"), ParseError);
  EXPECT_THROW(parse("0,1,-1\n"), ParseError);
  EXPECT_THROW(parse("0,1,1\n1,0,1\n"), ParseError);  // duplicate pair
  EXPECT_THROW(parse("0,5,1\n", 3), ParseError);      // index out of range
  EXPECT_THROW(parse("0,x,1\n1,2,1\n"), ParseError);
}

TEST(EdgeList, SaveLoadRoundTrip) {
  Rng rng(9);
  const Graph g = generate_er(10, 0.3, rng);
  const auto path = std::filesystem::temp_directory_path() / "glearn_roundtrip_edges.csv";
  save_edge_list(g, path);
  EXPECT_EQ(load_edge_list(path), g);
  std::filesystem::remove(path);

  // non-integer weights survive exactly
  Matrix a = Matrix::Zero(3, 3);
  a(0, 2) = a(2, 0) = 0.1 + 0.2;
  a(1, 2) = a(2, 1) = 1.0 / 3.0;
  std::ostringstream out;
  write_edge_list(Graph(a), out);
  EXPECT_EQ(parse(out.str()), Graph(a));
}

TEST(EdgeList, NodeCountLineKeepsIsolatedTrailingNodes) {
  std::ostringstream out;
  Matrix a = Matrix::Zero(4, 4);
  a(0, 1) = a(1, 0) = 1;
  write_edge_list(Graph(a), out);
  EXPECT_EQ(parse(out.str()).n_nodes(), 4);
}

TEST(Graph, ConnectivityAndBinarize) {
  EXPECT_TRUE(path3().is_connected());
  EXPECT_FALSE(Graph::empty(3).is_connected());
  Matrix a = Matrix::Zero(3, 3);
  a(0, 1) = a(1, 0) = 0.3;
  const Graph b = Graph(a).binarized();
  EXPECT_EQ(b.weight(0, 1), 1.0);
  EXPECT_EQ(b.edge_count(), 1);
}
