#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace glearn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Rng = std::mt19937_64;

/// Undirected simple graph stored as a dense symmetric adjacency matrix.
///
/// Construction validates symmetry, zero diagonal and nonnegativity, so a
/// Graph in hand always satisfies those invariants.
class Graph {
 public:
  explicit Graph(Matrix adjacency);
  static Graph empty(int n_nodes);

  int n_nodes() const noexcept { return static_cast<int>(adjacency_.rows()); }
  const Matrix& adjacency() const noexcept { return adjacency_; }
  double weight(int i, int j) const { return adjacency_(i, j); }

  /// Number of unordered pairs with nonzero weight.
  int edge_count() const;
  double total_weight() const;
  bool is_connected() const;
  Graph binarized() const;

  friend bool operator==(const Graph& a, const Graph& b) { return a.adjacency_ == b.adjacency_; }

 private:
  Matrix adjacency_;
};

/// L = D - A with D = Diag(A 1).
Matrix build_laplacian(const Graph& g);

/// Ascending eigenpairs of a symmetric matrix; column i of `vectors` pairs with `values[i]`.
struct Spectrum {
  Vector values;
  Matrix vectors;

  int size() const noexcept { return static_cast<int>(values.size()); }
  /// Leading k eigenvectors (the low-frequency frame).
  Matrix leading(int k) const;
};

Spectrum eigendecompose(const Matrix& laplacian);

/// Per-constraint membership of the trace-normalized Laplacian set.
struct LaplacianSetReport {
  double trace_violation = 0;       // |tr(L) - size| / size
  double row_sum_violation = 0;     // max_i |(L 1)_i|
  double off_diagonal_violation = 0;  // max_{i != j} max(L_ij, 0)
  double symmetry_violation = 0;    // max |L - L^T|
  bool trace_ok = false;
  bool row_sum_ok = false;
  bool off_diagonal_ok = false;
  bool symmetry_ok = false;

  bool ok() const noexcept { return trace_ok && row_sum_ok && off_diagonal_ok && symmetry_ok; }
  std::string summary() const;
};

LaplacianSetReport validate_in_laplacian_set(const Matrix& laplacian, int size, double tol);

// Random graph models. Each sample is redrawn until connected, up to
// kConnectivityRetries draws, after which ConnectivityError is thrown.
inline constexpr int kConnectivityRetries = 100;

Graph generate_er(int n, double p, Rng& rng);

/// kNN graph together with the sampled planar coordinates.
struct KnnSample {
  Graph graph;
  std::vector<Eigen::Vector2d> points;
};

KnnSample generate_knn_with_points(int n, int k, Rng& rng);
Graph generate_knn(int n, int k, Rng& rng);
Graph generate_sbm(const std::vector<int>& sizes, double p_in, double p_out, Rng& rng);

/// Edge-list CSV with lines `i,j,weight` (0-based). A non-numeric first token
/// on the first line marks a header. When `n_nodes` is 0 the node count is
/// inferred as max index + 1.
Graph load_edge_list(const std::filesystem::path& path, int n_nodes = 0);
Graph parse_edge_list(std::istream& in, int n_nodes = 0);
void save_edge_list(const Graph& g, const std::filesystem::path& path);
void write_edge_list(const Graph& g, std::ostream& out);

void write_points(const std::vector<Eigen::Vector2d>& points, std::ostream& out);
void save_points(const std::vector<Eigen::Vector2d>& points, const std::filesystem::path& path);

}  // namespace glearn
