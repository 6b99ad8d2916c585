#pragma once

#include "glearn/graph.hpp"

#include <optional>

namespace glearn {

// Edge-weight parameterization of the normalized Laplacian set.
//
// A vector w >= 0 over unordered pairs (i < j, lexicographic) determines
// L(w) with off-diagonal -w_ij and diagonal equal to the weighted degree.
// Symmetry and zero row sums hold by construction; tr(L(w)) = 2 * sum(w), so
// the trace-n constraint is the scaled simplex {w >= 0, 1'w = n/2}.

inline int pair_count(int n) { return n * (n - 1) / 2; }
inline int pair_index(int i, int j, int n) { return i * n - i * (i + 1) / 2 + (j - i - 1); }

Matrix laplacian_from_weights(const Vector& w, int n);
/// Off-diagonal weights -L_ij read back from a Laplacian.
Vector weights_from_laplacian(const Matrix& laplacian);

/// z_(i,j) = sum_m (Y[m,i] - Y[m,j])^2, so that sum_m y_m' L(w) y_m = z'w.
Vector pairwise_energy_vector(const Matrix& y);

/// sum_m y_m' L y_m + (lambda / 2) ||L||_F^2, with rows of `y` as the y_m.
double objective(const Matrix& laplacian, const Matrix& y, double lambda);

/// Euclidean projection onto {w >= 0, 1'w = radius}.
Vector simplex_projection(const Vector& v, double radius);

struct SolverConfig {
  double lambda = 2.0;
  int max_iters = 20000;
  /// Stop once the duality gap certifies objective error <= rel_tol * (1 + |J|).
  double rel_tol = 1e-9;
  int power_iterations = 20;
};

struct SolveResult {
  Matrix laplacian;
  Vector weights;
  double objective = 0;
  int iterations = 0;
  bool converged = false;
  /// Norm of the projected-gradient mapping at the returned point.
  double kkt_residual = 0;
  /// Frank-Wolfe duality gap, an upper bound on J - J*.
  double duality_gap = 0;
  double gradient_norm = 0;
  /// Objective after each iteration; filled only when requested.
  std::vector<double> trace;
};

struct SolveOptions {
  std::optional<Vector> initial_weights;
  bool record_trace = false;
};

/// Minimize the GL-SigRep objective over the normalized Laplacian set of
/// size y.cols(). The same routine serves full and partial observations.
SolveResult solve_gl_sigrep(const Matrix& y, const SolverConfig& cfg, const SolveOptions& options = {});

struct ThresholdResult {
  Graph graph;
  /// True when L had no off-diagonal weight and the result is empty by default.
  bool degenerate = false;
};

/// Binary graph keeping pairs with -L_ij > tau * max_{k<l} (-L_kl).
ThresholdResult threshold_edges(const Matrix& laplacian, double tau = 0.1);

}  // namespace glearn
