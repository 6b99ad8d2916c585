#pragma once

#include "glearn/graph.hpp"

#include <span>
#include <string>
#include <vector>

namespace glearn {

/// Ordered subset of observed nodes. Row r of the selection operator picks
/// node `observed()[r]`; order is kept as given.
class ObservationMask {
 public:
  ObservationMask(int total_nodes, std::vector<int> observed);
  static ObservationMask full(int total_nodes);

  int total_nodes() const noexcept { return total_; }
  int size() const noexcept { return static_cast<int>(observed_.size()); }
  const std::vector<int>& observed() const noexcept { return observed_; }
  bool is_observed(int node) const { return position_[node] >= 0; }
  /// Nodes not in the mask, ascending.
  std::vector<int> hidden() const;

  /// E_o as an explicit n x N 0/1 matrix (tests and small cases).
  Matrix selection_matrix() const;
  std::string to_csv() const;

 private:
  int total_;
  std::vector<int> observed_;
  std::vector<int> position_;
};

/// Uniform n-subset of {0..N-1} in random order.
ObservationMask sample_observation(int total_nodes, int n, Rng& rng);

/// Columns of y (M x N) selected in mask order.
Matrix restrict_signals(const ObservationMask& mask, const Matrix& y);
/// Principal submatrix E_o L E_o^T.
Matrix restrict_laplacian(const ObservationMask& mask, const Matrix& laplacian);

/// Observed/hidden split of a Laplacian.
struct BlockDecomposition {
  Matrix oo;               // E_o L E_o^T
  Vector oh_row_sums;      // L_oh 1, signed (<= 0 for a Laplacian)
  double trace_oo = 0;
  double coupling = 0;     // 1^T L_oh 1

  /// max_i (-L_oh 1)_i, the hidden-coupling level of each observed node.
  double hidden_coupling_max() const;
  /// (tr(L_oo) + 1^T L_oh 1) / n, the observed-subgraph degree level.
  double degree_level() const;
};

BlockDecomposition block_decompose(const ObservationMask& mask, const Matrix& laplacian);

/// (N/n) E_o^T L_p E_o, the partial solution lifted into the N-node set.
Matrix lift_surrogate_full(const ObservationMask& mask, const Matrix& partial_laplacian, double tol = 1e-8);

/// n / (tr(L_oo) + 1^T L_oh 1) * (E_o L E_o^T + Diag(L_oh 1)), the full
/// solution pushed into the n-node set. Throws DegenerateSurrogate when the
/// normalizer is not positive.
Matrix project_surrogate_partial(const ObservationMask& mask, const Matrix& full_laplacian);

}  // namespace glearn
