#include "glearn/observation.hpp"

#include "glearn/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <numeric>

namespace glearn {

ObservationMask::ObservationMask(int total_nodes, std::vector<int> observed)
    : total_(total_nodes), observed_(std::move(observed)), position_(std::max(total_nodes, 0), -1) {
  const int n = size();
  if (total_ < 1 || n < 1 || n > total_)
    throw InvalidArgument(fmt::format("mask: need 1 <= n <= N, got n = {}, N = {}", n, total_));
  for (int r = 0; r < n; ++r) {
    const int node = observed_[r];
    if (node < 0 || node >= total_) throw InvalidArgument(fmt::format("mask: node {} out of range", node));
    if (position_[node] >= 0) throw InvalidArgument(fmt::format("mask: node {} repeated", node));
    position_[node] = r;
  }
}

ObservationMask ObservationMask::full(int total_nodes) {
  std::vector<int> all(total_nodes);
  std::iota(all.begin(), all.end(), 0);
  return ObservationMask(total_nodes, std::move(all));
}

std::vector<int> ObservationMask::hidden() const {
  std::vector<int> out;
  for (int v = 0; v < total_; ++v)
    if (position_[v] < 0) out.push_back(v);
  return out;
}

Matrix ObservationMask::selection_matrix() const {
  Matrix e = Matrix::Zero(size(), total_);
  for (int r = 0; r < size(); ++r) e(r, observed_[r]) = 1.0;
  return e;
}

std::string ObservationMask::to_csv() const { return fmt::format("{}", fmt::join(observed_, ",")); }

ObservationMask sample_observation(int total_nodes, int n, Rng& rng) {
  if (total_nodes < 1 || n < 1 || n > total_nodes)
    throw InvalidArgument(fmt::format("sample_observation: n = {} not in [1, {}]", n, total_nodes));
  std::vector<int> nodes(total_nodes);
  std::iota(nodes.begin(), nodes.end(), 0);
  // Partial Fisher-Yates: the first n slots are a uniform ordered sample.
  for (int r = 0; r < n; ++r) {
    std::uniform_int_distribution<int> pick(r, total_nodes - 1);
    std::swap(nodes[r], nodes[pick(rng)]);
  }
  nodes.resize(n);
  return ObservationMask(total_nodes, std::move(nodes));
}

Matrix restrict_signals(const ObservationMask& mask, const Matrix& y) {
  if (y.cols() != mask.total_nodes())
    throw InvalidArgument(fmt::format("restrict_signals: {} columns vs mask over {}", y.cols(), mask.total_nodes()));
  return y(Eigen::all, mask.observed());
}

Matrix restrict_laplacian(const ObservationMask& mask, const Matrix& laplacian) {
  if (laplacian.rows() != mask.total_nodes() || laplacian.cols() != mask.total_nodes())
    throw InvalidArgument("restrict_laplacian: dimension mismatch");
  return laplacian(mask.observed(), mask.observed());
}

double BlockDecomposition::hidden_coupling_max() const { return (-oh_row_sums).maxCoeff(); }

double BlockDecomposition::degree_level() const { return (trace_oo + coupling) / static_cast<double>(oo.rows()); }

BlockDecomposition block_decompose(const ObservationMask& mask, const Matrix& laplacian) {
  BlockDecomposition b;
  b.oo = restrict_laplacian(mask, laplacian);
  // Full rows of a Laplacian sum to zero, so L_oh 1 = -L_oo 1.
  b.oh_row_sums = -(b.oo.rowwise().sum());
  b.trace_oo = b.oo.trace();
  b.coupling = b.oh_row_sums.sum();
  return b;
}

Matrix lift_surrogate_full(const ObservationMask& mask, const Matrix& partial_laplacian, double tol) {
  const int n = mask.size();
  const int total = mask.total_nodes();
  const auto report = validate_in_laplacian_set(partial_laplacian, n, tol);
  if (!report.ok()) throw InvalidArgument("lift_surrogate_full: input not a normalized Laplacian: " + report.summary());
  Matrix lifted = Matrix::Zero(total, total);
  lifted(mask.observed(), mask.observed()) = (static_cast<double>(total) / n) * partial_laplacian;
  return lifted;
}

Matrix project_surrogate_partial(const ObservationMask& mask, const Matrix& full_laplacian) {
  // L_oo + Diag(L_oh 1) is the Laplacian of the edges inside the mask, and
  // tr(L_oo) + 1'L_oh 1 is twice their total weight. Both are formed from the
  // off-diagonal block directly so that a mask with no internal edges gives an
  // exact zero instead of cancellation noise.
  Matrix out = restrict_laplacian(mask, full_laplacian);
  out.diagonal().setZero();
  const double denom = -out.sum();
  if (!(denom > 0))
    throw DegenerateSurrogate(
        fmt::format("observed block has no internal weight (tr(L_oo) + 1'L_oh 1 = {:.3g})", denom));
  out.diagonal() = -out.rowwise().sum();
  out *= static_cast<double>(mask.size()) / denom;
  return out;
}

}  // namespace glearn
