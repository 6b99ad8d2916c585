#include "glearn/solver.hpp"

#include "glearn/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace glearn {

Matrix laplacian_from_weights(const Vector& w, int n) {
  if (w.size() != pair_count(n))
    throw InvalidArgument(fmt::format("expected {} pair weights for n = {}, got {}", pair_count(n), n, w.size()));
  Matrix lap = Matrix::Zero(n, n);
  int e = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j, ++e) {
      lap(i, j) = lap(j, i) = -w[e];
      lap(i, i) += w[e];
      lap(j, j) += w[e];
    }
  }
  return lap;
}

Vector weights_from_laplacian(const Matrix& laplacian) {
  const int n = static_cast<int>(laplacian.rows());
  Vector w(pair_count(n));
  int e = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) w[e++] = -laplacian(i, j);
  return w;
}

Vector pairwise_energy_vector(const Matrix& y) {
  const int n = static_cast<int>(y.cols());
  if (n < 2) throw InvalidArgument("pairwise_energy_vector: need at least two nodes");
  Vector z(pair_count(n));
  int e = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) z[e++] = (y.col(i) - y.col(j)).squaredNorm();
  return z;
}

double objective(const Matrix& laplacian, const Matrix& y, double lambda) {
  if (laplacian.rows() != y.cols() || laplacian.cols() != y.cols())
    throw InvalidArgument(fmt::format("objective: {}x{} Laplacian vs {} signal columns", laplacian.rows(),
                                      laplacian.cols(), y.cols()));
  // sum_m y_m' L y_m = tr(Y L Y').
  const double energy = (y * laplacian).cwiseProduct(y).sum();
  return energy + 0.5 * lambda * laplacian.squaredNorm();
}

Vector simplex_projection(const Vector& v, double radius) {
  if (!(radius > 0)) throw InvalidArgument("simplex_projection: radius must be positive");
  // Sort-based threshold search: find theta with sum(max(v - theta, 0)) = radius.
  Vector sorted = v;
  std::sort(sorted.data(), sorted.data() + sorted.size(), std::greater<>());
  double cumulative = 0;
  double theta = 0;
  for (Eigen::Index k = 0; k < sorted.size(); ++k) {
    cumulative += sorted[k];
    const double candidate = (cumulative - radius) / static_cast<double>(k + 1);
    if (k + 1 == sorted.size() || sorted[k + 1] <= candidate) {
      theta = candidate;
      break;
    }
  }
  return (v.array() - theta).cwiseMax(0.0).matrix();
}

namespace {

// Weighted degrees d_i = sum_j w_ij.
Vector degrees(const Vector& w, int n) {
  Vector d = Vector::Zero(n);
  int e = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, ++e) {
      d[i] += w[e];
      d[j] += w[e];
    }
  return d;
}

// Quadratic part Q w = S'S w + 2 w, where (S'd)_(i,j) = d_i + d_j.
Vector apply_quadratic(const Vector& w, int n) {
  const Vector d = degrees(w, n);
  Vector out(w.size());
  int e = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, ++e) out[e] = d[i] + d[j] + 2.0 * w[e];
  return out;
}

double weight_objective(const Vector& z, const Vector& w, int n, double lambda) {
  const Vector d = degrees(w, n);
  return z.dot(w) + 0.5 * lambda * (d.squaredNorm() + 2.0 * w.squaredNorm());
}

double largest_quadratic_eigenvalue(int n, int steps) {
  Vector v = Vector::Ones(pair_count(n));
  double estimate = 0;
  for (int s = 0; s < steps; ++s) {
    Vector next = apply_quadratic(v, n);
    estimate = next.norm() / v.norm();
    v = next / next.norm();
  }
  return estimate;
}

double frank_wolfe_gap(const Vector& grad, const Vector& w, double radius) {
  return grad.dot(w) - radius * grad.minCoeff();
}

}  // namespace

SolveResult solve_gl_sigrep(const Matrix& y, const SolverConfig& cfg, const SolveOptions& options) {
  const int n = static_cast<int>(y.cols());
  if (n < 2) throw InvalidArgument("solve_gl_sigrep: need at least two observed nodes");
  if (y.rows() < 1) throw InvalidArgument("solve_gl_sigrep: need at least one signal");
  if (!(cfg.lambda >= 0) || cfg.max_iters < 1 || !(cfg.rel_tol > 0))
    throw InvalidArgument("solve_gl_sigrep: invalid solver configuration");

  const Vector z = pairwise_energy_vector(y);
  const double radius = n / 2.0;
  const int pairs = pair_count(n);
  SolveResult result;

  auto finish = [&](const Vector& w, const Vector& grad, double step) {
    result.weights = w;
    result.laplacian = laplacian_from_weights(w, n);
    result.objective = weight_objective(z, w, n, cfg.lambda);
    result.gradient_norm = grad.norm();
    result.duality_gap = frank_wolfe_gap(grad, w, radius);
    if (step > 0) {
      result.kkt_residual = (w - simplex_projection(w - step * grad, radius)).norm() / step;
    } else {
      // Linear objective: stationarity means every support weight carries the minimal gradient.
      const double floor = grad.minCoeff();
      double worst = 0;
      for (int e = 0; e < pairs; ++e)
        if (w[e] > 0) worst = std::max(worst, grad[e] - floor);
      result.kkt_residual = worst;
    }
  };

  if (cfg.lambda == 0.0) {
    // Linear program over the simplex: all mass on a minimal-energy pair (lowest index on ties).
    Eigen::Index best = 0;
    z.minCoeff(&best);
    Vector w = Vector::Zero(pairs);
    w[best] = radius;
    finish(w, z, 0.0);
    result.converged = true;
    if (options.record_trace) result.trace.push_back(result.objective);
    return result;
  }

  const double lipschitz = cfg.lambda * largest_quadratic_eigenvalue(n, cfg.power_iterations);
  const double step = 1.0 / lipschitz;

  Vector w = options.initial_weights ? simplex_projection(*options.initial_weights, radius)
                                     : Vector::Constant(pairs, radius / pairs);
  if (w.size() != pairs) throw InvalidArgument("solve_gl_sigrep: initial weights have the wrong length");

  Vector grad = z + cfg.lambda * apply_quadratic(w, n);
  double value = weight_objective(z, w, n, cfg.lambda);
  int iter = 0;
  bool converged = false;
  for (; iter < cfg.max_iters; ++iter) {
    if (frank_wolfe_gap(grad, w, radius) <= cfg.rel_tol * (1.0 + std::abs(value))) {
      converged = true;
      break;
    }
    w = simplex_projection(w - step * grad, radius);
    grad = z + cfg.lambda * apply_quadratic(w, n);
    value = weight_objective(z, w, n, cfg.lambda);
    if (options.record_trace) result.trace.push_back(value);
  }
  if (!converged) converged = frank_wolfe_gap(grad, w, radius) <= cfg.rel_tol * (1.0 + std::abs(value));
  result.iterations = iter;
  result.converged = converged;
  finish(w, grad, step);
  return result;
}

ThresholdResult threshold_edges(const Matrix& laplacian, double tau) {
  if (!(tau >= 0 && tau < 1)) throw InvalidArgument(fmt::format("threshold tau = {} not in [0, 1)", tau));
  const int n = static_cast<int>(laplacian.rows());
  double strongest = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) strongest = std::max(strongest, -laplacian(i, j));
  if (!(strongest > 0)) return ThresholdResult{Graph::empty(n), true};
  const double cut = tau * strongest;
  Matrix a = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (-laplacian(i, j) > cut) a(i, j) = a(j, i) = 1.0;
  return ThresholdResult{Graph(std::move(a)), false};
}

}  // namespace glearn
