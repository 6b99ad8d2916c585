#pragma once

#include "glearn/graph.hpp"
#include "glearn/observation.hpp"
#include "glearn/signal.hpp"

#include <optional>
#include <string>
#include <vector>

namespace glearn {

/// max_i ||V_K' e_i||^2 for an orthonormal N x K frame. Lies in [K/N, 1].
double coherence(const Matrix& frame);

struct SamplingCheck {
  double lhs = 0;  // n / N
  double rhs = 0;  // (3 / t^2) * coherence * ln(K / delta)
  bool holds = false;
};

/// Sample-size condition n/N >= (3/t^2) mu ln(K/delta) for t, delta in (0, 1).
SamplingCheck check_sampling_condition(int n, int total, double coherence, int K, double delta, double t);

/// Smallest t in (0, 1) satisfying the sample-size condition, or nullopt when
/// the required t reaches 1.
std::optional<double> min_t_for_condition(int n, int total, double coherence, int K, double delta);

/// Largest eigenvalue and smallest eigenvalue above `zero_tol` of a PSD matrix.
struct SpectralRange {
  double sigma_max = 0;
  double sigma_min_positive = 0;
  double condition() const { return sigma_max / sigma_min_positive; }
};
SpectralRange spectral_range(const Vector& ascending_eigenvalues, double zero_tol = 1e-10);

struct RipEvaluation {
  double lhs = 0;  // y_o' (E_o L E_o') y_o
  double rhs = 0;  // (1 + t) (n/N) (sigma_max / sigma_min+) y' L y
  bool holds = false;
};

/// One-sided restricted isometry of the subsampled quadratic form, per signal.
/// Each signal (an N-vector) must lie in span(V_K); otherwise InvalidArgument.
std::vector<RipEvaluation> rip_check(const ObservationMask& mask, const Matrix& laplacian, const Spectrum& spec,
                                     int K, double t, const std::vector<Vector>& signals);

/// Monte Carlo estimate of how often the RIP inequality fails over random
/// masks and random signals in span(V_K).
struct RipStudy {
  int n = 0;
  double coherence = 0;
  std::optional<double> t;
  int draws = 0;
  int failures = 0;
  double failure_rate() const { return draws ? static_cast<double>(failures) / draws : 0.0; }
};
RipStudy rip_study(const Matrix& laplacian, const Spectrum& spec, int K, int n, double delta, int draws, Rng& rng);

/// Explicit residual 2 ||L|| eta H^2 M^2 + ||L|| eta^2 H^2 M^2 bounding how much
/// the high-frequency part can add to a subsampled quadratic form.
double nonideal_residual(double laplacian_norm, double eta, double h_bound, double m_bound);

/// y_o' L_oo y_o - (y_par_o)' L_oo y_par_o for one N-vector y.
double restricted_energy_gap(const ObservationMask& mask, const Matrix& laplacian, const Spectrum& spec, int K,
                             const Vector& y);

/// One checked or reported inequality.
struct BoundCheck {
  std::string name;
  double lhs = 0;
  double rhs = 0;
  bool holds = false;
  /// Hard checks are exact consequences of optimality or algebra; soft ones
  /// carry unspecified constants and are only reported.
  bool hard = false;
};

struct BoundReport {
  int K = 0;
  double delta = 0;
  double lambda = 0;
  double coherence = 0;
  std::optional<double> t_required;
  bool condition_holds = false;
  double sigma_ratio = 0;    // sigma_max(L*) / sigma_min+(L*)
  double c_t = 0;            // (1 + t) * sigma_ratio, with t = 1 when no t in (0, 1) exists
  double c_measured = 0;     // (tr(L*_oo) + 1'L*_oh 1) / n
  double epsilon_measured = 0;  // max(-L*_oh 1)
  double eta_k = 0;          // NaN when the generating filter is unknown
  double residual_term = 0;  // nonideal residual summed over realizations, when the filter is known
  double jp_star = 0;
  double jp_tilde = 0;
  double jf_star = 0;
  double jf_hat = 0;
  std::vector<BoundCheck> inequalities;

  bool hard_checks_hold() const;
};

/// Solutions and surrogates from one trial.
struct TrialSolutions {
  Matrix full;       // L* (N x N)
  Matrix partial;    // L_p* (n x n)
  Matrix lifted;     // L-hat (N x N)
  Matrix projected;  // L-tilde_p (n x n)
};

struct TheoremInputs {
  const TrialSolutions& solutions;
  const ObservationMask& mask;
  const Matrix& signals;             // full M x N signal matrix
  const Spectrum& signal_spectrum;   // spectrum of the graph that generated the signals
  int K = 5;
  double delta = 0.1;
  /// Regularization used for the objectives in the checks.
  double lambda = 0.0;
  /// Filter profile at K with measured bounds, when the filter is known.
  std::optional<LowpassProfile> profile;
  /// Absolute slack for hard checks, scaled by (1 + |rhs|).
  double slack = 1e-8;
};

/// Evaluates the surrogate inequality chains for one trial. Throws
/// DegenerateSurrogate when the measured c is not positive.
BoundReport theorem_report(const TheoremInputs& in);

std::string bound_report_csv_header();
std::string bound_report_csv_row(const BoundReport& r);
std::string bound_report_json(const BoundReport& r);

}  // namespace glearn
