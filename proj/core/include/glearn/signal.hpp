#pragma once

#include "glearn/graph.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace glearn {

// Graph filters, described by their frequency response h(lambda).

/// h(lambda) = sum_t coefficients[t] * lambda^t
struct PolynomialFilter {
  std::vector<double> coefficients;
};
/// h(lambda) = exp(-alpha * lambda)
struct HeatFilter {
  double alpha = 1.0;
};
/// h(lambda) = 1 / (1 + beta * lambda)
struct ResolventFilter {
  double beta = 1.0;
};
/// h = 1 on the first `cutoff` eigen-indices, 0 above. Defined per index, not per value.
struct IdealLowpassFilter {
  int cutoff = 1;
};

using GraphFilter = std::variant<PolynomialFilter, HeatFilter, ResolventFilter, IdealLowpassFilter>;

/// Throws InvalidArgument when the filter's own parameters are invalid.
void validate_filter(const GraphFilter& f);
std::string describe(const GraphFilter& f);

/// Frequency response at a single graph frequency. Ideal low-pass filters
/// have no value-based response and throw InvalidArgument.
double frequency_response(const GraphFilter& f, double lambda);

/// h evaluated at every eigenvalue of `spec`, in eigen-index order.
Vector spectral_response(const Spectrum& spec, const GraphFilter& f);

/// Rows of `x` (M x N) filtered: y_m = V h(Lambda) V^T x_m.
Matrix apply_filter(const Spectrum& spec, const GraphFilter& f, const Matrix& x);

/// Sharpness of a filter at bandwidth K on a given spectrum.
struct LowpassProfile {
  int K = 0;
  double eta = 0;      // max_{i>K} |h| / min_{j<=K} |h|
  double h_bound = 0;  // max_i |h(lambda_i)|
  double m_bound = 0;  // max_m ||x_m||_2, when excitations are known
  bool is_lowpass() const noexcept { return eta < 1.0; }
};

LowpassProfile sharpness_ratio(const Spectrum& spec, const GraphFilter& f, int K);

/// Filtered Gaussian excitations. Rows are realizations.
class SignalMatrix {
 public:
  /// Filters `excitations` and keeps both. Consistency of the pair is checked.
  SignalMatrix(const Spectrum& spec, GraphFilter filter, Matrix excitations);

  const Matrix& signals() const noexcept { return signals_; }
  const Matrix& excitations() const noexcept { return excitations_; }
  const GraphFilter& filter() const noexcept { return filter_; }
  int count() const noexcept { return static_cast<int>(signals_.rows()); }
  int nodes() const noexcept { return static_cast<int>(signals_.cols()); }
  /// Largest excitation norm, the measured counterpart of the energy bound.
  double excitation_bound() const;

 private:
  Matrix signals_;
  Matrix excitations_;
  GraphFilter filter_;
};

/// M realizations with i.i.d. standard normal excitations.
SignalMatrix generate_signals(const Spectrum& spec, const GraphFilter& f, int count, Rng& rng);

/// Profile with m_bound filled from the signal set's excitations.
LowpassProfile lowpass_profile(const Spectrum& spec, const SignalMatrix& signals, int K);

struct LowpassSplit {
  Vector parallel;    // V_K V_K^T y
  Vector orthogonal;  // y - parallel
};

LowpassSplit decompose_lowpass(const Spectrum& spec, int K, const Vector& y);

/// y^T L y.
double quadratic_form(const Matrix& laplacian, const Vector& y);

/// Signal matrices as headerless CSV, one realization per row.
void write_signals(const Matrix& y, std::ostream& out);
void save_signals(const Matrix& y, const std::filesystem::path& path);
Matrix load_signals(const std::filesystem::path& path);

}  // namespace glearn
