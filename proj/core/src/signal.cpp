#include "glearn/signal.hpp"

#include "glearn/error.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <sstream>

namespace glearn {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

void validate_filter(const GraphFilter& f) {
  std::visit(overloaded{
                 [](const PolynomialFilter& p) {
                   bool any = false;
                   for (double c : p.coefficients) {
                     if (!std::isfinite(c)) throw InvalidArgument("polynomial filter: non-finite coefficient");
                     any = any || c != 0.0;
                   }
                   if (!any) throw InvalidArgument("polynomial filter needs a nonzero coefficient");
                 },
                 [](const HeatFilter& h) {
                   if (!std::isfinite(h.alpha) || h.alpha <= 0)
                     throw InvalidArgument(fmt::format("heat filter: alpha = {} must be positive", h.alpha));
                 },
                 [](const ResolventFilter& r) {
                   if (!std::isfinite(r.beta) || r.beta < 0)
                     throw InvalidArgument(fmt::format("resolvent filter: beta = {} must be >= 0", r.beta));
                 },
                 [](const IdealLowpassFilter& i) {
                   if (i.cutoff < 1) throw InvalidArgument("ideal low-pass: cutoff must be >= 1");
                 },
             },
             f);
}

std::string describe(const GraphFilter& f) {
  return std::visit(overloaded{
                        [](const PolynomialFilter& p) {
                          std::string s = "polynomial(";
                          for (std::size_t t = 0; t < p.coefficients.size(); ++t)
                            s += fmt::format("{}{:g}", t ? ";" : "", p.coefficients[t]);
                          return s + ")";
                        },
                        [](const HeatFilter& h) { return fmt::format("heat(alpha={:g})", h.alpha); },
                        [](const ResolventFilter& r) { return fmt::format("resolvent(beta={:g})", r.beta); },
                        [](const IdealLowpassFilter& i) { return fmt::format("ideal_lowpass(K={})", i.cutoff); },
                    },
                    f);
}

double frequency_response(const GraphFilter& f, double lambda) {
  return std::visit(overloaded{
                        [&](const PolynomialFilter& p) {
                          double acc = 0;  // Horner
                          for (auto it = p.coefficients.rbegin(); it != p.coefficients.rend(); ++it)
                            acc = acc * lambda + *it;
                          return acc;
                        },
                        [&](const HeatFilter& h) { return std::exp(-h.alpha * lambda); },
                        [&](const ResolventFilter& r) { return 1.0 / (1.0 + r.beta * lambda); },
                        [](const IdealLowpassFilter&) -> double {
                          throw InvalidArgument("ideal low-pass response is defined per eigen-index, not per value");
                        },
                    },
                    f);
}

Vector spectral_response(const Spectrum& spec, const GraphFilter& f) {
  validate_filter(f);
  const int n = spec.size();
  Vector h(n);
  if (const auto* ideal = std::get_if<IdealLowpassFilter>(&f)) {
    if (ideal->cutoff > n)
      throw InvalidArgument(fmt::format("ideal low-pass cutoff {} exceeds {} nodes", ideal->cutoff, n));
    for (int i = 0; i < n; ++i) h[i] = i < ideal->cutoff ? 1.0 : 0.0;
    return h;
  }
  for (int i = 0; i < n; ++i) {
    // Round-off can push the zero eigenvalue slightly negative.
    h[i] = frequency_response(f, std::max(spec.values[i], 0.0));
  }
  return h;
}

Matrix apply_filter(const Spectrum& spec, const GraphFilter& f, const Matrix& x) {
  if (x.cols() != spec.size())
    throw InvalidArgument(fmt::format("apply_filter: {} columns vs {} nodes", x.cols(), spec.size()));
  const Vector h = spectral_response(spec, f);
  // Row form of V h(Lambda) V^T x.
  return ((x * spec.vectors) * h.asDiagonal()) * spec.vectors.transpose();
}

LowpassProfile sharpness_ratio(const Spectrum& spec, const GraphFilter& f, int K) {
  const int n = spec.size();
  if (K < 1 || K >= n) throw InvalidArgument(fmt::format("sharpness_ratio: K = {} not in [1, {})", K, n));
  const Vector h = spectral_response(spec, f).cwiseAbs();
  const double pass_min = h.head(K).minCoeff();
  if (pass_min <= 0) throw InvalidArgument("filter annihilates part of the passband; sharpness ratio undefined");
  LowpassProfile profile;
  profile.K = K;
  profile.eta = h.tail(n - K).maxCoeff() / pass_min;
  profile.h_bound = h.maxCoeff();
  return profile;
}

SignalMatrix::SignalMatrix(const Spectrum& spec, GraphFilter filter, Matrix excitations)
    : signals_(apply_filter(spec, filter, excitations)),
      excitations_(std::move(excitations)),
      filter_(std::move(filter)) {
  // Column form through the assembled operator H(L).
  const Matrix op = spec.vectors * spectral_response(spec, filter_).asDiagonal() * spec.vectors.transpose();
  const Matrix reconstructed = (op * excitations_.transpose()).transpose();
  const double err = (reconstructed - signals_).cwiseAbs().maxCoeff();
  if (!(err <= 1e-8)) throw NumericalError(fmt::format("signal/excitation mismatch {}", err));
}

double SignalMatrix::excitation_bound() const { return excitations_.rowwise().norm().maxCoeff(); }

SignalMatrix generate_signals(const Spectrum& spec, const GraphFilter& f, int count, Rng& rng) {
  if (count < 1) throw InvalidArgument("generate_signals: need at least one realization");
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix x(count, spec.size());
  // Row-major fill so a prefix of realizations is stable across counts.
  for (int m = 0; m < count; ++m)
    for (int i = 0; i < spec.size(); ++i) x(m, i) = gauss(rng);
  return SignalMatrix(spec, f, std::move(x));
}

LowpassProfile lowpass_profile(const Spectrum& spec, const SignalMatrix& signals, int K) {
  LowpassProfile p = sharpness_ratio(spec, signals.filter(), K);
  p.m_bound = signals.excitation_bound();
  return p;
}

LowpassSplit decompose_lowpass(const Spectrum& spec, int K, const Vector& y) {
  if (y.size() != spec.size()) throw InvalidArgument("decompose_lowpass: dimension mismatch");
  const Matrix vk = spec.leading(K);
  LowpassSplit split;
  split.parallel = vk * (vk.transpose() * y);
  split.orthogonal = y - split.parallel;
  return split;
}

double quadratic_form(const Matrix& laplacian, const Vector& y) {
  if (laplacian.rows() != y.size() || laplacian.cols() != y.size())
    throw InvalidArgument("quadratic_form: dimension mismatch");
  return y.dot(laplacian * y);
}

void write_signals(const Matrix& y, std::ostream& out) {
  for (Eigen::Index m = 0; m < y.rows(); ++m) {
    for (Eigen::Index i = 0; i < y.cols(); ++i) out << (i ? "," : "") << fmt::format("{:.17g}", y(m, i));
    out << "\n";
  }
}

void save_signals(const Matrix& y, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_signals(y, out);
}

Matrix load_signals(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw ParseError(path.string() + ": not a number '" + cell + "'", line_no);
      }
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError(path.string() + ": ragged row", line_no);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(path.string() + ": no signals");
  Matrix y(rows.size(), rows.front().size());
  for (std::size_t m = 0; m < rows.size(); ++m)
    for (std::size_t i = 0; i < rows[m].size(); ++i) y(m, i) = rows[m][i];
  return y;
}

}  // namespace glearn
