#include "glearn/theory.hpp"

#include "glearn/error.hpp"
#include "glearn/solver.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <cmath>
#include <limits>

namespace glearn {

double coherence(const Matrix& frame) {
  const Eigen::Index k = frame.cols();
  const double drift = (frame.transpose() * frame - Matrix::Identity(k, k)).cwiseAbs().maxCoeff();
  if (!(drift <= 1e-8)) throw InvalidArgument(fmt::format("coherence: frame not orthonormal (drift {:.3g})", drift));
  return frame.rowwise().squaredNorm().maxCoeff();
}

namespace {

void check_unit_interval(double v, const char* name) {
  if (!(v > 0 && v < 1)) throw InvalidArgument(fmt::format("{} = {} must lie in (0, 1)", name, v));
}

void check_sizes(int n, int total, int K) {
  if (total < 1 || n < 1 || n > total) throw InvalidArgument(fmt::format("need 1 <= n <= N, got {} / {}", n, total));
  if (K < 1 || K > total) throw InvalidArgument(fmt::format("bandwidth K = {} out of range", K));
}

double sampling_factor(int n, int total, double mu, int K, double delta) {
  // t^2 needed: 3 (N/n) mu ln(K/delta)
  return 3.0 * (static_cast<double>(total) / n) * mu * std::log(K / delta);
}

}  // namespace

SamplingCheck check_sampling_condition(int n, int total, double mu, int K, double delta, double t) {
  check_sizes(n, total, K);
  check_unit_interval(t, "t");
  check_unit_interval(delta, "delta");
  SamplingCheck c;
  c.lhs = static_cast<double>(n) / total;
  c.rhs = 3.0 / (t * t) * mu * std::log(K / delta);
  c.holds = c.lhs >= c.rhs;
  return c;
}

std::optional<double> min_t_for_condition(int n, int total, double mu, int K, double delta) {
  check_sizes(n, total, K);
  check_unit_interval(delta, "delta");
  double t = std::sqrt(sampling_factor(n, total, mu, K, delta));
  if (!(t < 1)) return std::nullopt;
  if (t <= 0) t = std::numeric_limits<double>::min();
  // Round-off may leave the closed-form root a hair short of satisfying the condition.
  while (t < 1 && !check_sampling_condition(n, total, mu, K, delta, t).holds) t = std::nextafter(t, 2.0);
  if (!(t < 1)) return std::nullopt;
  return t;
}

SpectralRange spectral_range(const Vector& eig, double zero_tol) {
  SpectralRange r;
  r.sigma_max = eig.cwiseAbs().maxCoeff();
  r.sigma_min_positive = std::numeric_limits<double>::infinity();
  for (double v : eig)
    if (std::abs(v) > zero_tol) r.sigma_min_positive = std::min(r.sigma_min_positive, std::abs(v));
  if (!std::isfinite(r.sigma_min_positive)) throw InvalidArgument("spectral_range: matrix has no nonzero eigenvalue");
  return r;
}

std::vector<RipEvaluation> rip_check(const ObservationMask& mask, const Matrix& laplacian, const Spectrum& spec,
                                     int K, double t, const std::vector<Vector>& signals) {
  const int total = mask.total_nodes();
  if (laplacian.rows() != total || spec.size() != total) throw InvalidArgument("rip_check: dimension mismatch");
  check_unit_interval(t, "t");
  const Matrix oo = restrict_laplacian(mask, laplacian);
  const double ratio = spectral_range(spec.values).condition();
  const double scale = (1.0 + t) * (static_cast<double>(mask.size()) / total) * ratio;
  std::vector<RipEvaluation> out;
  out.reserve(signals.size());
  for (const Vector& y : signals) {
    const LowpassSplit split = decompose_lowpass(spec, K, y);
    if (split.orthogonal.norm() > 1e-8 * std::max(1.0, y.norm()))
      throw InvalidArgument("rip_check: signal is not in span(V_K)");
    const Vector yo = y(mask.observed());
    RipEvaluation ev;
    ev.lhs = yo.dot(oo * yo);
    ev.rhs = scale * quadratic_form(laplacian, y);
    ev.holds = ev.lhs <= ev.rhs + 1e-12 * (1.0 + std::abs(ev.rhs));
    out.push_back(ev);
  }
  return out;
}

RipStudy rip_study(const Matrix& laplacian, const Spectrum& spec, int K, int n, double delta, int draws, Rng& rng) {
  RipStudy study;
  study.n = n;
  study.coherence = coherence(spec.leading(K));
  study.t = min_t_for_condition(n, spec.size(), study.coherence, K, delta);
  if (!study.t) return study;
  const Matrix vk = spec.leading(K);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int d = 0; d < draws; ++d) {
    const ObservationMask mask = sample_observation(spec.size(), n, rng);
    Vector coeffs(K);
    for (int k = 0; k < K; ++k) coeffs[k] = gauss(rng);
    const auto ev = rip_check(mask, laplacian, spec, K, *study.t, {vk * coeffs});
    ++study.draws;
    if (!ev.front().holds) ++study.failures;
  }
  return study;
}

double nonideal_residual(double laplacian_norm, double eta, double h_bound, double m_bound) {
  if (laplacian_norm < 0 || eta < 0 || h_bound < 0 || m_bound < 0)
    throw InvalidArgument("nonideal_residual: inputs must be nonnegative");
  const double hm2 = h_bound * h_bound * m_bound * m_bound;
  return 2.0 * laplacian_norm * eta * hm2 + laplacian_norm * eta * eta * hm2;
}

double restricted_energy_gap(const ObservationMask& mask, const Matrix& laplacian, const Spectrum& spec, int K,
                             const Vector& y) {
  const Matrix oo = restrict_laplacian(mask, laplacian);
  const LowpassSplit split = decompose_lowpass(spec, K, y);
  const Vector yo = y(mask.observed());
  const Vector po = split.parallel(mask.observed());
  return yo.dot(oo * yo) - po.dot(oo * po);
}

bool BoundReport::hard_checks_hold() const {
  for (const auto& c : inequalities)
    if (c.hard && !c.holds) return false;
  return true;
}

BoundReport theorem_report(const TheoremInputs& in) {
  const TrialSolutions& s = in.solutions;
  const int n = in.mask.size();
  const int total = in.mask.total_nodes();
  if (in.signals.cols() != total) throw InvalidArgument("theorem_report: signal width differs from mask");

  BoundReport r;
  r.K = in.K;
  r.delta = in.delta;
  r.lambda = in.lambda;

  const BlockDecomposition blocks = block_decompose(in.mask, s.full);
  r.c_measured = blocks.degree_level();
  if (!(r.c_measured > 0))
    throw DegenerateSurrogate(fmt::format("measured c = {:.3g} is not positive", r.c_measured));
  r.epsilon_measured = blocks.hidden_coupling_max();

  r.coherence = coherence(in.signal_spectrum.leading(in.K));
  r.t_required = in.K < total ? min_t_for_condition(n, total, r.coherence, in.K, in.delta) : std::nullopt;
  r.condition_holds = r.t_required.has_value();

  const Spectrum full_spec = eigendecompose(s.full);
  const SpectralRange range = spectral_range(full_spec.values);
  r.sigma_ratio = range.condition();
  r.c_t = (1.0 + r.t_required.value_or(1.0)) * r.sigma_ratio;

  const Matrix yo = restrict_signals(in.mask, in.signals);
  r.jp_star = objective(s.partial, yo, in.lambda);
  r.jp_tilde = objective(s.projected, yo, in.lambda);
  r.jf_star = objective(s.full, in.signals, in.lambda);
  r.jf_hat = objective(s.lifted, in.signals, in.lambda);

  auto hard = [&](std::string name, double lhs, double rhs) {
    r.inequalities.push_back({std::move(name), lhs, rhs, lhs <= rhs + in.slack * (1.0 + std::abs(rhs)), true});
  };
  hard("Jp(Lp*) <= Jp(Lt_p)", r.jp_star, r.jp_tilde);
  hard("Jf(L*) <= Jf(Lhat)", r.jf_star, r.jf_hat);
  if (in.lambda == 0.0) {
    const double expected = static_cast<double>(total) / n * r.jp_star;
    r.inequalities.push_back({"Jf(Lhat) = (N/n) Jp(Lp*)", r.jf_hat, expected,
                              std::abs(r.jf_hat - expected) <= in.slack * (1.0 + std::abs(expected)), true});
  }

  // Right-hand chains, in Dirichlet energies. Reported only.
  const double ep_star = objective(s.partial, yo, 0.0);
  const double ep_tilde = objective(s.projected, yo, 0.0);
  const double ef_star = objective(s.full, in.signals, 0.0);
  const double ef_hat = objective(s.lifted, in.signals, 0.0);
  const double observed_energy = yo.squaredNorm();
  if (in.profile) {
    r.eta_k = in.profile->eta;
    r.residual_term = static_cast<double>(in.signals.rows()) *
                      nonideal_residual(range.sigma_max, in.profile->eta, in.profile->h_bound, in.profile->m_bound);
  } else {
    r.eta_k = std::numeric_limits<double>::quiet_NaN();  // filter unknown
  }
  const double additive = (r.epsilon_measured * observed_energy + r.residual_term) / r.c_measured;
  r.inequalities.push_back({"Ep(Lt_p) <= C(t)/c Ep(Lp*) + add", ep_tilde,
                            r.c_t / r.c_measured * ep_star + additive,
                            ep_tilde <= r.c_t / r.c_measured * ep_star + additive, false});
  const double lift_factor = static_cast<double>(total) / n;
  r.inequalities.push_back({"Ef(Lhat) <= C(t)/c Ef(L*) + (N/n) add", ef_hat,
                            r.c_t / r.c_measured * ef_star + lift_factor * additive,
                            ef_hat <= r.c_t / r.c_measured * ef_star + lift_factor * additive, false});
  const double ep_oo = objective(blocks.oo, yo, 0.0);
  const double rip_rhs = r.c_t * static_cast<double>(n) / total * ef_star + r.residual_term;
  r.inequalities.push_back({"Ep(L*_oo) <= C(t) (n/N) Ef(L*) + res", ep_oo, rip_rhs, ep_oo <= rip_rhs, false});
  return r;
}

namespace {

std::string num(double v) { return fmt::format("{:.10g}", v); }

}  // namespace

std::string bound_report_csv_header() {
  return "K,delta,lambda,coherence,t_required,condition_holds,sigma_ratio,C_t,c_measured,epsilon_measured,eta_K,"
         "residual_term,jp_star,jp_tilde,jf_star,jf_hat,hard_checks_hold";
}

std::string bound_report_csv_row(const BoundReport& r) {
  return fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}", r.K, num(r.delta), num(r.lambda),
                     num(r.coherence), r.t_required ? num(*r.t_required) : std::string("none"),
                     r.condition_holds ? 1 : 0, num(r.sigma_ratio), num(r.c_t), num(r.c_measured),
                     num(r.epsilon_measured), num(r.eta_k), num(r.residual_term), num(r.jp_star), num(r.jp_tilde),
                     num(r.jf_star), num(r.jf_hat), r.hard_checks_hold() ? 1 : 0);
}

std::string bound_report_json(const BoundReport& r) {
  nlohmann::ordered_json j;
  j["K"] = r.K;
  j["delta"] = r.delta;
  j["lambda"] = r.lambda;
  j["coherence"] = r.coherence;
  j["t_required"] = r.t_required ? nlohmann::ordered_json(*r.t_required) : nlohmann::ordered_json(nullptr);
  j["condition_holds"] = r.condition_holds;
  j["sigma_ratio"] = r.sigma_ratio;
  j["C_t"] = r.c_t;
  j["c_measured"] = r.c_measured;
  j["epsilon_measured"] = r.epsilon_measured;
  j["eta_K"] = r.eta_k;
  j["residual_term"] = r.residual_term;
  j["jp_star"] = r.jp_star;
  j["jp_tilde"] = r.jp_tilde;
  j["jf_star"] = r.jf_star;
  j["jf_hat"] = r.jf_hat;
  j["hard_checks_hold"] = r.hard_checks_hold();
  auto& list = j["inequalities"] = nlohmann::ordered_json::array();
  for (const auto& c : r.inequalities)
    list.push_back({{"name", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"holds", c.holds}, {"hard", c.hard}});
  return j.dump(2);
}

}  // namespace glearn
