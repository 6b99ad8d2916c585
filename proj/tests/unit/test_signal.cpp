#include "glearn/error.hpp"
#include "glearn/signal.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

using namespace glearn;

namespace {

Spectrum er_spectrum(int n, double p, std::uint64_t seed) {
  Rng rng(seed);
  return eigendecompose(build_laplacian(generate_er(n, p, rng)));
}

Matrix gaussian(int rows, int cols, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> g;
  Matrix x(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) x(i, j) = g(rng);
  return x;
}

}  // namespace

TEST(FrequencyResponse, HeatAtZeroIsOne) { EXPECT_DOUBLE_EQ(frequency_response(HeatFilter{1.0}, 0.0), 1.0); }

TEST(FrequencyResponse, ResolventBetaTwoPointFiveAtTwo) {
  EXPECT_NEAR(frequency_response(ResolventFilter{2.5}, 2.0), 1.0 / 6.0, 1e-15);
}

TEST(FrequencyResponse, PolynomialOneMinusLambda) {
  EXPECT_DOUBLE_EQ(frequency_response(PolynomialFilter{{1.0, -1.0}}, 0.5), 0.5);
  EXPECT_NEAR(frequency_response(PolynomialFilter{{0.5, 0.0, 2.0, -1.0}}, 1.5), 0.5 + 2 * 2.25 - 3.375, 1e-14);
}

TEST(FrequencyResponse, IdealFilterHasNoValueResponse) {
  EXPECT_THROW(frequency_response(IdealLowpassFilter{2}, 0.3), InvalidArgument);
}

TEST(FilterValidation, RejectsInvalidParameters) {
  EXPECT_THROW(validate_filter(PolynomialFilter{{0.0, 0.0}}), InvalidArgument);
  EXPECT_THROW(validate_filter(PolynomialFilter{{}}), InvalidArgument);
  EXPECT_THROW(validate_filter(HeatFilter{-1.0}), InvalidArgument);
  EXPECT_THROW(validate_filter(HeatFilter{std::nan("")}), InvalidArgument);
  EXPECT_THROW(validate_filter(ResolventFilter{std::numeric_limits<double>::infinity()}), InvalidArgument);
  EXPECT_THROW(validate_filter(IdealLowpassFilter{0}), InvalidArgument);
  EXPECT_NO_THROW(validate_filter(ResolventFilter{0.0}));
}

TEST(ApplyFilter, IdentityPolynomialReturnsInput) {
  const Spectrum s = er_spectrum(12, 0.4, 1);
  const Matrix x = gaussian(5, 12, 2);
  EXPECT_LE((apply_filter(s, PolynomialFilter{{1.0}}, x) - x).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ApplyFilter, FullBandIdealFilterReturnsInput) {
  const Spectrum s = er_spectrum(12, 0.4, 1);
  const Matrix x = gaussian(5, 12, 3);
  EXPECT_LE((apply_filter(s, IdealLowpassFilter{12}, x) - x).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_THROW(apply_filter(s, IdealLowpassFilter{13}, x), InvalidArgument);
}

TEST(ApplyFilter, StrongHeatDiffusionFlattensToTheMean) {
  const Spectrum s = er_spectrum(20, 0.3, 4);
  const Matrix x = gaussian(6, 20, 5);
  const Matrix y = apply_filter(s, HeatFilter{50.0}, x);
  for (int m = 0; m < 6; ++m) {
    const double mean = x.row(m).mean();
    EXPECT_LE((y.row(m).array() - mean).abs().maxCoeff(), 1e-4);
  }
}

TEST(ApplyFilter, PolynomialMatchesMatrixPolynomialOfLaplacian) {
  Rng rng(6);
  const Matrix L = build_laplacian(generate_er(10, 0.4, rng));
  const Spectrum s = eigendecompose(L);
  const Matrix x = gaussian(3, 10, 7);
  const Matrix H = 0.5 * Matrix::Identity(10, 10) - 0.2 * L + 0.01 * L * L;
  const Matrix expected = x * H;  // H symmetric
  EXPECT_LE((apply_filter(s, PolynomialFilter{{0.5, -0.2, 0.01}}, x) - expected).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(ApplyFilter, IsLinear) {
  const Spectrum s = er_spectrum(15, 0.3, 8);
  const Matrix x = gaussian(4, 15, 9), z = gaussian(4, 15, 10);
  for (const GraphFilter& f : {GraphFilter{HeatFilter{0.7}}, GraphFilter{ResolventFilter{2.5}},
                               GraphFilter{IdealLowpassFilter{4}}, GraphFilter{PolynomialFilter{{1, -0.1}}}}) {
    const Matrix lhs = apply_filter(s, f, 2.0 * x - 3.0 * z);
    const Matrix rhs = 2.0 * apply_filter(s, f, x) - 3.0 * apply_filter(s, f, z);
    EXPECT_LE((lhs - rhs).cwiseAbs().maxCoeff(), 1e-9) << describe(f);
  }
}

TEST(ApplyFilter, DimensionMismatch) {
  const Spectrum s = er_spectrum(10, 0.4, 1);
  EXPECT_THROW(apply_filter(s, HeatFilter{1}, Matrix::Zero(2, 9)), InvalidArgument);
}

TEST(Sharpness, IdealFilterAtItsCutoffIsZero) {
  const Spectrum s = er_spectrum(20, 0.3, 2);
  const auto p = sharpness_ratio(s, IdealLowpassFilter{4}, 4);
  EXPECT_EQ(p.eta, 0.0);
  EXPECT_TRUE(p.is_lowpass());
  EXPECT_EQ(p.h_bound, 1.0);
}

TEST(Sharpness, HeatMatchesGapFormulaAndDirectScan) {
  const Spectrum s = er_spectrum(20, 0.3, 13);
  for (double alpha : {0.1, 0.5, 1.0, 3.0}) {
    for (int K : {1, 3, 7}) {
      const auto p = sharpness_ratio(s, HeatFilter{alpha}, K);
      double num = 0, den = std::numeric_limits<double>::infinity();
      for (int i = 0; i < 20; ++i) {
        const double h = std::exp(-alpha * std::max(0.0, s.values(i)));
        if (i < K) den = std::min(den, h);
        else num = std::max(num, h);
      }
      EXPECT_NEAR(p.eta, num / den, 1e-12);
      EXPECT_NEAR(p.eta, std::exp(-alpha * (s.values(K) - s.values(K - 1))), 1e-12);
    }
  }
}

TEST(Sharpness, AllPassIsNotLowpass) {
  const auto p = sharpness_ratio(er_spectrum(10, 0.4, 3), PolynomialFilter{{1.0}}, 3);
  EXPECT_DOUBLE_EQ(p.eta, 1.0);
  EXPECT_FALSE(p.is_lowpass());
}

TEST(Sharpness, NonIncreasingInHeatAndResolventParameter) {
  const Spectrum s = er_spectrum(30, 0.2, 21);
  for (int K : {2, 5}) {
    double prev_heat = 2, prev_res = 2;
    for (double a : {0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0}) {
      const double eh = sharpness_ratio(s, HeatFilter{a}, K).eta;
      const double er = sharpness_ratio(s, ResolventFilter{a}, K).eta;
      EXPECT_LE(eh, prev_heat + 1e-15);
      EXPECT_LE(er, prev_res + 1e-15);
      prev_heat = eh;
      prev_res = er;
    }
  }
}

TEST(Sharpness, PreconditionsEnforced) {
  const Spectrum s = er_spectrum(10, 0.4, 3);
  EXPECT_THROW(sharpness_ratio(s, HeatFilter{1}, 0), InvalidArgument);
  EXPECT_THROW(sharpness_ratio(s, HeatFilter{1}, 10), InvalidArgument);
  EXPECT_THROW(sharpness_ratio(s, IdealLowpassFilter{2}, 3), InvalidArgument);  // passband annihilated
}

TEST(GenerateSignals, SingleIdentitySignalEqualsExcitation) {
  const Spectrum s = er_spectrum(8, 0.5, 1);
  Rng rng(4);
  const SignalMatrix sm = generate_signals(s, PolynomialFilter{{1.0}}, 1, rng);
  EXPECT_EQ(sm.count(), 1);
  EXPECT_LE((sm.signals() - sm.excitations()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(GenerateSignals, HeatAttenuatesDirichletEnergy) {
  Rng grng(50);
  const Matrix L = build_laplacian(generate_er(50, 0.2, grng));
  const Spectrum s = eigendecompose(L);
  Rng rng(51);
  const SignalMatrix sm = generate_signals(s, HeatFilter{10.0}, 200, rng);
  double ey = 0, ex = 0;
  for (int m = 0; m < 200; ++m) {
    ey += quadratic_form(L, sm.signals().row(m).transpose());
    ex += quadratic_form(L, sm.excitations().row(m).transpose());
  }
  EXPECT_LT(ey / 200, ex / 200);
}

TEST(GenerateSignals, FigureOneShapeAndExcitationStatistics) {
  const Spectrum s = er_spectrum(50, 0.2, 7);
  Rng rng(8);
  const SignalMatrix sm = generate_signals(s, HeatFilter{1.0}, 200, rng);
  EXPECT_EQ(sm.signals().rows(), 200);
  EXPECT_EQ(sm.signals().cols(), 50);
  const double mean = sm.excitations().mean();
  const double var = (sm.excitations().array() - mean).square().mean();
  EXPECT_NEAR(mean, 0.0, 4.0 / std::sqrt(10000.0));
  EXPECT_NEAR(var, 1.0, 4.0 * std::sqrt(2.0 / 10000.0));
  EXPECT_NEAR(sm.excitation_bound(), sm.excitations().rowwise().norm().maxCoeff(), 0.0);
  EXPECT_THROW(generate_signals(s, HeatFilter{1.0}, 0, rng), InvalidArgument);
}

TEST(SignalMatrix, InconsistentPairRejected) {
  const Spectrum s = er_spectrum(8, 0.5, 1);
  const Matrix x = gaussian(2, 8, 1);
  EXPECT_NO_THROW(SignalMatrix(s, HeatFilter{1.0}, x));
  EXPECT_THROW(SignalMatrix(s, HeatFilter{1.0}, Matrix::Zero(2, 7)), InvalidArgument);
}

TEST(Decompose, SignalInsideBandHasNoOrthogonalPart) {
  const Spectrum s = er_spectrum(15, 0.4, 2);
  const Vector y = s.leading(4) * Vector::LinSpaced(4, 1.0, -2.0);
  EXPECT_LE(decompose_lowpass(s, 4, y).orthogonal.norm(), 1e-9);
}

TEST(Decompose, FullBandLeavesNothing) {
  const Spectrum s = er_spectrum(15, 0.4, 2);
  const Vector y = gaussian(1, 15, 3).row(0).transpose();
  const auto d = decompose_lowpass(s, 15, y);
  EXPECT_LE(d.orthogonal.norm(), 1e-12);
}

TEST(Decompose, PythagorasOrthogonalityAndIdempotence) {
  const Spectrum s = er_spectrum(10, 0.4, 5);
  for (int rep = 0; rep < 20; ++rep) {
    const Vector y = gaussian(1, 10, 100 + rep).row(0).transpose();
    const auto d = decompose_lowpass(s, 2, y);
    EXPECT_LE((d.parallel + d.orthogonal - y).norm(), 1e-12);
    EXPECT_NEAR(d.parallel.squaredNorm() + d.orthogonal.squaredNorm(), y.squaredNorm(), 1e-9);
    EXPECT_LE((s.leading(2).transpose() * d.orthogonal).cwiseAbs().maxCoeff(), 1e-9);
    const auto again = decompose_lowpass(s, 2, d.parallel);
    EXPECT_LE((again.parallel - d.parallel).norm(), 1e-9);
    EXPECT_LE(again.orthogonal.norm(), 1e-9);
  }
  EXPECT_THROW(decompose_lowpass(s, 0, Vector::Zero(10)), InvalidArgument);
}

TEST(QuadraticForm, ConstantVectorHasZeroEnergy) {
  Rng rng(1);
  const Matrix L = build_laplacian(generate_er(10, 0.5, rng));
  EXPECT_NEAR(quadratic_form(L, Vector::Constant(10, 3.7)), 0.0, 1e-12);
}

TEST(QuadraticForm, SingleEdgeUnitImpulse) {
  Matrix L(2, 2);
  L << 1, -1, -1, 1;
  EXPECT_DOUBLE_EQ(quadratic_form(L, Vector::Unit(2, 0)), 1.0);
}

TEST(QuadraticForm, EqualsHalfTheDoubleSumOverPairs) {
  Rng rng(8);
  const Graph g = generate_er(8, 0.5, rng);
  const Matrix L = build_laplacian(g);
  for (int rep = 0; rep < 10; ++rep) {
    const Vector y = gaussian(1, 8, 30 + rep).row(0).transpose();
    EXPECT_NEAR(quadratic_form(L, y), oracle::pairwise_smoothness(g.adjacency(), y), 1e-10);
    EXPECT_GE(quadratic_form(L, y), -1e-12);
  }
  EXPECT_THROW(quadratic_form(L, Vector::Zero(7)), InvalidArgument);
}

TEST(QuadraticForm, UnitEigenvectorsGiveTheirEigenvalue) {
  Rng rng(12);
  const Matrix L = build_laplacian(generate_er(25, 0.3, rng));
  const Spectrum s = eigendecompose(L);
  for (int i = 0; i < 25; ++i) EXPECT_NEAR(quadratic_form(L, s.vectors.col(i)), s.values(i), 1e-8);
}

TEST(SignalFile, RoundTripIsExact) {
  const Matrix y = gaussian(7, 5, 77);
  const auto path = std::filesystem::temp_directory_path() / "glearn_signals_roundtrip.csv";
  save_signals(y, path);
  EXPECT_EQ(load_signals(path), y);
  std::filesystem::remove(path);
}
