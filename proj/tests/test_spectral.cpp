#include <cmath>
#include <complex>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include "helpers.hpp"

using namespace fdid;
using fdid::test::kPi;
using fdid::test::signal_from;

namespace {
const std::complex<double> I(0.0, 1.0);
}

TEST(Bins, Layout) {
  EXPECT_EQ(one_sided_bins(8), (BinList{0, 1, 2, 3, 4}));
  EXPECT_EQ(two_sided_bins(8), (BinList{-3, -2, -1, 0, 1, 2, 3, 4}));
  EXPECT_EQ(two_sided_bins(5), (BinList{-2, -1, 0, 1, 2}));
  EXPECT_EQ(restrict_bins(two_sided_bins(8), 2.0, 0.5, 1.5), (BinList{-3, -2, -1, 1, 2, 3}));
}

TEST(Signal, Validation) {
  EXPECT_THROW(Signal(0.0, Eigen::MatrixXcd::Ones(1, 4)), ConfigError);
  EXPECT_THROW(Signal(1.0, Eigen::MatrixXcd::Ones(1, 1)), ConfigError);
  Eigen::MatrixXcd bad = Eigen::MatrixXcd::Ones(1, 4);
  bad(0, 2) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(Signal(1.0, bad), ConfigError);
  const Signal s(2.0, Eigen::MatrixXcd::Ones(3, 8));
  EXPECT_DOUBLE_EQ(s.fs(), 4.0);
  EXPECT_DOUBLE_EQ(s.f_nyq(), 2.0);
  EXPECT_DOUBLE_EQ(s.sample_time(3), 0.75);
}

TEST(FourierCoeffs, Constant) {
  const double T = 2.5;
  const Signal s = signal_from(T, 16, [](double) { return 3.0; });
  const Spectrum c = fourier_coeffs(s, 8);
  EXPECT_NEAR(std::abs(c.coeffs(0, 0) - 3.0 * T), 0.0, 1e-13);
  for (Eigen::Index k = 1; k < c.coeffs.cols(); ++k) EXPECT_NEAR(std::abs(c.coeffs(0, k)), 0.0, 1e-13);
}

TEST(FourierCoeffs, Exponential) {
  const double T = 1.5;
  const int m = 3;
  const Signal s = signal_from(T, 32, [&](double t) { return std::exp(2.0 * kPi * I * double(m) * t / T); });
  const Spectrum c = fourier_coeffs(s, two_sided_bins(32));
  for (std::size_t i = 0; i < c.size(); ++i)
    EXPECT_NEAR(std::abs(c.coeffs(0, static_cast<Eigen::Index>(i)) - (c.bins[i] == m ? T : 0.0)), 0.0, 1e-13);
}

TEST(FourierCoeffs, HannSeries) {
  // sin^2(pi t) = 1/2 - e^{2 pi i t}/4 - e^{-2 pi i t}/4: coefficients 1/2, -1/4, -1/4.
  const WindowTable t = window_table(WindowSpec::parse("sin:2"), 1024, 0);
  const Signal s(1.0, Eigen::MatrixXcd(t.samples.cast<std::complex<double>>()));
  const Spectrum c = fourier_coeffs(s, two_sided_bins(1024));
  for (std::size_t i = 0; i < c.size(); ++i) {
    const int k = c.bins[i];
    const double expected = k == 0 ? 0.5 : (std::abs(k) == 1 ? -0.25 : 0.0);
    EXPECT_NEAR(std::abs(c.coeffs(0, static_cast<Eigen::Index>(i)) - expected), 0.0, 1e-12) << "k=" << k;
  }
}

TEST(FourierCoeffs, EndpointAverage) {
  // s(t) = t on [0, 1): averaging puts (0 + 1) / 2 in sample 0.
  const Signal s = signal_from(1.0, 8, [](double t) { return t; });
  const Spectrum a = fourier_coeffs(s, BinList{0}, Endpoint::as_sampled);
  const Spectrum b = fourier_coeffs(s, BinList{0}, Endpoint::average);
  EXPECT_NEAR(std::abs(b.coeffs(0, 0) - a.coeffs(0, 0) - 0.5 / 8.0), 0.0, 1e-15);
  // Trapezoid rule integrates t exactly.
  EXPECT_NEAR(std::abs(b.coeffs(0, 0) - 0.5), 0.0, 1e-15);
  const Signal no_end(1.0, s.values);
  EXPECT_THROW(fourier_coeffs(no_end, BinList{0}, Endpoint::average), ConfigError);
}

TEST(SpectralDerivative, Basics) {
  const double T = 2.0;
  const Signal s = signal_from(T, 16, [&](double t) { return std::exp(2.0 * kPi * I * t / T); });
  const Spectrum c = fourier_coeffs(s, 4);
  const Spectrum d0 = spectral_derivative(c, 0);
  EXPECT_EQ((d0.coeffs - c.coeffs).norm(), 0.0);
  const Spectrum d1 = spectral_derivative(c, 1);
  EXPECT_NEAR(std::abs(d1.coeffs(0, 1) - 2.0 * kPi * I / T * T), 0.0, 1e-12);
  EXPECT_THROW(spectral_derivative(c, -1), ConfigError);
}

TEST(SpectralDerivative, ProductRuleConverges) {
  // d/dt (w x) with w = cinf_1 and x a band-limited tone pair: the spectral
  // derivative of the sampled product approaches the transform of the
  // analytic derivative as N grows.
  const WindowSpec w = WindowSpec::parse("cinf:1");
  auto x = [](double t) { return std::exp(2.0 * kPi * I * 2.3 * t) + 0.5 * std::exp(-2.0 * kPi * I * 4.1 * t); };
  auto dx = [](double t) {
    return 2.0 * kPi * I * 2.3 * std::exp(2.0 * kPi * I * 2.3 * t) - 0.5 * 2.0 * kPi * I * 4.1 * std::exp(-2.0 * kPi * I * 4.1 * t);
  };
  double previous = INFINITY;
  for (std::size_t N : {32u, 64u, 128u, 256u}) {
    const Signal prod = signal_from(1.0, N, [&](double t) { return window_value(w, 0, t) * x(t); });
    const Signal dprod = signal_from(1.0, N, [&](double t) { return window_value(w, 1, t) * x(t) + window_value(w, 0, t) * dx(t); });
    const BinList bins = restrict_bins(two_sided_bins(N), 1.0, std::nullopt, 8.0);
    const Spectrum lhs = spectral_derivative(fourier_coeffs(prod, bins), 1);
    const Spectrum rhs = fourier_coeffs(dprod, bins);
    const double err = fdid::test::rel_err(lhs.coeffs, rhs.coeffs);
    EXPECT_LT(err, previous) << "N=" << N;
    previous = err;
  }
  EXPECT_LT(previous, 1e-10);
}

TEST(ApplyWindow, Basics) {
  const Signal s = signal_from(1.0, 64, [](double t) { return 1.0 + t * t; });
  const WindowTable rect = window_table(WindowSpec::parse("rect"), 64, 0);
  EXPECT_EQ((apply_window(s, rect, 0).values - s.values).norm(), 0.0);
  const WindowTable cinf = window_table(WindowSpec::parse("cinf:1"), 64, 1);
  const Signal ws = apply_window(s, cinf, 0);
  EXPECT_EQ(std::abs(ws.values(0, 0)), 0.0);
  EXPECT_EQ(std::abs((*ws.end)(0)), 0.0);
  const WindowTable wrong = window_table(WindowSpec::parse("cinf:1"), 32, 0);
  EXPECT_THROW(apply_window(s, wrong, 0), ConfigError);
}

TEST(ApplyWindow, EnergyMatchesQuadrature) {
  const WindowSpec w = WindowSpec::parse("sin:3");
  auto x = [](double t) { return std::exp(2.0 * kPi * I * 1.7 * t) + 0.3 * std::cos(5.0 * t); };
  const std::size_t N = 512;
  const Signal ws = apply_window(signal_from(1.0, N, x), window_table(w, N, 0), 0);
  const double sampled = ws.values.squaredNorm() / static_cast<double>(N);
  using boost::math::quadrature::gauss_kronrod;
  const double exact = gauss_kronrod<double, 61>::integrate(
      [&](double t) { return std::norm(window_value(w, 0, t) * x(t)); }, 0.0, 1.0, 15, 1e-14);
  // The windowed integrand is periodic and C^2, so the rectangle rule converges fast.
  EXPECT_NEAR(sampled, exact, 1e-8 * exact);
}

TEST(Lowpass, KeepsAndRemovesTones) {
  auto low = [](double t) { return std::exp(2.0 * kPi * I * 3.0 * t); };
  auto high = [](double t) { return 0.7 * std::exp(-2.0 * kPi * I * 11.0 * t); };
  const std::size_t N = 64;
  const Signal pass = lowpass_filter(signal_from(1.0, N, low), 5.0);
  EXPECT_LT((pass.values - signal_from(1.0, N, low).values).norm(), 1e-12);
  const Signal stop = lowpass_filter(signal_from(1.0, N, high), 5.0);
  EXPECT_LT(stop.values.norm(), 1e-12);
  const Signal both = lowpass_filter(signal_from(1.0, N, [&](double t) { return low(t) + high(t); }), 5.0);
  EXPECT_LT((both.values - signal_from(1.0, N, low).values).norm(), 1e-12);
  EXPECT_EQ(((*both.end) - both.values.col(0)).norm(), 0.0);
  EXPECT_THROW(lowpass_filter(signal_from(1.0, N, low), 40.0), ConfigError);
}

TEST(FoldBack, PredictsAliasing) {
  // Band-limited periodic signal with content up to |k| = 60, sampled at N = 32.
  const std::size_t os = 16, N = 32;
  CounterRng rng(7);
  std::vector<std::pair<int, std::complex<double>>> tones;
  for (int k = -60; k <= 60; ++k) tones.emplace_back(k, rng.complex_normal() / (1.0 + std::abs(k)));
  auto s = [&](double t) {
    std::complex<double> v = 0.0;
    for (const auto& [k, a] : tones) v += a * std::exp(2.0 * kPi * I * double(k) * t);
    return v;
  };
  const Spectrum ref = fourier_coeffs(signal_from(1.0, N * os, s), two_sided_bins(N * os));
  const BinList bins = two_sided_bins(N);
  const Spectrum coarse = fourier_coeffs(signal_from(1.0, N, s), bins);
  const Spectrum predicted = fold_back(ref, bins, N);
  const Eigen::MatrixXcd alias = coarse.coeffs - select_bins(ref, bins).coeffs;
  EXPECT_LT(fdid::test::rel_err(alias, predicted.coeffs), 1e-10);
}
