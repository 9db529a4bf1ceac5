#include <cmath>
#include <complex>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include "helpers.hpp"

using namespace fdid;
using fdid::test::kPi;

namespace {

WindowSpec spec(const char* text, double T = 1.0) { return WindowSpec::parse(text, T); }

// Within one grid unit or 10%, whichever is larger.
void expect_table_value(std::optional<int> got, int expected) {
  ASSERT_TRUE(got.has_value());
  EXPECT_LE(std::abs(*got - expected), std::max(1.0, 0.1 * expected)) << "got " << *got << ", expected " << expected;
}

}  // namespace

TEST(WindowSpec, ParseAndName) {
  EXPECT_EQ(spec("rect").family, WindowFamily::rectangular);
  EXPECT_EQ(spec("sin:3").name(), "sin:3");
  EXPECT_EQ(spec("cinf:0.25").name(), "cinf:0.25");
  EXPECT_EQ(spec("poly:4").family, WindowFamily::poly_ref);
  EXPECT_DOUBLE_EQ(spec("cinf:4", 2.5).length, 2.5);
  EXPECT_THROW(spec("sin:0"), ConfigError);
  EXPECT_THROW(spec("sin:1.5"), ConfigError);
  EXPECT_THROW(spec("cinf:-1"), ConfigError);
  EXPECT_THROW(spec("hann"), ConfigError);
  EXPECT_THROW(spec("sin:2", -1.0), ConfigError);
}

TEST(WindowValue, PointValues) {
  EXPECT_NEAR(window_value(spec("cinf:1"), 0, 0.5), 1.0, 1e-15);
  EXPECT_NEAR(window_value(spec("cinf:4", 3.0), 0, 1.5), 1.0, 1e-15);
  EXPECT_NEAR(window_value(spec("sin:2"), 0, 0.25), 0.5, 1e-15);
  EXPECT_NEAR(window_value(spec("sin:1", 2.0), 0, 1.0), 1.0, 1e-15);
  EXPECT_NEAR(window_value(spec("poly:2"), 0, 0.5), 1.0, 1e-15);
  for (const char* s : {"rect", "sin:2", "cinf:1", "poly:2"}) {
    EXPECT_EQ(window_value(spec(s), 0, -0.1), 0.0) << s;
    EXPECT_EQ(window_value(spec(s), 0, 1.1), 0.0) << s;
  }
}

TEST(WindowValue, DerivativeMatchesFiniteDifference) {
  for (const char* s : {"cinf:1", "cinf:4", "sin:2", "sin:3", "cinf:0.25"}) {
    const WindowSpec w = spec(s);
    for (int k = 1; k <= 3; ++k) {
      for (double t : {0.25, 0.4, 0.7}) {
        const double h = 1e-4;
        // Fourth-order central difference of the (k-1)-th derivative.
        const double fd = (-window_value(w, k - 1, t + 2 * h) + 8 * window_value(w, k - 1, t + h) -
                           8 * window_value(w, k - 1, t - h) + window_value(w, k - 1, t - 2 * h)) /
                          (12 * h);
        const double exact = window_value(w, k, t);
        EXPECT_NEAR(fd, exact, 1e-6 * std::max(1.0, std::abs(exact))) << s << " k=" << k << " t=" << t;
      }
    }
  }
}

TEST(WindowTable, SinOneRow) {
  const WindowTable t = window_table(spec("sin:1"), 4, 0);
  const Eigen::RowVectorXd row = t.row(0);
  EXPECT_NEAR(row(0), 0.0, 1e-15);
  EXPECT_NEAR(row(1), std::sin(kPi / 4), 1e-15);
  EXPECT_NEAR(row(2), 1.0, 1e-15);
  EXPECT_NEAR(row(3), std::sin(3 * kPi / 4), 1e-15);
  EXPECT_THROW(t.row(1), ConfigError);
}

TEST(WindowTable, CinfEndValuesVanish) {
  const WindowTable t = window_table(spec("cinf:4"), 1024, 3);
  for (int k = 0; k <= 3; ++k) {
    EXPECT_EQ(t.samples(k, 0), 0.0);
    EXPECT_EQ(t.end_values(k), 0.0);
  }
}

TEST(WindowTable, SinRowsVanishAtEndsBelowOrder) {
  for (int n = 1; n <= 4; ++n) {
    const WindowSpec w{WindowFamily::sin_n, static_cast<double>(n), 1.0};
    const WindowTable t = window_table(w, 256, 3);
    for (int k = 0; k < std::min(n, 4); ++k) {
      EXPECT_NEAR(t.samples(k, 0), 0.0, 1e-12) << "n=" << n << " k=" << k;
      EXPECT_NEAR(t.end_values(k), 0.0, 1e-12) << "n=" << n << " k=" << k;
    }
  }
}

TEST(WindowTable, DerivativeRowMatchesOversampledDifferences) {
  const std::size_t N = 64, os = 64;
  for (const char* s : {"sin:2", "sin:4", "cinf:1", "cinf:4"}) {
    const WindowSpec w = spec(s);
    const WindowTable coarse = window_table(w, N, 1);
    const WindowTable fine = window_table(w, N * os, 0);
    const double h = 1.0 / static_cast<double>(N * os);
    for (std::size_t j = 4; j + 4 < N; ++j) {
      const auto c = static_cast<Eigen::Index>(j * os);
      const double fd = (-fine.samples(0, c + 2) + 8 * fine.samples(0, c + 1) - 8 * fine.samples(0, c - 1) +
                         fine.samples(0, c - 2)) /
                        (12 * h);
      const double exact = coarse.samples(1, static_cast<Eigen::Index>(j));
      EXPECT_NEAR(fd, exact, 1e-6 * std::max(1.0, std::abs(exact))) << s << " j=" << j;
    }
  }
}

TEST(WindowSpectrum, SinOneArea) {
  const double T = 2.0;
  const Spectrum s = window_spectrum(spec("sin:1", T), 0, 1, 0.0);
  EXPECT_NEAR(std::abs(s.coeffs(0, 0)), 2 * T / kPi, 1e-14);
}

TEST(WindowSpectrum, HannClosedForm) {
  // w = 1/2 - (e^{2 pi i t} + e^{-2 pi i t}) / 4 on [0, 1).
  auto piece = [](double a) -> std::complex<double> {
    if (std::abs(a) < 1e-14) return 1.0;
    const std::complex<double> ia(0.0, a);
    return (1.0 - std::exp(-ia)) / ia;
  };
  const Spectrum s = window_spectrum(spec("sin:2"), 0, 4, 20.0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double omega = 2 * kPi * s.frequency(i);
    const std::complex<double> exact = 0.5 * piece(omega) - 0.25 * piece(omega - 2 * kPi) - 0.25 * piece(omega + 2 * kPi);
    EXPECT_LE(std::abs(s.coeffs(0, static_cast<Eigen::Index>(i)) - exact), 1e-10 * std::max(std::abs(exact), 1e-3))
        << "f=" << s.frequency(i);
  }
}

TEST(WindowSpectrum, CinfOneDecay) {
  const Spectrum s = window_spectrum(spec("cinf:1"), 0, 1, 64.0);
  const double ratio = std::abs(s.coeffs(0, 64)) / std::abs(s.coeffs(0, 0));
  EXPECT_LT(ratio, 1e-12);
}

TEST(WindowSpectrum, MatchesQuadrature) {
  for (const char* s : {"sin:3", "cinf:1", "cinf:4", "poly:2", "rect"}) {
    const WindowSpec w = spec(s);
    const int k_max = w.family == WindowFamily::rectangular ? 0 : 2;
    for (int k = 0; k <= k_max; ++k) {
      const Spectrum sp = window_spectrum(w, k, 2, 12.0);
      for (std::size_t i = 0; i < sp.size(); i += 5) {
        const std::complex<double> q = window_transform_quadrature(w, k, sp.frequency(i));
        const double scale = std::abs(window_transform_quadrature(w, k, 0.0)) + std::abs(q);
        EXPECT_LE(std::abs(sp.coeffs(0, static_cast<Eigen::Index>(i)) - q), 1e-9 * std::max(scale, 1.0))
            << s << " k=" << k << " f=" << sp.frequency(i);
      }
    }
  }
}

TEST(WindowSpectrum, RectangularRefusesDerivatives) {
  EXPECT_THROW(window_spectrum(spec("rect"), 1, 1, 4.0), ConfigError);
}

TEST(FErr, TableSpotChecks) {
  expect_table_value(f_err(spec("sin:1"), 0, 1e-3), 16);
  expect_table_value(f_err(spec("cinf:1"), 0, 1e-6), 19);
  expect_table_value(f_err(spec("sin:2"), 1, 1e-3), 45);
}

TEST(FErr, ScalesWithWindowLength) {
  // f_err is reported in units of 1/T, so it is independent of T.
  EXPECT_EQ(f_err(spec("cinf:1", 1.0), 0, 1e-6), f_err(spec("cinf:1", 4.0), 0, 1e-6));
}

TEST(FErr, Validation) {
  EXPECT_THROW(f_err(spec("sin:2"), 0, 0.0), ConfigError);
  EXPECT_THROW(f_err(spec("sin:2"), 4, 1e-3), ConfigError);
}

TEST(Overlap, RectangularAnalytic) {
  const WindowSpec rect = spec("rect");
  for (std::size_t K : {1u, 4u, 17u}) EXPECT_NEAR(overlap_variance(rect, 0.0, K), 1.0 / K, 1e-15);
  for (double tau : {0.0, 0.3, 0.5, 0.8, 0.95}) {
    for (int j = 1; j <= 25; ++j) {
      const double expected = std::pow(std::max(0.0, 1.0 - j * (1.0 - tau)), 2);
      EXPECT_NEAR(overlap_correlation(rect, j, tau), expected, 1e-14) << "tau=" << tau << " j=" << j;
    }
  }
  const std::size_t K = 1000;
  EXPECT_NEAR(overlap_variance(rect, 0.5, K), (1.0 + 2.0 * (K - 1.0) / K * 0.25) / K, 1e-15);
  EXPECT_NEAR(overlap_variance(rect, 0.5, K) * K, 1.5, 1e-3);
}

TEST(Overlap, HannHalfShiftMatchesIndependentQuadrature) {
  const WindowSpec hann = spec("sin:2");
  auto w = [](double t) { return t <= 0.0 || t >= 1.0 ? 0.0 : std::pow(std::sin(kPi * t), 2); };
  using boost::math::quadrature::gauss_kronrod;
  const double energy = gauss_kronrod<double, 61>::integrate([&](double t) { return w(t) * w(t); }, 0.0, 1.0);
  const double cross = gauss_kronrod<double, 61>::integrate([&](double t) { return w(t) * w(t - 0.5); }, 0.5, 1.0);
  const double rho = std::pow(cross / energy, 2);
  EXPECT_NEAR(overlap_correlation(hann, 1, 0.5), rho, 1e-13);
  // Golden value: (1/6)^2.
  EXPECT_NEAR(rho, 1.0 / 36.0, 1e-13);
}

TEST(Overlap, FixedRecordCounts) {
  EXPECT_EQ(windows_in_record(1.0, 100.0, 0.0), 100u);
  EXPECT_EQ(windows_in_record(1.0, 100.0, 0.5), 199u);
  EXPECT_EQ(windows_in_record(1.0, 1.0, 0.9), 1u);
  EXPECT_NEAR(normalized_overlap_variance(spec("sin:2"), 0.0, 100.0), 1.0, 1e-15);
  EXPECT_THROW(windows_in_record(1.0, 0.5, 0.0), ConfigError);
}

TEST(Overlap, HalfPowerWidthOfRectangle) {
  // |sinc(f)|^2 = 1/2 at f = 0.4429 / T.
  EXPECT_NEAR(half_power_width(spec("rect")), 2 * 0.442946470689452, 1e-9);
}
