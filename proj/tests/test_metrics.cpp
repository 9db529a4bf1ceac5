#include <cmath>
#include <complex>

#include <gtest/gtest.h>

#include "helpers.hpp"

using namespace fdid;
using fdid::test::kPi;

TEST(ErrorNorms, Trivial) {
  const double T = 4.0;
  Spectrum e = Spectrum::zeros(T, two_sided_bins(16), 3);
  EXPECT_EQ(error_norms(e).l2, 0.0);
  e.coeffs(1, 5) = 1.0;
  const ResidualNorms n = error_norms(e);
  EXPECT_NEAR(n.l2, std::sqrt(1.0 / T), 1e-15);
  EXPECT_EQ(n.per_frequency(5), 1.0);
}

TEST(ErrorNorms, MatchesFrequencyQuadrature) {
  // e(f) = exp(-f^2) on a fine bin grid: sum |e|^2 / T -> int exp(-2 f^2) df.
  const double T = 20.0;
  const BinList bins = restrict_bins(two_sided_bins(4000), T, std::nullopt, 8.0);
  Spectrum e = Spectrum::zeros(T, bins, 1);
  for (std::size_t i = 0; i < bins.size(); ++i) e.coeffs(0, static_cast<Eigen::Index>(i)) = std::exp(-std::pow(e.frequency(i), 2));
  EXPECT_NEAR(error_norms(e).l2, std::sqrt(std::sqrt(kPi / 2.0)), 1e-12);
}

TEST(ParamError, Basics) {
  const ModelStructure s{3, 2, 2, 1};
  const ModelParams a = random_system(s, 1);
  EXPECT_EQ(param_error(a, a), 0.0);
  ModelParams b = a;
  b.B[1](2, 1) += 1e-3;
  EXPECT_NEAR(param_error(a, b), 1e-3, 1e-15);
  b.A[2](0, 0) += 5.0;  // the fixed leading matrix is not a free parameter
  EXPECT_NEAR(param_error(a, b), 1e-3, 1e-15);
  const ModelParams c = random_system(s, 2);
  double sq = 0.0;
  for (int j = 0; j < s.n_a; ++j) sq += (a.A[static_cast<std::size_t>(j)] - c.A[static_cast<std::size_t>(j)]).squaredNorm();
  for (int k = 0; k <= s.n_b; ++k) sq += (a.B[static_cast<std::size_t>(k)] - c.B[static_cast<std::size_t>(k)]).squaredNorm();
  EXPECT_NEAR(param_error(a, c), std::sqrt(sq), 1e-12);
  EXPECT_THROW(param_error(a, random_system({3, 2, 1, 0}, 1)), ConfigError);
}

TEST(LogLogSlope, PowerLaws) {
  std::vector<double> x, sq, flat;
  for (double v = 1.0; v <= 100.0; v *= 1.5) {
    x.push_back(v);
    sq.push_back(v * v);
    flat.push_back(3.0);
  }
  EXPECT_NEAR(loglog_slope(x, sq).slope, 2.0, 1e-12);
  EXPECT_NEAR(loglog_slope(x, flat).slope, 0.0, 1e-12);
  EXPECT_NEAR(loglog_slope(x, sq, 10.0, 50.0).slope, 2.0, 1e-12);
  EXPECT_THROW(loglog_slope(x, sq, 200.0, 300.0), ConfigError);
}

TEST(LogLogSlope, NoisyPowerLawWithinInterval) {
  CounterRng rng(17);
  std::vector<double> x, y;
  for (int i = 0; i < 60; ++i) {
    const double v = std::exp(0.1 * i);
    x.push_back(v);
    y.push_back(2.0 * std::pow(v, -1.5) * std::exp(0.1 * rng.normal()));
  }
  const SlopeFit fit = loglog_slope(x, y);
  EXPECT_GT(fit.half_width, 0.0);
  EXPECT_LT(fit.half_width, 0.1);
  EXPECT_LE(std::abs(fit.slope + 1.5), fit.half_width);
}

TEST(Ensemble, Statistics) {
  const ModelStructure s{2, 1, 1, 0};
  const ModelParams truth = random_system(s, 1);
  const std::vector<ModelParams> same(4, random_system(s, 2));
  const EnsembleStats st = ensemble_stats(same, truth);
  for (double v : st.std_norm) EXPECT_NEAR(v, 0.0, 1e-7);
  EXPECT_NEAR(st.mean_error[0], param_error(truth, same[0]), 1e-15);

  // Direct recomputation on ten members.
  std::vector<ModelParams> members;
  for (int i = 0; i < 10; ++i) members.push_back(random_system(s, 100 + i));
  const EnsembleStats e = ensemble_stats(members, truth);
  for (std::size_t K = 1; K <= 10; ++K) {
    Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(2, 3);
    for (std::size_t i = 0; i < K; ++i) mean += members[i].free_block();
    mean /= static_cast<double>(K);
    Eigen::MatrixXd var = Eigen::MatrixXd::Zero(2, 3);
    for (std::size_t i = 0; i < K; ++i) var += (members[i].free_block() - mean).cwiseAbs2();
    var /= static_cast<double>(K);
    EXPECT_NEAR(e.mean_error[K - 1], (mean - truth.free_block()).norm(), 1e-12);
    EXPECT_NEAR(e.std_norm[K - 1], var.cwiseSqrt().norm(), 1e-7);
    EXPECT_NEAR(e.trial_error[K - 1], param_error(truth, members[K - 1]), 1e-12);
  }
}

TEST(Experiments, MonteCarloSeedsAndSingleTrial) {
  Experiment ex;
  ex.config.structure = {2, 2, 1, 0};
  ex.config.dt = 1.0 / 960.0;
  ex.n_f = 8;
  ex.f_max = 10.0;
  const Simulation sim = simulate(ex);
  IdentifyOptions o;
  o.window = WindowSpec::parse("cinf:1");
  const EnsembleResult r = monte_carlo(sim, 48.0, 1e-3, o, 3, 40);
  EXPECT_EQ(r.seeds, (std::vector<std::uint64_t>{40, 41, 42}));
  const auto [x, u] = observed_records(sim, 48.0, 1e-3, 41);
  EXPECT_EQ(identify(x, u, sim.theta.structure, o).theta_hat.free_block(), r.estimates[1].free_block());
  const EnsembleResult one = monte_carlo(sim, 48.0, 1e-3, o, 1, 40);
  EXPECT_EQ(one.estimates.size(), 1u);
  EXPECT_EQ(one.estimates[0].free_block(), r.estimates[0].free_block());
  EXPECT_DOUBLE_EQ(one.mean_trial_error, one.stats.trial_error[0]);
}

TEST(Experiments, SweepPointMatchesIdentify) {
  Experiment ex;
  ex.config.structure = {2, 2, 1, 0};
  ex.config.dt = 1.0 / 960.0;
  ex.n_f = 8;
  ex.f_max = 10.0;
  const Simulation sim = simulate(ex);
  IdentifyOptions o;
  o.window = WindowSpec::parse("sin:2");
  const SweepPoint p = sweep_point(sim, 48.0, o, 2.0);
  const auto [x, u] = observed_records(sim, 48.0, 0.0, 0);
  const EstimateReport r = identify(x, u, sim.theta.structure, o);
  EXPECT_DOUBLE_EQ(p.param_error, param_error(sim.theta, r.theta_hat));
  EXPECT_DOUBLE_EQ(p.E_fit, r.norms.l2);
  EXPECT_EQ(p.window, "sin:2");
  EXPECT_TRUE(std::isfinite(p.e_fstar));
  EXPECT_GT(p.E_true, 0.0);
  const auto sweep = run_sweep(sim, {48.0, 96.0}, {o}, 2.0);
  EXPECT_EQ(sweep.size(), 2u);
  EXPECT_DOUBLE_EQ(sweep[0].param_error, p.param_error);
}
