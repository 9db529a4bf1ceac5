#pragma once

// Sampling-rate sweeps and noisy Monte Carlo ensembles on a simulated system.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "fdid/identify.hpp"
#include "fdid/metrics.hpp"
#include "fdid/parallel.hpp"
#include "fdid/simulate.hpp"

namespace fdid {

struct SweepPoint {
  double fs = 0.0;
  Method method = Method::corrected;
  std::string window;  // "rect" for the rectangular methods
  int n_p = 0;
  double e_fstar = std::numeric_limits<double>::quiet_NaN();  // ||e(f*)|| with the true parameters
  double E_true = 0.0;                                         // ||E|| with the true parameters
  double E_fit = 0.0;                                          // ||E|| of the estimate
  double param_error = 0.0;
  double wall_time = 0.0;
  int rank = 0;
  double condition = 0.0;
  double imag_norm = 0.0;
};

// One estimate at sampling rate fs. Residuals with the true parameters use
// the same regression; for polynomial methods the transient coefficients are
// refitted with the parameters held at their true values.
inline SweepPoint sweep_point(const Simulation& sim, double fs, const IdentifyOptions& options, double f_star,
                              double sigma = 0.0, std::uint64_t noise_seed = 0) {
  const auto [x, u] = observed_records(sim, fs, sigma, noise_seed);
  const auto start = std::chrono::steady_clock::now();
  const RegressionSystem reg = prepare_regression(x, u, sim.theta.structure, options);
  const EstimateReport report = solve_ls(reg, options.method);
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  SweepPoint p;
  p.fs = fs;
  p.method = options.method;
  p.window = uses_window(options.method) ? options.window.name() : "rect";
  p.n_p = reg.n_p();
  p.param_error = param_error(sim.theta, report.theta_hat);
  p.wall_time = elapsed;
  p.rank = report.rank;
  p.condition = report.condition;
  p.imag_norm = report.imag_norm;
  p.E_fit = report.norms.l2;
  const Spectrum e_true = residual_spectrum(sim.theta, reg, fit_polynomial(sim.theta, reg));
  const ResidualNorms norms = error_norms(e_true);
  p.E_true = norms.l2;
  const int k_star = static_cast<int>(std::lround(f_star * x.T));
  if (const auto col = e_true.find(k_star)) p.e_fstar = norms.per_frequency(static_cast<Eigen::Index>(*col));
  return p;
}

inline std::vector<SweepPoint> run_sweep(const Simulation& sim, const std::vector<double>& rates,
                                         const std::vector<IdentifyOptions>& cases, double f_star, double sigma = 0.0,
                                         std::uint64_t noise_seed = 0) {
  std::vector<SweepPoint> out(rates.size() * cases.size());
  parallel_for(out.size(), [&](std::size_t i) {
    out[i] = sweep_point(sim, rates[i / cases.size()], cases[i % cases.size()], f_star, sigma, noise_seed);
  });
  return out;
}

struct EnsembleResult {
  std::vector<ModelParams> estimates;  // trial order = seed order
  std::vector<std::uint64_t> seeds;
  EnsembleStats stats;
  double mean_trial_error = 0.0;  // mean over trials of ||theta - theta_hat_i||
};

// Trial i adds noise from seed base_seed + i to the fixed noiseless records.
inline EnsembleResult monte_carlo(const Simulation& sim, double fs, double sigma, const IdentifyOptions& options,
                                  std::size_t trials, std::uint64_t base_seed) {
  require(trials >= 1, "need at least one trial");
  EnsembleResult r;
  r.estimates.resize(trials);
  r.seeds.resize(trials);
  parallel_for(trials, [&](std::size_t i) {
    r.seeds[i] = base_seed + i;
    const auto [x, u] = observed_records(sim, fs, sigma, r.seeds[i]);
    r.estimates[i] = identify(x, u, sim.theta.structure, options).theta_hat;
  });
  r.stats = ensemble_stats(r.estimates, sim.theta);
  double sum = 0.0;
  for (double e : r.stats.trial_error) sum += e;
  r.mean_trial_error = sum / static_cast<double>(trials);
  return r;
}

}  // namespace fdid
