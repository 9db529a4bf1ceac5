#pragma once

// Error norms, parameter error, log-log slopes and ensemble statistics.

#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/distributions/students_t.hpp>

#include "fdid/error.hpp"
#include "fdid/model.hpp"
#include "fdid/signal.hpp"

namespace fdid {

struct ResidualNorms {
  Eigen::VectorXd per_frequency;  // ||e(f)|| over channels, one per bin
  double l2 = 0.0;                // sqrt(sum_f ||e(f)||^2 / T)
};

inline ResidualNorms error_norms(const Spectrum& residual) {
  ResidualNorms out;
  out.per_frequency = residual.coeffs.colwise().norm().transpose();
  out.l2 = std::sqrt(out.per_frequency.squaredNorm() / residual.T);
  return out;
}

// Frobenius norm of the difference over the free blocks (A_{n_a} excluded).
inline double param_error(const ModelParams& truth, const ModelParams& estimate) {
  require(truth.structure == estimate.structure, "parameter sets have different structures");
  return (truth.free_block() - estimate.free_block()).norm();
}

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double half_width = 0.0;  // 95% confidence half-width of the slope
  std::size_t points = 0;
};

// Ordinary least squares of log(y) on log(x), restricted to x in [x_min, x_max].
inline SlopeFit loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys,
                             double x_min = 0.0, double x_max = INFINITY, double confidence = 0.95) {
  require(xs.size() == ys.size(), "x and y lengths differ");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] < x_min || xs[i] > x_max) continue;
    require(xs[i] > 0.0 && ys[i] > 0.0, "log-log fit needs positive data");
    lx.push_back(std::log(xs[i]));
    ly.push_back(std::log(ys[i]));
  }
  const std::size_t n = lx.size();
  require(n >= 2, "log-log fit needs at least two points in range");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  require(sxx > 0.0, "log-log fit needs distinct x values");
  SlopeFit fit;
  fit.points = n;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (n > 2) {
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = ly[i] - fit.intercept - fit.slope * lx[i];
      sse += r * r;
    }
    const double se = std::sqrt(sse / static_cast<double>(n - 2) / sxx);
    const boost::math::students_t dist(static_cast<double>(n - 2));
    fit.half_width = boost::math::quantile(boost::math::complement(dist, 0.5 * (1.0 - confidence))) * se;
  }
  return fit;
}

struct EnsembleStats {
  std::vector<double> mean_error;  // ||mean_{1..K}(theta) - theta_true||, K = 1..n
  std::vector<double> std_norm;    // ||elementwise std over the first K||
  std::vector<double> trial_error; // ||theta_i - theta_true|| per trial
};

// Cumulative statistics in the given (seed) order.
inline EnsembleStats ensemble_stats(const std::vector<ModelParams>& estimates, const ModelParams& truth) {
  EnsembleStats out;
  const Eigen::MatrixXd t = truth.free_block();
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(t.rows(), t.cols());
  Eigen::MatrixXd sum_sq = sum;
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    const Eigen::MatrixXd e = estimates[i].free_block();
    require(e.rows() == t.rows() && e.cols() == t.cols(), "ensemble member has the wrong structure");
    sum += e;
    sum_sq += e.cwiseAbs2();
    const double k = static_cast<double>(i + 1);
    const Eigen::MatrixXd mean = sum / k;
    const Eigen::MatrixXd var = (sum_sq / k - mean.cwiseAbs2()).cwiseMax(0.0);
    out.mean_error.push_back((mean - t).norm());
    out.std_norm.push_back(var.cwiseSqrt().norm());
    out.trial_error.push_back((e - t).norm());
  }
  return out;
}

}  // namespace fdid
