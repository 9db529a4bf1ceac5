#pragma once

// Frequency-domain regression and least-squares estimation.
//
// Per bin f the model reads
//   sum_j A_j L_j(f) - sum_k B_k R_k(f) = 0,
//   L_j = D^j x_w^ - x^{j},   R_k = D^k u_w^ - u^{k}.
// Stacking bins as columns, M1 = L_{n_a} and
//   M2 = [L_{n_a-1}; ..; L_0; -R_{n_b}; ..; -R_0],
// so with A_{n_a} = I the free block theta2 solves theta2 M2 = -M1.
// The transient polynomial of the P&S baseline adds rows D^m / max|D^m|
// with per-output complex coefficients.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <optional>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "fdid/corrections.hpp"
#include "fdid/error.hpp"
#include "fdid/metrics.hpp"
#include "fdid/model.hpp"
#include "fdid/signal.hpp"
#include "fdid/spectral.hpp"
#include "fdid/window.hpp"

namespace fdid {

enum class Method { corrected, ps, mixed, naive };

inline std::string to_string(Method m) {
  switch (m) {
    case Method::corrected: return "corrected";
    case Method::ps: return "ps";
    case Method::mixed: return "mixed";
    case Method::naive: return "naive";
  }
  return "?";
}

inline Method parse_method(const std::string& s) {
  if (s == "corrected") return Method::corrected;
  if (s == "ps") return Method::ps;
  if (s == "mixed") return Method::mixed;
  if (s == "naive") return Method::naive;
  throw ConfigError("unknown method '" + s + "' (corrected | ps | mixed | naive)");
}

inline bool uses_window(Method m) { return m == Method::corrected || m == Method::mixed; }

struct RegressionSystem {
  ModelStructure structure;
  double T = 1.0;
  BinList band;
  Eigen::MatrixXcd M1;  // n_x x |band|
  Eigen::MatrixXcd M2;  // free_rows x |band|
  Eigen::MatrixXcd P;   // n_p x |band|, empty without a transient polynomial

  int n_p() const { return static_cast<int>(P.rows()); }
};

// D(f)^m / max_band |D(f)^m|, m = 0..n_p-1.
inline Eigen::MatrixXcd polynomial_rows(const BinList& band, double T, int n_p) {
  require(n_p >= 0, "polynomial order must be non-negative");
  Eigen::MatrixXcd P(n_p, static_cast<Eigen::Index>(band.size()));
  double f_max = 0.0;
  for (int k : band) f_max = std::max(f_max, std::abs(k) / T);
  const double d_max = std::abs(derivative_multiplier(f_max));
  for (int m = 0; m < n_p; ++m) {
    const double scale = (m == 0 || d_max == 0.0) ? 1.0 : std::pow(d_max, m);
    for (std::size_t i = 0; i < band.size(); ++i)
      P(m, static_cast<Eigen::Index>(i)) = std::pow(derivative_multiplier(band[i] / T), m) / scale;
  }
  return P;
}

inline RegressionSystem assemble_regression(const Spectrum& x_spec, const Spectrum& u_spec, const CorrectionSet& x_corr,
                                            const CorrectionSet& u_corr, const ModelStructure& structure,
                                            const BinList& band, int n_p = 0) {
  structure.validate();
  require(!band.empty(), "frequency band is empty");
  require(static_cast<int>(x_spec.channels()) == structure.n_x, "state spectrum has wrong channel count");
  require(static_cast<int>(u_spec.channels()) == structure.n_u, "input spectrum has wrong channel count");
  require(x_corr.j_max() >= structure.n_a, "state corrections up to order n_a are missing");
  require(u_corr.j_max() >= structure.n_b, "input corrections up to order n_b are missing");

  const double T = x_spec.T;
  const Spectrum x = select_bins(x_spec, band);
  const Spectrum u = select_bins(u_spec, band);
  auto block = [&](const Spectrum& base, const CorrectionSet& corr, int j) {
    const Spectrum c = select_bins(corr.order(j), band);
    Eigen::MatrixXcd out = base.coeffs;
    for (std::size_t i = 0; i < band.size(); ++i)
      out.col(static_cast<Eigen::Index>(i)) *= std::pow(derivative_multiplier(band[i] / T), j);
    return Eigen::MatrixXcd(out - c.coeffs);
  };

  RegressionSystem reg;
  reg.structure = structure;
  reg.T = T;
  reg.band = band;
  const auto nb = static_cast<Eigen::Index>(band.size());
  reg.M1 = block(x, x_corr, structure.n_a);
  reg.M2.resize(structure.free_rows(), nb);
  Eigen::Index row = 0;
  for (int j = structure.n_a - 1; j >= 0; --j, row += structure.n_x) reg.M2.middleRows(row, structure.n_x) = block(x, x_corr, j);
  for (int k = structure.n_b; k >= 0; --k, row += structure.n_u) reg.M2.middleRows(row, structure.n_u) = -block(u, u_corr, k);
  reg.P = polynomial_rows(band, T, n_p);
  return reg;
}

// Corrections that are identically zero (rectangular window, P&S).
inline CorrectionSet zero_corrections(double T, const BinList& bins, std::size_t channels, int j_max, SignalRole role) {
  CorrectionSet set;
  set.source = role;
  set.zero = Spectrum::zeros(T, bins, channels);
  set.spectra.assign(static_cast<std::size_t>(j_max), set.zero);
  return set;
}

// e(f) = M1 + theta2 M2 + C P per bin.
inline Spectrum residual_spectrum(const Eigen::MatrixXcd& theta2, const RegressionSystem& reg,
                                  const Eigen::MatrixXcd& poly = {}) {
  require(theta2.rows() == reg.M1.rows() && theta2.cols() == reg.M2.rows(), "parameter block has wrong shape");
  Spectrum e;
  e.T = reg.T;
  e.bins = reg.band;
  e.coeffs = reg.M1 + theta2 * reg.M2;
  if (poly.size() > 0) {
    require(poly.rows() == reg.M1.rows() && poly.cols() == reg.P.rows(), "polynomial coefficients have wrong shape");
    e.coeffs += poly * reg.P;
  }
  return e;
}

inline Spectrum residual_spectrum(const ModelParams& theta, const RegressionSystem& reg,
                                  const Eigen::MatrixXcd& poly = {}) {
  require(theta.structure == reg.structure, "parameters and regression have different structures");
  return residual_spectrum(Eigen::MatrixXcd(theta.free_block().cast<std::complex<double>>()), reg, poly);
}

struct LsSolution {
  Eigen::MatrixXcd theta2;  // n_x x free_rows
  Eigen::MatrixXcd poly;    // n_x x n_p
  int rank = 0;             // of the parameter block
  int poly_rank = 0;        // numerical rank of the transient polynomial block
  double sv_max = 0.0;
  double sv_min = 0.0;
};

inline constexpr double kRankThreshold = 1e-12;

namespace detail {

// Minimum-norm solution of A X = B over singular values above the threshold;
// columns of A are equilibrated first.
struct SvdSolve {
  Eigen::MatrixXcd X;
  int rank = 0;
  double sv_max = 0.0;
  double sv_min = 0.0;
  Eigen::MatrixXcd range;  // orthonormal basis of the numerical column space
};

inline SvdSolve svd_solve(const Eigen::MatrixXcd& A_in, const Eigen::MatrixXcd& B) {
  Eigen::MatrixXcd A = A_in;
  Eigen::VectorXd scale(A.cols());
  for (Eigen::Index c = 0; c < A.cols(); ++c) {
    const double n = A.col(c).norm();
    scale(c) = n > 0.0 ? 1.0 / n : 1.0;
    A.col(c) *= scale(c);
  }
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(kRankThreshold);
  SvdSolve out;
  out.rank = static_cast<int>(svd.rank());
  out.sv_max = svd.singularValues()(0);
  out.sv_min = svd.singularValues()(svd.singularValues().size() - 1);
  out.X = scale.asDiagonal() * svd.solve(B);
  out.range = svd.matrixU().leftCols(out.rank);
  return out;
}

}  // namespace detail

// Least squares for [theta2 C] in theta2 M2 + C P = -M1 (one column per bin).
// The transient coefficients C are nuisance parameters: their block is
// projected out first, so only rank loss in the model parameters is an
// error; C is then the minimum-norm fit to what theta2 leaves over.
inline LsSolution least_squares(const Eigen::MatrixXcd& M2, const Eigen::MatrixXcd& P, const Eigen::MatrixXcd& M1) {
  const Eigen::Index q = M2.rows();
  const Eigen::Index n_p = P.rows();
  const Eigen::Index nb = M2.cols();
  require(nb >= q + n_p, "band has " + std::to_string(nb) + " bins for " + std::to_string(q + n_p) +
                             " unknowns per output");
  Eigen::MatrixXcd A = M2.transpose();
  Eigen::MatrixXcd b = -M1.transpose();
  LsSolution sol;
  detail::SvdSolve poly_fit;
  if (n_p > 0) {
    poly_fit = detail::svd_solve(P.transpose(), Eigen::MatrixXcd::Zero(nb, 1));
    sol.poly_rank = poly_fit.rank;
    const Eigen::MatrixXcd& Q = poly_fit.range;
    A -= Q * (Q.adjoint() * A);
    b -= Q * (Q.adjoint() * b);
  }
  const detail::SvdSolve fit = detail::svd_solve(A, b);
  sol.rank = fit.rank;
  sol.sv_max = fit.sv_max;
  sol.sv_min = fit.sv_min;
  if (sol.rank < q)
    throw NumericError("regression is rank deficient: rank " + std::to_string(sol.rank) + " < " + std::to_string(q) +
                       " parameters per output (smallest/largest singular value " +
                       std::to_string(sol.sv_min / sol.sv_max) + ")");
  sol.theta2 = fit.X.transpose();
  if (n_p > 0) {
    const Eigen::MatrixXcd rest = -M1.transpose() - M2.transpose() * fit.X;
    sol.poly = detail::svd_solve(P.transpose(), rest).X.transpose();
  } else {
    sol.poly.resize(M1.rows(), 0);
  }
  return sol;
}

struct EstimateReport {
  Method method = Method::corrected;
  ModelParams theta_hat;
  Eigen::MatrixXcd poly_coeffs;  // n_x x n_p
  double imag_norm = 0.0;        // ||Im theta2|| discarded by the real projection
  int rank = 0;
  int poly_rank = 0;
  double condition = 0.0;  // of the equilibrated parameter regressor
  Spectrum residual;       // e(f) of the complex solution
  ResidualNorms norms;
  double wall_time = 0.0;
  BinList band;
  std::optional<WindowSpec> window;
  int n_p = 0;
};

inline EstimateReport solve_ls(const RegressionSystem& reg, Method method = Method::corrected) {
  const LsSolution sol = least_squares(reg.M2, reg.P, reg.M1);
  EstimateReport report;
  report.method = method;
  report.theta_hat = ModelParams::from_free_block(reg.structure, sol.theta2.real());
  report.poly_coeffs = sol.poly;
  report.imag_norm = sol.theta2.imag().norm();
  report.rank = sol.rank;
  report.poly_rank = sol.poly_rank;
  report.condition = sol.sv_max / sol.sv_min;
  report.residual = residual_spectrum(sol.theta2, reg, sol.poly);
  report.norms = error_norms(report.residual);
  report.band = reg.band;
  report.n_p = reg.n_p();
  return report;
}

// Transient coefficients C minimizing ||M1 + theta2 M2 + C P|| for a fixed theta.
inline Eigen::MatrixXcd fit_polynomial(const ModelParams& theta, const RegressionSystem& reg) {
  if (reg.P.rows() == 0) return Eigen::MatrixXcd(reg.M1.rows(), 0);
  const Spectrum r = residual_spectrum(theta, reg);
  return detail::svd_solve(reg.P.transpose(), Eigen::MatrixXcd(-r.coeffs.transpose())).X.transpose();
}

inline EstimateReport ps_baseline(const Spectrum& x_rect, const Spectrum& u_rect, const ModelStructure& structure,
                                  int n_p, const BinList& band) {
  const auto xc = zero_corrections(x_rect.T, x_rect.bins, x_rect.channels(), structure.n_a, SignalRole::state);
  const auto uc = zero_corrections(u_rect.T, u_rect.bins, u_rect.channels(), structure.n_b, SignalRole::input);
  return solve_ls(assemble_regression(x_rect, u_rect, xc, uc, structure, band, n_p), n_p == 0 ? Method::naive : Method::ps);
}

inline EstimateReport mixed_identify(const Spectrum& x_spec, const Spectrum& u_spec, const CorrectionSet& x_corr,
                                     const CorrectionSet& u_corr, const ModelStructure& structure, int n_p,
                                     const BinList& band) {
  return solve_ls(assemble_regression(x_spec, u_spec, x_corr, u_corr, structure, band, n_p), Method::mixed);
}

struct IdentifyOptions {
  Method method = Method::corrected;
  WindowSpec window{WindowFamily::cinf_n, 4.0, 1.0};
  int n_p = 0;
  std::optional<BinList> band;  // explicit bins; otherwise the method default
  std::optional<double> f_min;
  std::optional<double> f_max;
  Endpoint endpoint = Endpoint::as_sampled;
};

// Default band: one-sided for windowed methods, all N bins for the
// rectangular ones; then restricted to [f_min, f_max].
inline BinList default_band(Method method, std::size_t N, double T, std::optional<double> f_min,
                            std::optional<double> f_max) {
  const BinList all = uses_window(method) ? one_sided_bins(N) : two_sided_bins(N);
  return restrict_bins(all, T, f_min, f_max);
}

// Spectra, corrections and regression for one record pair.
inline RegressionSystem prepare_regression(const Signal& x, const Signal& u, const ModelStructure& structure,
                                           const IdentifyOptions& options) {
  structure.validate();
  require(x.N() == u.N() && std::abs(x.T - u.T) <= 1e-12 * x.T, "state and input records are on different grids");
  require(static_cast<int>(x.channels()) == structure.n_x, "state record has " + std::to_string(x.channels()) +
                                                               " channels, structure expects " + std::to_string(structure.n_x));
  require(static_cast<int>(u.channels()) == structure.n_u, "input record has " + std::to_string(u.channels()) +
                                                               " channels, structure expects " + std::to_string(structure.n_u));
  const BinList band = options.band ? restrict_bins(*options.band, x.T, options.f_min, options.f_max)
                                    : default_band(options.method, x.N(), x.T, options.f_min, options.f_max);
  require(!band.empty(), "frequency band is empty");
  const int n_p = (options.method == Method::naive || options.method == Method::corrected) ? 0 : options.n_p;
  require(n_p >= 0, "polynomial order must be non-negative");

  if (uses_window(options.method)) {
    WindowSpec w = options.window;
    w.length = x.T;
    require(w.family != WindowFamily::rectangular, "the corrected method needs a differentiable window");
    require(w.family != WindowFamily::poly_ref, "poly_ref is a reference shape, not an identification window");
    const WindowTable table = window_table(w, x.N(), std::max(structure.n_a, structure.n_b));
    const Spectrum xs = fourier_coeffs(apply_window(x, table, 0), band, options.endpoint);
    const Spectrum us = fourier_coeffs(apply_window(u, table, 0), band, options.endpoint);
    const auto xc = correction_spectra(x, table, structure.n_a, band, options.endpoint, SignalRole::state);
    const auto uc = correction_spectra(u, table, structure.n_b, band, options.endpoint, SignalRole::input);
    return assemble_regression(xs, us, xc, uc, structure, band, n_p);
  }
  const Spectrum xs = fourier_coeffs(x, band, options.endpoint);
  const Spectrum us = fourier_coeffs(u, band, options.endpoint);
  const auto xc = zero_corrections(x.T, band, x.channels(), structure.n_a, SignalRole::state);
  const auto uc = zero_corrections(u.T, band, u.channels(), structure.n_b, SignalRole::input);
  return assemble_regression(xs, us, xc, uc, structure, band, n_p);
}

// Full pipeline; wall_time covers transforms, corrections, assembly and solve.
inline EstimateReport identify(const Signal& x, const Signal& u, const ModelStructure& structure,
                               const IdentifyOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const RegressionSystem reg = prepare_regression(x, u, structure, options);
  EstimateReport report = solve_ls(reg, options.method);
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (uses_window(options.method)) {
    report.window = options.window;
    report.window->length = x.T;
  }
  return report;
}

}  // namespace fdid
