#pragma once

// Fourier coefficients of sampled records, spectral derivatives, windowing and
// low-pass filtering.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>

#include <Eigen/Dense>

#include "fdid/error.hpp"
#include "fdid/fft.hpp"
#include "fdid/signal.hpp"
#include "fdid/window.hpp"

namespace fdid {

// How sample 0 enters the transform. `average` replaces it by the mean of the
// first and the end sample (s(0) + s(T)) / 2, i.e. the trapezoid rule on the
// closed interval; it needs the end sample.
enum class Endpoint { as_sampled, average };

namespace detail {
inline int wrap_bin(int k, std::size_t n) {
  const int N = static_cast<int>(n);
  return ((k % N) + N) % N;
}
}  // namespace detail

// coeff_k = (T/N) sum_j s_j exp(-2 pi i k j / N) at the requested signed bins.
inline Spectrum fourier_coeffs(const Signal& signal, const BinList& bins, Endpoint endpoint = Endpoint::as_sampled) {
  const std::size_t n = signal.N();
  Eigen::MatrixXcd values = signal.values;
  if (endpoint == Endpoint::average) {
    require(signal.end.has_value(), "endpoint averaging needs the sample at t = T");
    values.col(0) = 0.5 * (values.col(0) + *signal.end);
  }
  const Eigen::MatrixXcd dft = fft::transform_rows(values, fft::Direction::forward);
  Spectrum out = Spectrum::zeros(signal.T, bins, signal.channels());
  const double h = signal.T / static_cast<double>(n);
  for (std::size_t i = 0; i < bins.size(); ++i)
    out.coeffs.col(static_cast<Eigen::Index>(i)) = h * dft.col(detail::wrap_bin(bins[i], n));
  return out;
}

// Bins 0..k_max.
inline Spectrum fourier_coeffs(const Signal& signal, std::size_t k_max, Endpoint endpoint = Endpoint::as_sampled) {
  require(k_max <= signal.N() / 2, "k_max exceeds N/2");
  BinList bins(k_max + 1);
  for (std::size_t k = 0; k <= k_max; ++k) bins[k] = static_cast<int>(k);
  return fourier_coeffs(signal, bins, endpoint);
}

// Multiply every bin by D(f)^m.
inline Spectrum spectral_derivative(const Spectrum& spec, int m) {
  require(m >= 0, "derivative order must be non-negative");
  Spectrum out = spec;
  if (m == 0) return out;
  for (std::size_t i = 0; i < spec.size(); ++i)
    out.coeffs.col(static_cast<Eigen::Index>(i)) *= std::pow(derivative_multiplier(spec.frequency(i)), m);
  return out;
}

// Pointwise product with derivative row k of the window (end sample included).
inline Signal apply_window(const Signal& signal, const WindowTable& table, int k) {
  require(table.N() == signal.N(), "window table and signal have different sample counts");
  require(std::abs(table.T() - signal.T) <= 1e-12 * signal.T, "window table and signal have different lengths");
  const Eigen::RowVectorXd row = table.row(k);
  Signal out = signal;
  for (Eigen::Index c = 0; c < out.values.rows(); ++c) out.values.row(c) = out.values.row(c).cwiseProduct(row.cast<std::complex<double>>());
  if (out.end) *out.end *= table.end_values(k);
  return out;
}

// Zero every DFT bin with |f| > cutoff. The result is the periodic
// band-limited interpolant, so the end sample is replaced by sample 0.
inline Signal lowpass_filter(const Signal& signal, double cutoff) {
  require(cutoff >= 0.0 && cutoff < signal.f_nyq(), "cutoff must lie in [0, f_nyq)");
  const std::size_t n = signal.N();
  Eigen::MatrixXcd dft = fft::transform_rows(signal.values, fft::Direction::forward);
  for (std::size_t j = 0; j < n; ++j) {
    const int k = j <= n / 2 ? static_cast<int>(j) : static_cast<int>(j) - static_cast<int>(n);
    if (std::abs(k) / signal.T > cutoff * (1.0 + 1e-12)) dft.col(static_cast<Eigen::Index>(j)).setZero();
  }
  Signal out = signal;
  out.values = fft::transform_rows(dft, fft::Direction::inverse) / static_cast<double>(n);
  if (out.end) *out.end = out.values.col(0);
  return out;
}

// Predicted aliasing error of an N-point DFT: sum over m >= 1 of
// a_{k+mN} + a_{k-mN}, taken from a finely resolved reference spectrum.
// Bins missing from the reference are treated as zero.
inline Spectrum fold_back(const Spectrum& reference, const BinList& bins, std::size_t n) {
  Spectrum out = Spectrum::zeros(reference.T, bins, reference.channels());
  const int N = static_cast<int>(n);
  int k_abs_max = 0;
  for (int k : reference.bins) k_abs_max = std::max(k_abs_max, std::abs(k));
  for (std::size_t i = 0; i < bins.size(); ++i) {
    for (int m = 1; m * N - std::abs(bins[i]) <= k_abs_max; ++m) {
      for (int k : {bins[i] + m * N, bins[i] - m * N})
        if (const auto col = reference.find(k)) out.coeffs.col(static_cast<Eigen::Index>(i)) += reference.coeffs.col(static_cast<Eigen::Index>(*col));
    }
  }
  return out;
}

}  // namespace fdid
