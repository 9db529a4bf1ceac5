#pragma once

// Sampled records and their Fourier coefficients.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "fdid/error.hpp"

namespace fdid {

// Signed frequency indices; bin k sits at f = k / T.
using BinList = std::vector<int>;

// k = 0 .. floor(N/2)
inline BinList one_sided_bins(std::size_t n) {
  BinList bins(n / 2 + 1);
  for (std::size_t k = 0; k < bins.size(); ++k) bins[k] = static_cast<int>(k);
  return bins;
}

// All N DFT bins in ascending order, k = -ceil(N/2)+1 .. floor(N/2).
inline BinList two_sided_bins(std::size_t n) {
  const int hi = static_cast<int>(n / 2);
  const int lo = hi - static_cast<int>(n) + 1;
  BinList bins;
  bins.reserve(n);
  for (int k = lo; k <= hi; ++k) bins.push_back(k);
  return bins;
}

// Keep bins whose |f| lies in [f_min, f_max].
inline BinList restrict_bins(const BinList& bins, double T, std::optional<double> f_min,
                             std::optional<double> f_max) {
  BinList out;
  for (int k : bins) {
    const double f = std::abs(k) / T;
    if (f_min && f < *f_min - 1e-12 / T) continue;
    if (f_max && f > *f_max + 1e-12 / T) continue;
    out.push_back(k);
  }
  return out;
}

// D(f) = 2 pi i f: the frequency-domain image of d/dt under the
// exp(-2 pi i f t) transform kernel.
inline std::complex<double> derivative_multiplier(double f) {
  return {0.0, 2.0 * std::numbers::pi * f};
}

// Uniformly sampled multichannel record on [0, T): sample j at t_j = j T / N.
// `end` optionally holds the value at t = T, used for endpoint averaging.
struct Signal {
  double T = 1.0;
  Eigen::MatrixXcd values;  // channels x N
  std::optional<Eigen::VectorXcd> end;

  Signal() = default;
  Signal(double length, Eigen::MatrixXcd samples, std::optional<Eigen::VectorXcd> end_sample = std::nullopt)
      : T(length), values(std::move(samples)), end(std::move(end_sample)) {
    validate();
  }

  std::size_t N() const { return static_cast<std::size_t>(values.cols()); }
  std::size_t channels() const { return static_cast<std::size_t>(values.rows()); }
  double sample_time(std::size_t j) const { return static_cast<double>(j) * T / static_cast<double>(N()); }
  double fs() const { return static_cast<double>(N()) / T; }
  double f_nyq() const { return 0.5 * fs(); }

  void validate() const {
    require(T > 0.0 && std::isfinite(T), "signal length T must be positive");
    require(values.cols() >= 2, "signal needs at least two samples");
    require(values.rows() >= 1, "signal needs at least one channel");
    require(values.allFinite(), "signal contains non-finite samples");
    if (end) {
      require(end->size() == values.rows(), "end sample has wrong channel count");
      require(end->allFinite(), "end sample is not finite");
    }
  }
};

// Fourier coefficients in the integral convention
//   coeffs(c, i) ~ int_0^T s_c(t) exp(-2 pi i f t) dt,  f = bins[i] / T.
struct Spectrum {
  double T = 1.0;
  BinList bins;
  Eigen::MatrixXcd coeffs;  // channels x bins

  std::size_t size() const { return bins.size(); }
  std::size_t channels() const { return static_cast<std::size_t>(coeffs.rows()); }
  double frequency(std::size_t i) const { return bins[i] / T; }

  // Column index of bin k, or nullopt.
  std::optional<std::size_t> find(int k) const {
    const auto it = std::find(bins.begin(), bins.end(), k);
    if (it == bins.end()) return std::nullopt;
    return static_cast<std::size_t>(it - bins.begin());
  }

  static Spectrum zeros(double T, BinList bins, std::size_t channels) {
    Spectrum s;
    s.T = T;
    s.coeffs = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(channels), static_cast<Eigen::Index>(bins.size()));
    s.bins = std::move(bins);
    return s;
  }
};

// Columns of `spec` at the requested bins, in the requested order.
inline Spectrum select_bins(const Spectrum& spec, const BinList& bins) {
  Spectrum out = Spectrum::zeros(spec.T, bins, spec.channels());
  for (std::size_t i = 0; i < bins.size(); ++i) {
    const auto col = spec.find(bins[i]);
    require(col.has_value(), "bin " + std::to_string(bins[i]) + " not present in spectrum");
    out.coeffs.col(static_cast<Eigen::Index>(i)) = spec.coeffs.col(static_cast<Eigen::Index>(*col));
  }
  return out;
}

}  // namespace fdid
