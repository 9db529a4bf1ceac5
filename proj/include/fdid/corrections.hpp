#pragma once

// Windowing correction terms.
//
// For a window w and signal x the j-th correction is
//   x^{j} = d^j(w x)/dt^j - w x^{(j)} = sum_{k=1}^{j} C(j,k) w^{(k)} x^{(j-k)}.
// It obeys the recurrence
//   x^{j} = a_0 w^{(j)} x + sum_{m=1}^{j-1} a_m d^m x^{j-m}/dt^m,
// so in the frequency domain every order is built from F(w^{(j)} x) and the
// lower orders multiplied by D(f)^m -- no time derivative of x is needed.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fdid/error.hpp"
#include "fdid/rational.hpp"
#include "fdid/signal.hpp"
#include "fdid/spectral.hpp"
#include "fdid/window.hpp"

namespace fdid {

inline constexpr int kDefaultMaxCorrectionOrder = 4;

struct RecurrenceCoeffs {
  int order = 0;
  std::vector<Rational> a;  // a_0 .. a_{order-1}; a_0 carries the leading sign

  double coefficient(int m) const { return a.at(static_cast<std::size_t>(m)).to_double(); }
};

namespace detail {

inline Rational binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  Rational r = 1;
  for (int i = 1; i <= k; ++i) r = r * Rational(n - k + i) / Rational(i);
  return r;
}

// Linear combination of w^{(k)} x^{(l)}, keyed by (k, l).
using Expansion = std::map<std::pair<int, int>, Rational>;

inline void add_terms(Expansion& into, const Expansion& e, const Rational& scale) {
  for (const auto& [kl, c] : e) {
    into[kl] += scale * c;
    if (into[kl].is_zero()) into.erase(kl);
  }
}

// d^m/dt^m by the product rule on every term.
inline Expansion differentiate(const Expansion& e, int m) {
  Expansion out;
  for (const auto& [kl, c] : e)
    for (int i = 0; i <= m; ++i) add_terms(out, {{{kl.first + i, kl.second + m - i}, c * binomial(m, i)}}, 1);
  return out;
}

inline Expansion leibniz_expansion(int n) {
  Expansion e;
  for (int k = 1; k <= n; ++k) e[{k, n - k}] = binomial(n, k);
  return e;
}

// Assemble x^{n} symbolically from the recurrence, expanding the lower orders
// with their own coefficients.
inline Expansion assemble(const std::vector<RecurrenceCoeffs>& coeffs, int n) {
  std::vector<Expansion> x(static_cast<std::size_t>(n) + 1);
  for (int j = 1; j <= n; ++j) {
    const auto& a = coeffs.at(static_cast<std::size_t>(j - 1)).a;
    Expansion e{{{j, 0}, a[0]}};
    for (int m = 1; m < j; ++m) add_terms(e, differentiate(x[static_cast<std::size_t>(j - m)], m), a[static_cast<std::size_t>(m)]);
    x[static_cast<std::size_t>(j)] = std::move(e);
  }
  return x[static_cast<std::size_t>(n)];
}

// Matching the coefficient of w^{(k)} x^{(n-k)} for k = 1..n gives
//   k = n:  a_0 + sum_m a_m = 1
//   k < n:  sum_m a_m (C(n,k) - C(m,k)) = C(n,k)
// which is solved exactly by Gaussian elimination.
inline RecurrenceCoeffs solve_recurrence(int n) {
  const int size = n;
  std::vector<std::vector<Rational>> A(static_cast<std::size_t>(size), std::vector<Rational>(static_cast<std::size_t>(size) + 1));
  for (int k = 1; k <= n; ++k) {
    auto& row = A[static_cast<std::size_t>(k - 1)];
    if (k == n) {
      for (int m = 0; m < n; ++m) row[static_cast<std::size_t>(m)] = 1;
      row[static_cast<std::size_t>(size)] = 1;
    } else {
      for (int m = 1; m < n; ++m) row[static_cast<std::size_t>(m)] = binomial(n, k) - binomial(m, k);
      row[static_cast<std::size_t>(size)] = binomial(n, k);
    }
  }
  for (int col = 0; col < size; ++col) {
    int pivot = -1;
    for (int r = col; r < size; ++r)
      if (!A[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)].is_zero()) {
        pivot = r;
        break;
      }
    if (pivot < 0) throw NumericError("correction recurrence of order " + std::to_string(n) + " is singular");
    std::swap(A[static_cast<std::size_t>(col)], A[static_cast<std::size_t>(pivot)]);
    const Rational p = A[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
    for (auto& v : A[static_cast<std::size_t>(col)]) v = v / p;
    for (int r = 0; r < size; ++r) {
      if (r == col) continue;
      const Rational f = A[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)];
      if (f.is_zero()) continue;
      for (int c = col; c <= size; ++c)
        A[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] -= f * A[static_cast<std::size_t>(col)][static_cast<std::size_t>(c)];
    }
  }
  RecurrenceCoeffs rc;
  rc.order = n;
  for (int m = 0; m < n; ++m) rc.a.push_back(A[static_cast<std::size_t>(m)][static_cast<std::size_t>(size)]);
  return rc;
}

inline const std::vector<RecurrenceCoeffs>& known_low_orders() {
  static const std::vector<RecurrenceCoeffs> known{
      {1, {1}},
      {2, {-1, 2}},
      {3, {1, 3, -3}},
  };
  return known;
}

}  // namespace detail

// Coefficients for order n, validated by expanding the assembled correction
// symbolically and comparing with the Leibniz form.
inline RecurrenceCoeffs recurrence_coeffs(int n, int max_order = kDefaultMaxCorrectionOrder) {
  require(n >= 1, "correction order must be >= 1");
  require(n <= max_order, "correction order " + std::to_string(n) + " exceeds the supported maximum " +
                              std::to_string(max_order));
  std::vector<RecurrenceCoeffs> all;
  for (int j = 1; j <= n; ++j) {
    RecurrenceCoeffs rc = detail::solve_recurrence(j);
    const auto& known = detail::known_low_orders();
    if (j <= static_cast<int>(known.size()) && rc.a != known[static_cast<std::size_t>(j - 1)].a)
      throw NumericError("correction recurrence of order " + std::to_string(j) + " disagrees with the reference coefficients");
    all.push_back(std::move(rc));
    if (detail::assemble(all, j) != detail::leibniz_expansion(j))
      throw NumericError("correction recurrence of order " + std::to_string(j) + " failed Leibniz validation");
  }
  return all.back();
}

enum class SignalRole { state, input };

// Correction spectra x^{1}..x^{j_max} of one signal on a common bin list.
struct CorrectionSet {
  SignalRole source = SignalRole::state;
  std::vector<Spectrum> spectra;  // spectra[j-1] = x^{j}
  Spectrum zero;                  // order 0, identically zero

  int j_max() const { return static_cast<int>(spectra.size()); }
  const Spectrum& order(int j) const {
    if (j == 0) return zero;
    require(j >= 1 && j <= j_max(), "correction of order " + std::to_string(j) + " not available");
    return spectra[static_cast<std::size_t>(j - 1)];
  }
};

inline CorrectionSet correction_spectra(const Signal& signal, const WindowTable& table, int j_max, const BinList& bins,
                                        Endpoint endpoint = Endpoint::as_sampled,
                                        SignalRole role = SignalRole::state,
                                        int max_order = kDefaultMaxCorrectionOrder) {
  require(j_max >= 0, "j_max must be non-negative");
  require(j_max <= table.max_deriv, "window table holds derivatives up to " + std::to_string(table.max_deriv) +
                                        ", corrections up to " + std::to_string(j_max) + " requested");
  CorrectionSet set;
  set.source = role;
  set.zero = Spectrum::zeros(signal.T, bins, signal.channels());
  for (int j = 1; j <= j_max; ++j) {
    const RecurrenceCoeffs rc = recurrence_coeffs(j, max_order);
    Spectrum xj = fourier_coeffs(apply_window(signal, table, j), bins, endpoint);
    xj.coeffs *= rc.coefficient(0);
    for (int m = 1; m < j; ++m) {
      const Spectrum& lower = set.spectra[static_cast<std::size_t>(j - m - 1)];
      for (std::size_t i = 0; i < bins.size(); ++i)
        xj.coeffs.col(static_cast<Eigen::Index>(i)) +=
            rc.coefficient(m) * std::pow(derivative_multiplier(lower.frequency(i)), m) *
            lower.coeffs.col(static_cast<Eigen::Index>(i));
    }
    set.spectra.push_back(std::move(xj));
  }
  return set;
}

// Weights of the m-th derivative at x0 over arbitrary nodes (Fornberg 1988).
inline std::vector<double> finite_difference_weights(double x0, const std::vector<double>& nodes, int m) {
  const int n = static_cast<int>(nodes.size()) - 1;
  require(m >= 0 && m <= n, "stencil too small for the requested derivative");
  std::vector<std::vector<double>> c(static_cast<std::size_t>(n) + 1, std::vector<double>(static_cast<std::size_t>(m) + 1, 0.0));
  double c1 = 1.0, c4 = nodes[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[static_cast<std::size_t>(i)] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = nodes[static_cast<std::size_t>(i)] - nodes[static_cast<std::size_t>(j)];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] =
              c1 * (k * c[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(k - 1)] -
                    c5 * c[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(k)]) / c2;
        c[static_cast<std::size_t>(i)][0] = -c1 * c5 * c[static_cast<std::size_t>(i - 1)][0] / c2;
      }
      for (int k = mn; k >= 1; --k)
        c[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] =
            (c4 * c[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] -
             k * c[static_cast<std::size_t>(j)][static_cast<std::size_t>(k - 1)]) / c3;
      c[static_cast<std::size_t>(j)][0] = c4 * c[static_cast<std::size_t>(j)][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) w[static_cast<std::size_t>(i)] = c[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)];
  return w;
}

struct OracleOptions {
  int half_width = 8;        // stencil of 2 * half_width + 1 points
  std::size_t fd_stride = 1; // stencil spacing in fine samples
};

// Brute-force x^{j}(t) = sum_k C(j,k) w^{(k)} x^{(j-k)} on the coarse grid of
// `table`, with x's derivatives from finite differences on a record sampled
// `oversample` times finer. Stencils are shifted inwards near the ends; the
// fine end sample is used when present.
inline Signal correction_time_oracle(const Signal& fine, const WindowTable& table, int j, std::size_t oversample,
                                     OracleOptions options = {}) {
  require(oversample >= 4, "time-domain oracle needs at least 4x oversampling");
  require(j >= 1 && j <= table.max_deriv, "oracle order outside the window table");
  require(table.N() * oversample == fine.N(), "fine record length does not match table N x oversample");
  require(std::abs(table.T() - fine.T) <= 1e-12 * fine.T, "fine record and window table have different lengths");
  const auto n_fine = static_cast<long>(fine.N());
  const long last = fine.end ? n_fine : n_fine - 1;
  const long stride = static_cast<long>(options.fd_stride);
  const long hw = options.half_width;
  require(2 * hw * stride <= last, "finite-difference stencil longer than the record");
  auto sample = [&](long idx) -> Eigen::VectorXcd {
    return idx == n_fine ? Eigen::VectorXcd(*fine.end) : Eigen::VectorXcd(fine.values.col(idx));
  };

  const std::size_t n = table.N();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(fine.values.rows(), static_cast<Eigen::Index>(n));
  const double h = fine.T / static_cast<double>(n_fine);
  for (std::size_t i = 0; i < n; ++i) {
    const long centre = static_cast<long>(i * oversample);
    long start = centre - hw * stride;
    start = std::clamp(start, 0L, last - 2 * hw * stride);
    std::vector<double> nodes;
    std::vector<long> idx;
    for (long s = 0; s <= 2 * hw; ++s) {
      idx.push_back(start + s * stride);
      nodes.push_back(static_cast<double>(start + s * stride - centre) * h);
    }
    for (int k = 1; k <= j; ++k) {
      const int d = j - k;
      Eigen::VectorXcd deriv = Eigen::VectorXcd::Zero(fine.values.rows());
      if (d == 0) {
        deriv = sample(centre);
      } else {
        const auto w = finite_difference_weights(0.0, nodes, d);
        for (std::size_t s = 0; s < idx.size(); ++s) deriv += w[s] * sample(idx[s]);
      }
      out.col(static_cast<Eigen::Index>(i)) +=
          detail::binomial(j, k).to_double() * table.samples(k, static_cast<Eigen::Index>(i)) * deriv;
    }
  }
  return Signal(table.T(), std::move(out));
}

}  // namespace fdid
