#pragma once

// Window families, their analytic time derivatives and spectral diagnostics.
//
//   rectangular  w = 1                                   (no derivatives)
//   sin_n        w = sin^n(pi t / T)                      C^{n-1} at the ends
//   cinf_n       w = exp(-n T^2 / (t (T - t)) + 4 n)      C^inf, w(T/2) = 1
//   poly_ref     w = 1 - (t / T - 1/2)^n                  reference shape
//
// All windows vanish outside (0, T).

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fdid/error.hpp"
#include "fdid/fft.hpp"
#include "fdid/quadrature.hpp"
#include "fdid/signal.hpp"

namespace fdid {

enum class WindowFamily { rectangular, sin_n, cinf_n, poly_ref };

struct WindowSpec {
  WindowFamily family = WindowFamily::cinf_n;
  double order = 1.0;
  double length = 1.0;

  void validate() const {
    require(length > 0.0 && std::isfinite(length), "window length must be positive");
    switch (family) {
      case WindowFamily::rectangular:
        break;
      case WindowFamily::sin_n:
      case WindowFamily::poly_ref:
        require(order >= 1.0 && order == std::floor(order) && order <= 64.0,
                "sin and poly windows need an integer order in [1, 64]");
        break;
      case WindowFamily::cinf_n:
        require(order > 0.0 && std::isfinite(order), "cinf window order must be positive");
        break;
    }
  }

  int integer_order() const { return static_cast<int>(order); }

  std::string name() const {
    auto num = [](double v) {
      std::string s = std::to_string(v);
      s.erase(s.find_last_not_of('0') + 1);
      if (!s.empty() && s.back() == '.') s.pop_back();
      return s;
    };
    switch (family) {
      case WindowFamily::rectangular: return "rect";
      case WindowFamily::sin_n: return "sin:" + num(order);
      case WindowFamily::cinf_n: return "cinf:" + num(order);
      case WindowFamily::poly_ref: return "poly:" + num(order);
    }
    return "?";
  }

  // "rect", "sin:2", "cinf:0.25", "poly:4"
  static WindowSpec parse(std::string_view text, double length = 1.0) {
    WindowSpec spec;
    spec.length = length;
    const auto colon = text.find(':');
    const std::string family(text.substr(0, colon));
    if (family == "rect" || family == "rectangular") {
      spec.family = WindowFamily::rectangular;
      spec.order = 1.0;
    } else {
      if (family == "sin" || family == "sin_n")
        spec.family = WindowFamily::sin_n;
      else if (family == "cinf" || family == "cinf_n")
        spec.family = WindowFamily::cinf_n;
      else if (family == "poly" || family == "poly_ref")
        spec.family = WindowFamily::poly_ref;
      else
        throw ConfigError("unknown window family '" + family + "'");
      require(colon != std::string_view::npos, "window '" + family + "' needs an order, e.g. " + family + ":2");
      const std::string order(text.substr(colon + 1));
      std::size_t used = 0;
      try {
        spec.order = std::stod(order, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      require(used == order.size() && !order.empty(), "bad window order '" + order + "'");
    }
    spec.validate();
    return spec;
  }

  friend bool operator==(const WindowSpec&, const WindowSpec&) = default;
};

namespace detail {

// d^k/ds^k sin^n(pi s) as a sum of c * S^a * C^b, S = sin(pi s), C = cos(pi s).
struct TrigTerm {
  long double coef;
  int a;
  int b;
};

inline std::vector<TrigTerm> sin_power_derivative(int n, int k) {
  std::map<std::pair<int, int>, long double> terms{{{n, 0}, 1.0L}};
  for (int d = 0; d < k; ++d) {
    std::map<std::pair<int, int>, long double> next;
    for (const auto& [ab, c] : terms) {
      const auto [a, b] = ab;
      if (a > 0) next[{a - 1, b + 1}] += c * a * std::numbers::pi_v<long double>;
      if (b > 0) next[{a + 1, b - 1}] -= c * b * std::numbers::pi_v<long double>;
    }
    terms = std::move(next);
  }
  std::vector<TrigTerm> out;
  for (const auto& [ab, c] : terms)
    if (c != 0.0L) out.push_back({c, ab.first, ab.second});
  return out;
}

// P_k(s) with d^k/ds^k exp(-n/q) = P_k(s) / q^{2k} * exp(-n/q), q = s(1-s).
// Ascending coefficients.
template <std::floating_point Real>
std::vector<Real> cinf_polynomial(Real n, int k) {
  using Poly = std::vector<Real>;
  auto mul = [](const Poly& x, const Poly& y) {
    Poly z(x.size() + y.size() - 1, Real(0));
    for (std::size_t i = 0; i < x.size(); ++i)
      for (std::size_t j = 0; j < y.size(); ++j) z[i + j] += x[i] * y[j];
    return z;
  };
  auto add = [](Poly x, const Poly& y, Real scale) {
    if (x.size() < y.size()) x.resize(y.size(), Real(0));
    for (std::size_t i = 0; i < y.size(); ++i) x[i] += scale * y[i];
    return x;
  };
  auto deriv = [](const Poly& x) {
    if (x.size() <= 1) return Poly{Real(0)};
    Poly d(x.size() - 1);
    for (std::size_t i = 1; i < x.size(); ++i) d[i - 1] = static_cast<Real>(i) * x[i];
    return d;
  };
  const Poly q{Real(0), Real(1), Real(-1)};
  const Poly dq{Real(1), Real(-2)};
  const Poly q2 = mul(q, q);
  const Poly qdq = mul(q, dq);
  Poly p{Real(1)};
  for (int j = 0; j < k; ++j) {
    Poly next = mul(deriv(p), q2);
    next = add(next, mul(qdq, p), Real(-2 * j));
    next = add(next, mul(dq, p), n);
    p = std::move(next);
  }
  return p;
}

template <std::floating_point Real>
Real horner(const std::vector<Real>& c, Real s) {
  Real acc(0);
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * s + *it;
  return acc;
}

// Evaluator with the per-(family, k) setup hoisted out of the sample loop.
template <std::floating_point Real>
class WindowEvaluator {
 public:
  WindowEvaluator(const WindowSpec& spec, int k) : spec_(spec), k_(k) {
    spec.validate();
    require(k >= 0, "derivative order must be non-negative");
    scale_ = std::pow(static_cast<Real>(spec.length), static_cast<Real>(-k));
    switch (spec.family) {
      case WindowFamily::rectangular:
        require(k == 0, "rectangular window has no pointwise derivatives (order " + std::to_string(k) + ")");
        break;
      case WindowFamily::sin_n:
        trig_ = sin_power_derivative(spec.integer_order(), k);
        break;
      case WindowFamily::cinf_n:
        poly_ = cinf_polynomial<Real>(static_cast<Real>(spec.order), k);
        break;
      case WindowFamily::poly_ref:
        break;
    }
  }

  Real operator()(Real t) const {
    const Real T = static_cast<Real>(spec_.length);
    if (!(t >= Real(0) && t <= T)) return Real(0);
    const Real s = t / T;
    switch (spec_.family) {
      case WindowFamily::rectangular:
        return Real(1);
      case WindowFamily::sin_n: {
        // Reflect so the argument of sin/cos stays in [0, pi/2]: exact zeros
        // at both ends and symmetric rounding.
        const Real pi = std::numbers::pi_v<Real>;
        const bool upper = s > Real(0.5);
        const Real r = upper ? Real(1) - s : s;
        const Real S = std::sin(pi * r);
        const Real C = upper ? -std::cos(pi * r) : std::cos(pi * r);
        Real acc(0);
        for (const auto& term : trig_)
          acc += static_cast<Real>(term.coef) * ipow(S, term.a) * ipow(C, term.b);
        return acc * scale_;
      }
      case WindowFamily::cinf_n: {
        if (s <= Real(0) || s >= Real(1)) return Real(0);
        const Real n = static_cast<Real>(spec_.order);
        const Real q = s * (Real(1) - s);
        // exp(-n/q + 4n) / q^{2k}, combined in the exponent so the endpoint
        // limit is 0 rather than inf * 0.
        const Real e = -n / q + Real(4) * n - Real(2 * k_) * std::log(q);
        return std::exp(e) * horner(poly_, s) * scale_;
      }
      case WindowFamily::poly_ref: {
        const int n = spec_.integer_order();
        if (k_ > n) return Real(0);
        Real falling(1);
        for (int i = 0; i < k_; ++i) falling *= static_cast<Real>(n - i);
        const Real v = -falling * ipow(s - Real(0.5), n - k_);
        return (k_ == 0 ? Real(1) + v : v) * scale_;
      }
    }
    return Real(0);
  }

 private:
  static Real ipow(Real x, int p) {
    Real r(1);
    for (int i = 0; i < p; ++i) r *= x;
    return r;
  }

  WindowSpec spec_;
  int k_;
  Real scale_ = Real(1);
  std::vector<TrigTerm> trig_;
  std::vector<Real> poly_;
};

}  // namespace detail

// d^k w / dt^k at t; zero outside [0, T].
template <std::floating_point Real = double>
Real window_value(const WindowSpec& spec, int k, Real t) {
  return detail::WindowEvaluator<Real>(spec, k)(t);
}

// Rows 0..max_deriv of window derivatives sampled at t_j = j T / N, plus the
// values at t = T (for endpoint averaging).
struct WindowTable {
  WindowSpec spec;
  int max_deriv = 0;
  Eigen::MatrixXd samples;     // (max_deriv + 1) x N
  Eigen::VectorXd end_values;  // max_deriv + 1

  std::size_t N() const { return static_cast<std::size_t>(samples.cols()); }
  double T() const { return spec.length; }
  Eigen::RowVectorXd row(int k) const {
    require(k >= 0 && k <= max_deriv, "window table has no derivative row " + std::to_string(k));
    return samples.row(k);
  }
};

inline WindowTable window_table(const WindowSpec& spec, std::size_t N, int max_deriv) {
  require(N >= 2, "window table needs N >= 2");
  require(max_deriv >= 0, "max_deriv must be non-negative");
  WindowTable table;
  table.spec = spec;
  table.max_deriv = max_deriv;
  table.samples.resize(max_deriv + 1, static_cast<Eigen::Index>(N));
  table.end_values.resize(max_deriv + 1);
  for (int k = 0; k <= max_deriv; ++k) {
    // Long double evaluation, rounded once.
    const detail::WindowEvaluator<long double> w(spec, k);
    const long double T = spec.length;
    for (std::size_t j = 0; j < N; ++j)
      table.samples(k, static_cast<Eigen::Index>(j)) =
          static_cast<double>(w(T * static_cast<long double>(j) / static_cast<long double>(N)));
    table.end_values(k) = static_cast<double>(w(T));
  }
  return table;
}

namespace detail {

// (exp(i b) - 1) / (i b), stable at b -> 0.
template <std::floating_point Real>
std::complex<Real> phase_integral(Real b) {
  if (std::abs(b) < Real(1e-6)) return {Real(1) - b * b / Real(6), b / Real(2) - b * b * b / Real(24)};
  const Real h = b / Real(2);
  return std::polar(std::sin(h) / h, h);
}

// int_0^T w^{(k)}(t) exp(-2 pi i f t) dt for sin_n via the exponential sum
// sin^n(pi s) = sum_m C(n, m) (-1)^m (2i)^{-n} exp(i pi (n - 2m) s).
inline std::complex<long double> sin_transform(const WindowSpec& spec, int k, long double f) {
  const int n = spec.integer_order();
  const long double T = spec.length;
  const long double pi = std::numbers::pi_v<long double>;
  const std::complex<long double> two_i(0.0L, 2.0L);
  std::complex<long double> norm = 1.0L;
  for (int i = 0; i < n; ++i) norm /= two_i;
  std::complex<long double> total = 0.0L;
  long double binom = 1.0L;
  for (int m = 0; m <= n; ++m) {
    const long double alpha = pi * static_cast<long double>(n - 2 * m) / T;
    std::complex<long double> c = norm * binom * ((m % 2) ? -1.0L : 1.0L);
    for (int d = 0; d < k; ++d) c *= std::complex<long double>(0.0L, alpha);
    total += c * T * phase_integral<long double>((alpha - 2.0L * pi * f) * T);
    binom = binom * static_cast<long double>(n - m) / static_cast<long double>(m + 1);
  }
  return total;
}

// Transform of a polynomial-on-[0,T] window row (rect, poly_ref) by repeated
// integration by parts; Gauss-Legendre for small |omega T| where the series
// cancels badly.
inline std::complex<long double> poly_transform(const WindowSpec& spec, int k, long double f) {
  const long double T = spec.length;
  const long double omega = 2.0L * std::numbers::pi_v<long double> * f;
  if (std::abs(omega * T) < 4.0L) {
    static const GaussLegendreRule rule = gauss_legendre(48);
    const WindowEvaluator<long double> w(spec, k);
    std::complex<long double> acc = 0.0L;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const long double t = 0.5L * T * (1.0L + rule.nodes[i]);
      acc += static_cast<long double>(rule.weights[i]) * w(t) * std::polar(1.0L, -omega * t);
    }
    return 0.5L * T * acc;
  }
  const int degree = spec.family == WindowFamily::rectangular ? 0 : spec.integer_order();
  const std::complex<long double> iw(0.0L, omega);
  const std::complex<long double> end_phase = std::polar(1.0L, -omega * T);
  std::complex<long double> total = 0.0L;
  std::complex<long double> denom = iw;
  for (int m = k; m <= degree; ++m) {
    const WindowEvaluator<long double> w(spec, m);
    total += (w(0.0L) - w(T) * end_phase) / denom;
    denom *= iw;
  }
  return total;
}

}  // namespace detail

// Transform of w^{(k)} at one frequency by direct quadrature. Slow; meant as
// a cross-check and for the half-power width.
inline std::complex<double> window_transform_quadrature(const WindowSpec& spec, int k, double f,
                                                        std::size_t panels = 256) {
  const detail::WindowEvaluator<double> w(spec, k);
  const double omega = 2.0 * std::numbers::pi * f;
  const double re = integrate([&](double t) { return w(t) * std::cos(omega * t); }, 0.0, spec.length, panels);
  const double im = integrate([&](double t) { return -w(t) * std::sin(omega * t); }, 0.0, spec.length, panels);
  return {re, im};
}

// Samples per window used for the cinf spectra.
inline constexpr std::size_t kWindowSpectrumSamples = std::size_t{1} << 15;

// Transform of w^{(k)} on the grid f = j / (oversample T), j = 0 .. f_max * oversample * T.
// The returned Spectrum has T = oversample * T so that bin j sits at j / (oversample T).
// sin_n, rect and poly_ref are evaluated in closed form; cinf_n by an
// extended-precision zero-padded DFT with at least 2^15 samples per window.
inline Spectrum window_spectrum(const WindowSpec& spec, int k, int oversample, double f_max) {
  spec.validate();
  require(oversample >= 1, "oversample must be >= 1");
  require(f_max >= 0.0 && std::isfinite(f_max), "f_max must be non-negative");
  require(spec.family != WindowFamily::rectangular || k == 0,
          "rectangular window has no pointwise derivatives (order " + std::to_string(k) + ")");
  const double T = spec.length;
  const double pad_T = oversample * T;
  const auto n_bins = static_cast<std::size_t>(std::llround(f_max * pad_T)) + 1;
  BinList bins(n_bins);
  for (std::size_t j = 0; j < n_bins; ++j) bins[j] = static_cast<int>(j);
  Spectrum out = Spectrum::zeros(pad_T, std::move(bins), 1);

  switch (spec.family) {
    case WindowFamily::sin_n:
      for (std::size_t j = 0; j < n_bins; ++j)
        out.coeffs(0, static_cast<Eigen::Index>(j)) =
            std::complex<double>(detail::sin_transform(spec, k, static_cast<long double>(j) / pad_T));
      break;
    case WindowFamily::rectangular:
    case WindowFamily::poly_ref:
      for (std::size_t j = 0; j < n_bins; ++j)
        out.coeffs(0, static_cast<Eigen::Index>(j)) =
            std::complex<double>(detail::poly_transform(spec, k, static_cast<long double>(j) / pad_T));
      break;
    case WindowFamily::cinf_n: {
      require(std::has_single_bit(static_cast<unsigned>(oversample)), "cinf spectra need a power-of-two oversample");
      std::size_t m = kWindowSpectrumSamples;
      while (static_cast<double>(m) < 4.0 * f_max * T) m <<= 1;
      const std::size_t len = m * static_cast<std::size_t>(oversample);
      const detail::WindowEvaluator<long double> w(spec, k);
      std::vector<std::complex<long double>> buf(len, 0.0L);
      const long double lT = T;
      for (std::size_t i = 0; i < m; ++i)
        buf[i] = w(lT * static_cast<long double>(i) / static_cast<long double>(m));
      fft::radix2(buf, fft::Direction::forward);
      const long double h = lT / static_cast<long double>(m);
      for (std::size_t j = 0; j < n_bins; ++j)
        out.coeffs(0, static_cast<Eigen::Index>(j)) = std::complex<double>(h * buf[j]);
      break;
    }
  }
  return out;
}

struct FerrOptions {
  int oversample = 16;
  int search_max = 10000;  // in units of 1/T
};

// Smallest integer m (frequency m / T) such that the envelope
// sup_{f' >= m/T} |w_k^(f')| / |w_0^(0)| is below p; nullopt if none up to
// search_max.
inline std::optional<int> f_err(const WindowSpec& spec, int k, double p, FerrOptions options = {}) {
  require(p > 0.0 && p < 1.0, "f_err threshold p must lie in (0, 1)");
  require(k >= 0 && k <= 3, "f_err supports derivative orders 0..3");
  require(options.search_max >= 1, "f_err search bound must be positive");
  const double T = spec.length;
  const double area = std::abs(window_spectrum(spec, 0, 1, 0.0).coeffs(0, 0));
  const Spectrum spectrum = window_spectrum(spec, k, options.oversample, (options.search_max + 1) / T);
  const auto n = static_cast<Eigen::Index>(spectrum.size());
  std::vector<double> env(static_cast<std::size_t>(n));
  double running = 0.0;
  for (Eigen::Index j = n - 1; j >= 0; --j) {
    running = std::max(running, std::abs(spectrum.coeffs(0, j)) / area);
    env[static_cast<std::size_t>(j)] = running;
  }
  for (int m = 0; m <= options.search_max; ++m)
    if (env[static_cast<std::size_t>(m) * static_cast<std::size_t>(options.oversample)] < p) return m;
  return std::nullopt;
}

// rho_j = (int w(t) w(t - j T (1 - tau)) dt / int w^2 dt)^2
inline double overlap_correlation(const WindowSpec& spec, int j, double tau) {
  require(tau >= 0.0 && tau < 1.0, "overlap fraction must lie in [0, 1)");
  require(j >= 0, "lag index must be non-negative");
  const double T = spec.length;
  const double shift = j * T * (1.0 - tau);
  if (shift >= T) return 0.0;
  const detail::WindowEvaluator<double> w(spec, 0);
  const double energy = integrate([&](double t) { return w(t) * w(t); }, 0.0, T, 64);
  const double cross = integrate([&](double t) { return w(t) * w(t - shift); }, shift, T, 64);
  const double r = cross / energy;
  return r * r;
}

// Variance of a K-segment averaged power spectrum relative to one segment.
inline double overlap_variance(const WindowSpec& spec, double tau, std::size_t K) {
  require(K >= 1, "need at least one window");
  require(tau >= 0.0 && tau < 1.0, "overlap fraction must lie in [0, 1)");
  double sum = 1.0;
  const auto Kd = static_cast<double>(K);
  for (std::size_t j = 1; j < K; ++j) {
    const double rho = overlap_correlation(spec, static_cast<int>(j), tau);
    if (rho == 0.0) break;  // shifts only grow with j
    sum += 2.0 * (Kd - static_cast<double>(j)) / Kd * rho;
  }
  return sum / Kd;
}

// Number of windows of length T fitting in a record of length L at overlap tau.
inline std::size_t windows_in_record(double T, double L, double tau) {
  require(L >= T, "record must hold at least one window");
  return static_cast<std::size_t>(std::floor((L - T) / (T * (1.0 - tau)) + 1e-9)) + 1;
}

// Variance at overlap tau for a fixed record length L, relative to the
// non-overlapping arrangement of the same record.
inline double normalized_overlap_variance(const WindowSpec& spec, double tau, double L) {
  const double T = spec.length;
  return overlap_variance(spec, tau, windows_in_record(T, L, tau)) /
         overlap_variance(spec, 0.0, windows_in_record(T, L, 0.0));
}

// Full width of the main lobe where |w^(f)|^2 >= |w^(0)|^2 / 2.
inline double half_power_width(const WindowSpec& spec) {
  const double peak = std::norm(window_transform_quadrature(spec, 0, 0.0));
  auto excess = [&](double f) { return std::norm(window_transform_quadrature(spec, 0, f)) - 0.5 * peak; };
  const double step = 0.01 / spec.length;
  double lo = 0.0, hi = step;
  while (excess(hi) > 0.0) {
    lo = hi;
    hi += step;
    require(hi < 100.0 / spec.length, "half-power point not found");
  }
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (excess(mid) > 0.0 ? lo : hi) = mid;
  }
  return 2.0 * 0.5 * (lo + hi);
}

}  // namespace fdid
