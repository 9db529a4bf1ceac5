#pragma once

// Synthetic experiments: random systems, multisine forcing, RK4 integration,
// decimation and measurement noise.

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "fdid/error.hpp"
#include "fdid/model.hpp"
#include "fdid/random.hpp"
#include "fdid/signal.hpp"

namespace fdid {

// u(t) = sum_j a_j exp(2 pi i f_j t), a_j in C^{n_u}.
struct ForcingSpec {
  std::vector<double> frequencies;
  Eigen::MatrixXcd amplitudes;  // n_u x n_f
  std::uint64_t seed = 0;

  std::size_t n_f() const { return frequencies.size(); }
  std::size_t n_u() const { return static_cast<std::size_t>(amplitudes.rows()); }

  void validate() const {
    require(!frequencies.empty(), "forcing needs at least one tone");
    require(amplitudes.cols() == static_cast<Eigen::Index>(frequencies.size()), "one amplitude column per tone");
    for (std::size_t j = 1; j < frequencies.size(); ++j)
      require(frequencies[j] > frequencies[j - 1], "forcing frequencies must be strictly increasing");
  }

  // k-th time derivative of u at t.
  Eigen::VectorXcd evaluate(double t, int k = 0) const {
    Eigen::VectorXcd u = Eigen::VectorXcd::Zero(amplitudes.rows());
    for (std::size_t j = 0; j < frequencies.size(); ++j) {
      const double omega = 2.0 * std::numbers::pi * frequencies[j];
      const std::complex<double> factor = std::pow(std::complex<double>(0.0, omega), k) * std::polar(1.0, omega * t);
      u += factor * amplitudes.col(static_cast<Eigen::Index>(j));
    }
    return u;
  }
};

// n_f tones uniformly spaced on [f_min, f_max] (both included), complex
// normal amplitudes drawn from the stream `seed`.
inline ForcingSpec multisine(std::size_t n_f, double f_min, double f_max, std::size_t n_u, std::uint64_t seed) {
  require(n_f >= 1, "multisine needs at least one tone");
  require(n_u >= 1, "multisine needs at least one channel");
  require(n_f == 1 ? f_max == f_min : f_max > f_min, "multisine needs f_max > f_min (or equal for one tone)");
  ForcingSpec spec;
  spec.seed = seed;
  spec.frequencies.resize(n_f);
  for (std::size_t j = 0; j < n_f; ++j)
    spec.frequencies[j] = n_f == 1 ? f_min : f_min + (f_max - f_min) * static_cast<double>(j) / static_cast<double>(n_f - 1);
  spec.amplitudes.resize(static_cast<Eigen::Index>(n_u), static_cast<Eigen::Index>(n_f));
  CounterRng rng(seed);
  for (Eigen::Index j = 0; j < spec.amplitudes.cols(); ++j)
    for (Eigen::Index c = 0; c < spec.amplitudes.rows(); ++c) spec.amplitudes(c, j) = rng.complex_normal();
  return spec;
}

// First-order form z' = C z + g(t), z = [x, x', .., x^{(n_a-1)}].
inline Eigen::MatrixXd companion_matrix(const ModelParams& theta) {
  theta.validate();
  const int n = theta.structure.n_x, na = theta.structure.n_a;
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n * na, n * na);
  for (int j = 0; j + 1 < na; ++j) C.block(j * n, (j + 1) * n, n, n).setIdentity();
  const Eigen::MatrixXd lead_inv = theta.A[static_cast<std::size_t>(na)].inverse();
  for (int j = 0; j < na; ++j) C.block((na - 1) * n, j * n, n, n) = -lead_inv * theta.A[static_cast<std::size_t>(j)];
  return C;
}

struct SystemDraw {
  ModelParams theta;
  int attempts = 1;  // draws consumed, rejections included
};

inline constexpr double kMinEigenRealPart = -25.0;
inline constexpr double kMaxEigenRealPart = 5.0;

// Standard normal A_0..A_{n_a-1}, B_0..B_{n_b}; A_{n_a} = I. Redrawn until
// every companion eigenvalue has real part in [-25, 5].
inline SystemDraw draw_system(const ModelStructure& structure, std::uint64_t seed, int max_attempts = 10000) {
  structure.validate();
  CounterRng rng(seed);
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    ModelParams p = ModelParams::zeros(structure);
    for (int j = 0; j < structure.n_a; ++j)
      for (Eigen::Index r = 0; r < structure.n_x; ++r)
        for (Eigen::Index c = 0; c < structure.n_x; ++c) p.A[static_cast<std::size_t>(j)](r, c) = rng.normal();
    for (auto& b : p.B)
      for (Eigen::Index r = 0; r < b.rows(); ++r)
        for (Eigen::Index c = 0; c < b.cols(); ++c) b(r, c) = rng.normal();
    const Eigen::VectorXcd eig = companion_matrix(p).eigenvalues();
    const double lo = eig.real().minCoeff(), hi = eig.real().maxCoeff();
    if (lo >= kMinEigenRealPart && hi <= kMaxEigenRealPart) return {std::move(p), attempt};
  }
  throw NumericError("no admissible system within " + std::to_string(max_attempts) + " draws");
}

inline ModelParams random_system(const ModelStructure& structure, std::uint64_t seed) {
  return draw_system(structure, seed).theta;
}

struct SimConfig {
  ModelStructure structure;
  double dt = 1.0 / 28800.0;
  double T = 1.0;
  std::uint64_t seed = 1;
  std::optional<Eigen::VectorXcd> x0;  // initial [x, x', ..]; drawn from the seed when absent
  double sigma = 0.0;

  std::size_t steps() const {
    const double n = T / dt;
    const double r = std::round(n);
    require(dt > 0.0 && T > 0.0, "dt and T must be positive");
    require(std::abs(n - r) <= 1e-9 * n, "dt must divide T");
    return static_cast<std::size_t>(r);
  }
};

// Classical RK4 of the companion system on the fine grid t_i = i dt,
// i = 0..T/dt; the sample at t = T is kept as the end sample.
inline Signal integrate_rk4(const ModelParams& theta, const ForcingSpec& forcing, const SimConfig& config,
                            const Eigen::VectorXcd& z0) {
  theta.validate();
  forcing.validate();
  const auto& s = theta.structure;
  require(static_cast<int>(forcing.n_u()) == s.n_u, "forcing channel count differs from n_u");
  const int n = s.n_x, dim = s.n_x * s.n_a;
  require(z0.size() == dim, "initial state must have n_x * n_a entries");
  const std::size_t steps = config.steps();
  const double dt = config.dt;
  const Eigen::MatrixXcd C = companion_matrix(theta).cast<std::complex<double>>();
  const Eigen::MatrixXd lead_inv = theta.A[static_cast<std::size_t>(s.n_a)].inverse();

  // Input term A_{n_a}^{-1} sum_k B_k u^{(k)} on the half-step grid.
  auto input = [&](double t) {
    Eigen::VectorXcd g = Eigen::VectorXcd::Zero(n);
    for (int k = 0; k <= s.n_b; ++k) g += theta.B[static_cast<std::size_t>(k)] * forcing.evaluate(t, k);
    return Eigen::VectorXcd(lead_inv * g);
  };
  std::vector<Eigen::VectorXcd> g(2 * steps + 1);
  for (std::size_t i = 0; i <= 2 * steps; ++i) g[i] = input(0.5 * dt * static_cast<double>(i));

  auto rhs = [&](const Eigen::VectorXcd& z, const Eigen::VectorXcd& gi) {
    Eigen::VectorXcd dz = C * z;
    dz.tail(n) += gi;
    return dz;
  };

  Eigen::MatrixXcd x(n, static_cast<Eigen::Index>(steps));
  Eigen::VectorXcd z = z0;
  for (std::size_t i = 0; i < steps; ++i) {
    x.col(static_cast<Eigen::Index>(i)) = z.head(n);
    const Eigen::VectorXcd k1 = rhs(z, g[2 * i]);
    const Eigen::VectorXcd k2 = rhs(z + 0.5 * dt * k1, g[2 * i + 1]);
    const Eigen::VectorXcd k3 = rhs(z + 0.5 * dt * k2, g[2 * i + 1]);
    const Eigen::VectorXcd k4 = rhs(z + dt * k3, g[2 * i + 2]);
    z += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!z.allFinite())
      throw NumericError("integration blew up at t = " + std::to_string(dt * static_cast<double>(i + 1)));
  }
  return Signal(config.T, std::move(x), Eigen::VectorXcd(z.head(n)));
}

// Forcing sampled on the same fine grid (end sample included).
inline Signal sample_forcing(const ForcingSpec& forcing, double T, std::size_t n) {
  Eigen::MatrixXcd u(static_cast<Eigen::Index>(forcing.n_u()), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    u.col(static_cast<Eigen::Index>(i)) = forcing.evaluate(T * static_cast<double>(i) / static_cast<double>(n));
  return Signal(T, std::move(u), forcing.evaluate(T));
}

// Keep every stride-th sample, stride = N / target_N.
inline Signal resample(const Signal& signal, std::size_t target_n) {
  require(target_n >= 2, "target sample count must be >= 2");
  require(signal.N() % target_n == 0, "cannot decimate " + std::to_string(signal.N()) + " samples to " +
                                          std::to_string(target_n) + " by an integer stride");
  const std::size_t stride = signal.N() / target_n;
  Eigen::MatrixXcd v(signal.values.rows(), static_cast<Eigen::Index>(target_n));
  for (std::size_t j = 0; j < target_n; ++j) v.col(static_cast<Eigen::Index>(j)) = signal.values.col(static_cast<Eigen::Index>(j * stride));
  return Signal(signal.T, std::move(v), signal.end);
}

// Independent N(0, sigma^2) noise on real and imaginary parts of every sample.
inline Signal add_noise(const Signal& signal, double sigma, std::uint64_t seed) {
  require(sigma >= 0.0 && std::isfinite(sigma), "noise level must be non-negative");
  if (sigma == 0.0) return signal;
  CounterRng rng(seed);
  Signal out = signal;
  for (Eigen::Index j = 0; j < out.values.cols(); ++j)
    for (Eigen::Index c = 0; c < out.values.rows(); ++c) out.values(c, j) += sigma * rng.complex_normal();
  if (out.end)
    for (Eigen::Index c = 0; c < out.end->size(); ++c) (*out.end)(c) += sigma * rng.complex_normal();
  return out;
}

// Full description of one synthetic data set.
struct Experiment {
  SimConfig config;
  std::size_t n_f = 85;
  double f_min = 1.0;
  double f_max = 20.0 * std::numbers::sqrt2;
};

// n_x = n_u = 5, n_a = 1, n_b = 0, 85 tones on [1, 20 sqrt 2] Hz, T = 1 s,
// dt = 1/28800 s.
inline Experiment paper_preset() {
  Experiment e;
  e.config.structure = {5, 5, 1, 0};
  e.config.dt = 1.0 / 28800.0;
  e.config.T = 1.0;
  return e;
}

struct Simulation {
  ModelParams theta;
  int system_attempts = 1;
  ForcingSpec forcing;
  Eigen::VectorXcd z0;
  Signal x;  // noiseless, fine grid
  Signal u;
};

// System, forcing and initial state from sub-seeds "system", "forcing", "x0"
// of config.seed; noise is not applied here (see observed_records).
inline Simulation simulate(const Experiment& e) {
  const auto& cfg = e.config;
  Simulation sim;
  const SystemDraw draw = draw_system(cfg.structure, derive_seed(cfg.seed, "system"));
  sim.theta = draw.theta;
  sim.system_attempts = draw.attempts;
  sim.forcing = multisine(e.n_f, e.f_min, e.f_max, static_cast<std::size_t>(cfg.structure.n_u), derive_seed(cfg.seed, "forcing"));
  const int dim = cfg.structure.n_x * cfg.structure.n_a;
  if (cfg.x0) {
    sim.z0 = *cfg.x0;
  } else {
    CounterRng rng(derive_seed(cfg.seed, "x0"));
    sim.z0.resize(dim);
    for (int i = 0; i < dim; ++i) sim.z0(i) = rng.normal();
  }
  sim.x = integrate_rk4(sim.theta, sim.forcing, cfg, sim.z0);
  sim.u = sample_forcing(sim.forcing, cfg.T, cfg.steps());
  return sim;
}

// Records at sampling rate fs with noise from sub-seeds "noise-x"/"noise-u"
// of noise_seed.
inline std::pair<Signal, Signal> observed_records(const Simulation& sim, double fs, double sigma, std::uint64_t noise_seed) {
  const double n_real = fs * sim.x.T;
  const auto n = static_cast<std::size_t>(std::llround(n_real));
  require(std::abs(n_real - static_cast<double>(n)) <= 1e-9 * n_real, "f_s * T must be an integer sample count");
  Signal x = resample(sim.x, n), u = resample(sim.u, n);
  return {add_noise(x, sigma, derive_seed(noise_seed, "noise-x")), add_noise(u, sigma, derive_seed(noise_seed, "noise-u"))};
}

}  // namespace fdid
