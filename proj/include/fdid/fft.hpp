#pragma once

// Discrete Fourier transforms.
//
// forward():  X_k = sum_j x_j exp(-2 pi i j k / N)
// inverse():  x_j = sum_k X_k exp(+2 pi i j k / N)   (no 1/N factor)
//
// Double precision goes through FFTW (any length). Planning in FFTW is not
// thread safe, so plan creation and destruction are serialized; execution on
// private buffers is. radix2() is a plain iterative transform for the
// extended-precision window diagnostics, where lengths are powers of two.

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <mutex>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <fftw3.h>

#include "fdid/error.hpp"

namespace fdid::fft {

namespace detail {
inline std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace detail

enum class Direction { forward, inverse };

// One FFTW plan with its own aligned buffers; reusable for many transforms of
// the same length and direction.
class Plan {
 public:
  Plan(std::size_t n, Direction direction) : n_(n) {
    require(n >= 1, "FFT length must be positive");
    in_ = fftw_alloc_complex(n);
    out_ = fftw_alloc_complex(n);
    std::lock_guard lock(detail::planner_mutex());
    plan_ = fftw_plan_dft_1d(static_cast<int>(n), in_, out_,
                             direction == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD,
                             FFTW_ESTIMATE);
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
  ~Plan() {
    {
      std::lock_guard lock(detail::planner_mutex());
      fftw_destroy_plan(plan_);
    }
    fftw_free(in_);
    fftw_free(out_);
  }

  std::size_t size() const { return n_; }

  void execute(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) {
    require(in.size() == n_ && out.size() == n_, "FFT buffer length mismatch");
    auto* src = reinterpret_cast<std::complex<double>*>(in_);
    std::copy(in.begin(), in.end(), src);
    fftw_execute(plan_);
    auto* dst = reinterpret_cast<const std::complex<double>*>(out_);
    std::copy(dst, dst + n_, out.begin());
  }

 private:
  std::size_t n_;
  fftw_complex* in_ = nullptr;
  fftw_complex* out_ = nullptr;
  fftw_plan plan_ = nullptr;
};

inline Eigen::VectorXcd transform(const Eigen::VectorXcd& x, Direction direction) {
  Plan plan(static_cast<std::size_t>(x.size()), direction);
  Eigen::VectorXcd y(x.size());
  plan.execute({x.data(), static_cast<std::size_t>(x.size())},
               {y.data(), static_cast<std::size_t>(y.size())});
  return y;
}

inline Eigen::VectorXcd forward(const Eigen::VectorXcd& x) { return transform(x, Direction::forward); }
inline Eigen::VectorXcd inverse(const Eigen::VectorXcd& x) { return transform(x, Direction::inverse); }

// Transform every row of a (channels x N) matrix.
inline Eigen::MatrixXcd transform_rows(const Eigen::MatrixXcd& rows, Direction direction) {
  const auto n = static_cast<std::size_t>(rows.cols());
  Plan plan(n, direction);
  Eigen::MatrixXcd out(rows.rows(), rows.cols());
  std::vector<std::complex<double>> in_row(n), out_row(n);
  for (Eigen::Index c = 0; c < rows.rows(); ++c) {
    for (std::size_t j = 0; j < n; ++j) in_row[j] = rows(c, static_cast<Eigen::Index>(j));
    plan.execute(in_row, out_row);
    for (std::size_t j = 0; j < n; ++j) out(c, static_cast<Eigen::Index>(j)) = out_row[j];
  }
  return out;
}

// In-place iterative radix-2 transform; a.size() must be a power of two.
template <std::floating_point Real>
void radix2(std::vector<std::complex<Real>>& a, Direction direction) {
  const std::size_t n = a.size();
  require(n >= 1 && std::has_single_bit(n), "radix-2 FFT length must be a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  const Real sign = direction == Direction::forward ? Real(-1) : Real(1);
  const Real two_pi = Real(2) * std::numbers::pi_v<Real>;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    // Twiddles evaluated directly (not by repeated multiplication) to keep the
    // error at a few ulps for long transforms.
    std::vector<std::complex<Real>> twiddle(half);
    for (std::size_t k = 0; k < half; ++k) {
      const Real angle = sign * two_pi * static_cast<Real>(k) / static_cast<Real>(len);
      twiddle[k] = {std::cos(angle), std::sin(angle)};
    }
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const auto u = a[start + k];
        const auto v = a[start + k + half] * twiddle[k];
        a[start + k] = u + v;
        a[start + k + half] = u - v;
      }
    }
  }
}

}  // namespace fdid::fft
